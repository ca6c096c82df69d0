#pragma once

// xoshiro256++ with the 2^128 jump. Stream k of a seed is the seeded state
// advanced by k jumps, so streams never overlap for fewer than 2^128 draws each.

#include <array>
#include <cstdint>
#include <limits>

namespace priorlens {

class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0) noexcept;

  // Stream `index` derived from `seed`.
  static Xoshiro256pp stream(std::uint64_t seed, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  void jump() noexcept;

  // Uniform in [0, bound) without modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept;

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  [[nodiscard]] const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  static constexpr const char* kName = "xoshiro256++/jump128/splitmix64-seeded";

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace priorlens
