#pragma once

// Evaluation points and output patterns.
//
// Point i of a full hypercube is bin(i) with the most-significant bit first, so
// coordinate 0 of point i is bit (n-1) of i. Bit i of an OutputPattern is the
// output on point i. Every string form of a pattern uses this order.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <absl/container/inlined_vector.h>
#include <absl/hash/hash.h>

namespace priorlens {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class InputKind { hypercube01, hypercube_pm1, subsample, external };

std::string to_string(InputKind kind);

inline constexpr int kMaxHypercubeDim = 20;

class InputSet {
 public:
  InputSet(RowMatrix points, InputKind kind, std::vector<std::uint32_t> source_index = {});

  [[nodiscard]] const RowMatrix& points() const noexcept { return points_; }
  [[nodiscard]] int n() const noexcept { return static_cast<int>(points_.cols()); }
  [[nodiscard]] std::size_t m() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  [[nodiscard]] InputKind kind() const noexcept { return kind_; }
  // Hypercube index of each row for subsamples; empty otherwise.
  [[nodiscard]] const std::vector<std::uint32_t>& source_index() const noexcept {
    return source_index_;
  }
  // Full 0/1 hypercube in canonical order.
  [[nodiscard]] bool is_full_hypercube01() const noexcept {
    return kind_ == InputKind::hypercube01;
  }
  [[nodiscard]] std::string describe() const;

 private:
  RowMatrix points_;
  InputKind kind_;
  std::vector<std::uint32_t> source_index_;
};

struct Subsample {
  std::size_t size = 0;
  std::uint64_t seed = 0;
};

// kind must be hypercube01 or hypercube_pm1. A subsample keeps ascending bin order.
InputSet build_input_set(int n, InputKind kind, std::optional<Subsample> subsample = std::nullopt);

// Comma-separated numeric rows, no header.
InputSet load_input_set(const std::string& path);

// Coordinates of bin(i) in {0,1}^n, most-significant bit first.
std::vector<int> bin_point(std::uint64_t index, int n);
std::uint64_t bin_index(std::span<const int> point);

class OutputPattern {
 public:
  OutputPattern() = default;
  explicit OutputPattern(std::size_t m);

  // "0110" style, canonical order.
  static OutputPattern from_bits(std::string_view bits);
  // Hex digits carry four bits each, first bit in the high nibble position.
  static OutputPattern from_hex(std::string_view hex, std::size_t m);

  [[nodiscard]] std::size_t size() const noexcept { return m_; }
  [[nodiscard]] std::size_t word_count() const noexcept { return words_.size(); }

  [[nodiscard]] bool get(std::size_t i) const noexcept {
    return ((words_[i >> 6] >> (i & 63U)) & 1U) != 0;
  }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63U);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void clear() noexcept;

  // Bits at positions >= m stay zero.
  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept {
    return {words_.data(), words_.size()};
  }
  [[nodiscard]] std::span<std::uint64_t> words() noexcept { return {words_.data(), words_.size()}; }

  [[nodiscard]] std::size_t popcount() const noexcept;
  [[nodiscard]] OutputPattern complement() const;
  [[nodiscard]] OutputPattern reversed() const;
  [[nodiscard]] bool is_constant() const noexcept;

  [[nodiscard]] std::string to_bits() const;
  [[nodiscard]] std::string to_hex() const;

  friend bool operator==(const OutputPattern& a, const OutputPattern& b) noexcept {
    return a.m_ == b.m_ && a.words_ == b.words_;
  }
  // Lexicographic on the canonical bit string; shorter patterns first.
  friend std::strong_ordering operator<=>(const OutputPattern& a, const OutputPattern& b) noexcept;

  template <typename H>
  friend H AbslHashValue(H h, const OutputPattern& p) {
    return H::combine(H::combine_contiguous(std::move(h), p.words_.data(), p.words_.size()),
                      p.m_);
  }

 private:
  void mask_tail() noexcept;

  absl::InlinedVector<std::uint64_t, 2> words_;
  std::uint32_t m_ = 0;
};

// Alternating pattern 0101... of length m.
OutputPattern alternating_pattern(std::size_t m);

class SubsetMask {
 public:
  SubsetMask(int n, std::vector<int> coords);
  static SubsetMask all(int n);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(coords_.size()); }
  [[nodiscard]] const std::vector<int>& coords() const noexcept { return coords_; }

 private:
  int n_;
  std::vector<int> coords_;  // ascending, distinct, < n
};

[[nodiscard]] std::size_t t_value(const OutputPattern& p) noexcept;

// Binary entropy of t/m with H = 0 at the endpoints.
[[nodiscard]] double entropy(std::size_t t, std::size_t m);
[[nodiscard]] double entropy(const OutputPattern& p);

// Pattern over {0,1}^n restricted to the sub-hypercube spanned by mask.
OutputPattern restrict(const OutputPattern& p, const SubsetMask& mask);

}  // namespace priorlens
