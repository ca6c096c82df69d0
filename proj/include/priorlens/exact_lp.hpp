#pragma once

// Exact feasibility of homogeneous strict systems {A w > 0}.
//
// Strict feasibility is equivalent to feasibility of A w >= 1 (scale any strict
// solution). That system is decided through its Farkas alternative
//   y >= 0, A^T y = 0, 1^T y = 1,
// solved by a phase-1 simplex with Bland's rule in exact rational arithmetic.
// When the alternative is infeasible its optimal dual yields the witness w.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace priorlens {

class RationalOverflow : public std::overflow_error {
 public:
  RationalOverflow() : std::overflow_error("rational arithmetic overflow") {}
};

// Reduced fraction of int64 parts with a positive denominator. Every operation
// checks for overflow and throws RationalOverflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit from integers
  Rational(std::int64_t num, std::int64_t den);

  [[nodiscard]] std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] std::int64_t den() const noexcept { return den_; }
  [[nodiscard]] int sign() const noexcept { return (num_ > 0) - (num_ < 0); }
  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  [[nodiscard]] std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

 private:
  static Rational reduce(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

using BigRational = boost::multiprecision::cpp_rational;

// Integer row r of the system asks <r, w> > 0.
using IntRow = std::vector<std::int64_t>;

struct LpStats {
  std::uint64_t solves = 0;
  std::uint64_t pivots = 0;
  std::uint64_t fallbacks = 0;  // solves redone in arbitrary precision
};

// Returns an integer witness with <r, w> > 0 for every row, or nullopt when the
// strict system is infeasible. All rows must have length `dim`.
std::optional<IntRow> strict_feasible(const std::vector<IntRow>& rows, int dim,
                                      LpStats* stats = nullptr);

// Sign of <r, w>, computed without overflow for |entries| < 2^62.
int dot_sign(const IntRow& row, const IntRow& w);

}  // namespace priorlens
