#include "priorlens/exact_lp.hpp"

#include <numeric>

namespace priorlens {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational Rational::reduce(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits64(num) || !fits64(den)) throw RationalOverflow();
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) { *this = reduce(num, den); }

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational::reduce(static_cast<__int128>(a.num_) + b.num_, a.den_);
  return Rational::reduce(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                          static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.num_ == 0 || b.num_ == 0) return Rational();
  return Rational::reduce(static_cast<__int128>(a.num_) * b.num_,
                          static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::reduce(static_cast<__int128>(a.num_) * b.den_,
                          static_cast<__int128>(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  if (num_ == std::numeric_limits<std::int64_t>::min()) throw RationalOverflow();
  Rational r = *this;
  r.num_ = -num_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
}

namespace {

using boost::multiprecision::cpp_int;

int sgn(const Rational& q) { return q.sign(); }
int sgn(const BigRational& q) { return q.sign(); }

cpp_int numerator_of(const Rational& q) { return cpp_int(q.num()); }
cpp_int denominator_of(const Rational& q) { return cpp_int(q.den()); }
cpp_int numerator_of(const BigRational& q) { return boost::multiprecision::numerator(q); }
cpp_int denominator_of(const BigRational& q) { return boost::multiprecision::denominator(q); }

// Phase-1 simplex on the Farkas alternative. Returns the dual witness on
// primal feasibility; counts pivots into `pivots`.
template <typename Q>
std::optional<IntRow> solve(const std::vector<IntRow>& rows, int dim, std::uint64_t& pivots) {
  const std::size_t k = rows.size();
  const std::size_t r = static_cast<std::size_t>(dim) + 1;
  const std::size_t cols = k + r;  // y columns, then artificials
  const std::size_t rhs = cols;

  std::vector<std::vector<Q>> t(r, std::vector<Q>(cols + 1, Q(0)));
  std::vector<Q> d(cols + 1, Q(0));
  std::vector<std::size_t> basis(r);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i + 1 < r; ++i) t[i][j] = Q(rows[j][i]);
    t[r - 1][j] = Q(1);
  }
  for (std::size_t i = 0; i < r; ++i) {
    t[i][k + i] = Q(1);
    basis[i] = k + i;
  }
  t[r - 1][rhs] = Q(1);
  // Reduced costs with every artificial basic at cost 1.
  for (std::size_t j = 0; j < k; ++j) {
    Q s(0);
    for (std::size_t i = 0; i < r; ++i) s += t[i][j];
    d[j] = -s;
  }
  d[rhs] = Q(-1);

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(d[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = r;
    Q best(0);
    for (std::size_t i = 0; i < r; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      const Q ratio = t[i][rhs] / t[i][enter];
      if (leave == r || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == r) throw std::logic_error("phase-1 simplex unbounded");
    ++pivots;
    const Q piv = t[leave][enter];
    for (auto& v : t[leave]) {
      if (sgn(v) != 0) v /= piv;
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      const Q f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(t[leave][j]) != 0) t[i][j] -= f * t[leave][j];
      }
    }
    if (sgn(d[enter]) != 0) {
      const Q f = d[enter];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(t[leave][j]) != 0) d[j] -= f * t[leave][j];
      }
    }
    basis[leave] = enter;
  }

  // Optimal value is -d[rhs]; zero means a Farkas certificate exists.
  if (sgn(d[rhs]) == 0) return std::nullopt;

  // Dual pi_i = 1 - d[artificial i]; w = -pi_{0..dim-1} / pi_dim.
  std::vector<Q> pi(r);
  for (std::size_t i = 0; i < r; ++i) pi[i] = Q(1) - d[k + i];
  if (sgn(pi[r - 1]) <= 0) throw std::logic_error("phase-1 dual has non-positive scale");

  cpp_int l = 1;
  for (std::size_t i = 0; i + 1 < r; ++i) {
    const cpp_int den = denominator_of(pi[i]);
    l = l / boost::multiprecision::gcd(l, den) * den;
  }
  std::vector<cpp_int> wi(static_cast<std::size_t>(dim));
  cpp_int g = 0;
  for (std::size_t i = 0; i + 1 < r; ++i) {
    wi[i] = -numerator_of(pi[i]) * (l / denominator_of(pi[i]));
    g = boost::multiprecision::gcd(g, wi[i]);
  }
  IntRow w(static_cast<std::size_t>(dim), 0);
  const cpp_int limit = cpp_int(1) << 62;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (g > 1) wi[i] /= g;
    if (boost::multiprecision::abs(wi[i]) >= limit) throw RationalOverflow();
    w[i] = static_cast<std::int64_t>(wi[i]);
  }
  return w;
}

}  // namespace

int dot_sign(const IntRow& row, const IntRow& w) {
  if (row.size() != w.size()) throw std::invalid_argument("dot_sign: length mismatch");
  __int128 acc = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    __int128 p = 0;
    if (__builtin_mul_overflow(static_cast<__int128>(row[i]), static_cast<__int128>(w[i]), &p) ||
        __builtin_add_overflow(acc, p, &acc)) {
      throw RationalOverflow();
    }
  }
  return (acc > 0) - (acc < 0);
}

std::optional<IntRow> strict_feasible(const std::vector<IntRow>& rows, int dim, LpStats* stats) {
  if (dim < 1) throw std::invalid_argument("strict_feasible: dimension must be >= 1");
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim) {
      throw std::invalid_argument("strict_feasible: row length differs from dimension");
    }
  }
  std::uint64_t pivots = 0;
  std::optional<IntRow> w;
  bool fallback = false;
  try {
    w = solve<Rational>(rows, dim, pivots);
  } catch (const RationalOverflow&) {
    fallback = true;
    w = solve<BigRational>(rows, dim, pivots);
  }
  if (stats) {
    ++stats->solves;
    stats->pivots += pivots;
    stats->fallbacks += fallback ? 1 : 0;
  }
  if (w) {
    for (const auto& row : rows) {
      if (dot_sign(row, *w) <= 0) throw std::logic_error("strict_feasible: witness check failed");
    }
  }
  return w;
}

}  // namespace priorlens
