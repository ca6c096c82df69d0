#include <doctest.h>

#include <string>
#include <vector>

#include "priorlens/complexity.hpp"
#include "priorlens/oracle.hpp"
#include "priorlens/rng.hpp"
#include "support/oracles.hpp"

using namespace priorlens;

TEST_CASE("LZ76 phrase counts") {
  CHECK(lz76_phrases(OutputPattern::from_bits("0")) == 1);
  CHECK(lz76_phrases(OutputPattern::from_bits("0000000000")) == 2);
  CHECK(lz76_phrases(OutputPattern::from_bits("0101010101")) == 3);
  Xoshiro256pp rng(31);
  for (int k = 0; k < 2000; ++k) {
    const std::size_t m = 1 + rng.below(200);
    const std::uint64_t density = 1 + rng.below(7);
    std::string s;
    for (std::size_t i = 0; i < m; ++i) s += rng.below(8) < density ? '1' : '0';
    REQUIRE(lz76_phrases(OutputPattern::from_bits(s)) == oracles::lz76_naive(s));
  }
}

TEST_CASE("LZ complexity estimate") {
  OutputPattern zeros(128);
  CHECK(k_lz(zeros) == doctest::Approx(7.0));
  CHECK(k_lz(zeros.complement()) == doctest::Approx(7.0));
  CHECK(k_lz(alternating_pattern(128)) == doctest::Approx(21.0));
  // Symmetric under reversal by construction.
  Xoshiro256pp rng(4);
  OutputPattern p(128);
  for (std::size_t i = 0; i < 128; ++i) p.set(i, (rng() & 1U) != 0);
  CHECK(k_lz(p) == doctest::Approx(k_lz(p.reversed())));
  CHECK(k_lz(p) > k_lz(alternating_pattern(128)));
}

TEST_CASE("DNF and CNF reproduce the truth table") {
  const auto xor2 = OutputPattern::from_bits("0110");
  const auto d = dnf(xor2, 2);
  CHECK(d.connectives() == 3);
  CHECK(d.to_string() == "~x1&x2|x1&~x2");
  const auto f = dnf(OutputPattern(8), 3);
  CHECK(f.connectives() == 0);
  CHECK(f.to_string() == "False");
  CHECK(cnf(OutputPattern(8).complement(), 3).to_string() == "True");
  for (int n = 1; n <= 3; ++n) {
    const std::size_t m = std::size_t{1} << n;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
      OutputPattern p(m);
      for (std::size_t i = 0; i < m; ++i) p.set(i, ((code >> i) & 1U) != 0);
      REQUIRE(dnf(p, n).truth_table() == p);
      REQUIRE(cnf(p, n).truth_table() == p);
    }
  }
  CHECK_THROWS_AS(dnf(xor2, 3), std::invalid_argument);
}

TEST_CASE("linear complexity bound") {
  CHECK(kbool_bound_linear(7, 9) == 62);
  CHECK(kbool_bound_linear(7, 0) == 0);
  CHECK(kbool_bound_linear(7, 119) == 62);
  CHECK(kbool_bound_linear_loose(7, 9) == 126);
  CHECK_THROWS_AS(kbool_bound_linear(3, 9), std::invalid_argument);
}

TEST_CASE("recursive complexity bound") {
  for (int n = 1; n <= 12; ++n) CHECK(kbool_bound_recursive(n, 1) == n - 1);
  CHECK(kbool_bound_recursive(3, 2) == 4);
  CHECK(kbool_bound_recursive(3, 0) == 0);
  CHECK(kbool_bound_recursive(3, 8) == 0);
  // Strictly increasing up to the midpoint for n >= 2; at n = 1 both values are 0.
  CHECK(kbool_bound_recursive(1, 0) == kbool_bound_recursive(1, 1));
  for (int n = 2; n <= 10; ++n) {
    for (std::uint64_t t = 0; t + 1 <= (std::uint64_t{1} << (n - 1)); ++t) {
      REQUIRE(kbool_bound_recursive(n, t) < kbool_bound_recursive(n, t + 1));
    }
  }
  for (int n = 1; n <= 10; ++n) {
    for (std::uint64_t t = 0; t <= (std::uint64_t{1} << n); ++t) {
      REQUIRE(kbool_bound_recursive(n, t) == kbool_bound_recursive(n, (std::uint64_t{1} << n) - t));
      REQUIRE(kbool_bound_recursive(n, t) <= kbool_bound_linear(n, t));
    }
  }
}

TEST_CASE("minimal formulas of threshold functions respect the recursive bound") {
  for (int n = 1; n <= 3; ++n) {
    const auto cost = oracles::min_formula_costs(n);
    OracleOptions opt;
    opt.with_bias = true;
    const auto patterns = enumerate_threshold_patterns(build_input_set(n, InputKind::hypercube01), opt);
    for (const auto& p : patterns) {
      std::size_t code = 0;
      for (std::size_t i = 0; i < p.size(); ++i) code |= static_cast<std::size_t>(p.get(i)) << i;
      REQUIRE(cost[code] <= kbool_bound_recursive(n, p.popcount()));
    }
  }
  // The recursion does not bound arbitrary functions: XOR needs 3 connectives, C(2,2) = 2.
  CHECK(oracles::min_formula_costs(2)[0b0110] == 3);
  CHECK(kbool_bound_recursive(2, 2) == 2);
}

TEST_CASE("complexity tail bound") {
  CHECK(kbool_tail_bound(7, 0) == 1.0);
  CHECK(kbool_tail_bound(7, 896) == 0.0);
  CHECK(kbool_tail_bound(7, 5000) == 0.0);
  CHECK(kbool_tail_bound(7, 100) == doctest::Approx(0.88839).epsilon(1e-5));
}
