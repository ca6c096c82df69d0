#include <doctest.h>

#include <limits>

#include "priorlens/exact_lp.hpp"
#include "priorlens/rng.hpp"

using namespace priorlens;

TEST_CASE("rational arithmetic stays reduced and checks overflow") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(3, 4) * Rational(4, 3) == Rational(1));
  CHECK(Rational(1, 2) / Rational(-1, 4) == Rational(-2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-7, 3).to_string() == "-7/3");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2);
  CHECK_THROWS_AS(big * big, RationalOverflow);
}

TEST_CASE("strict feasibility on small systems") {
  const auto w = strict_feasible({{1, 0}, {0, 1}}, 2);
  REQUIRE(w.has_value());
  CHECK(dot_sign({1, 0}, *w) > 0);
  CHECK(dot_sign({0, 1}, *w) > 0);
  CHECK_FALSE(strict_feasible({{1}, {-1}}, 1).has_value());
  CHECK_FALSE(strict_feasible({{1, 2}, {3, -1}, {-4, -1}}, 2).has_value());
  CHECK(strict_feasible({}, 3).has_value());
  CHECK_FALSE(strict_feasible({{0, 0}}, 2).has_value());
  CHECK_THROWS_AS(strict_feasible({{1, 2, 3}}, 2), std::invalid_argument);
}

TEST_CASE("random systems: sampled solutions imply feasibility, cancelling rows imply infeasibility") {
  Xoshiro256pp rng(6);
  LpStats stats;
  for (int k = 0; k < 300; ++k) {
    const int dim = 2 + static_cast<int>(rng.below(4));
    const int count = 1 + static_cast<int>(rng.below(8));
    std::vector<IntRow> rows;
    for (int r = 0; r < count; ++r) {
      IntRow row(static_cast<std::size_t>(dim));
      for (auto& v : row) v = static_cast<std::int64_t>(rng.below(11)) - 5;
      rows.push_back(row);
    }
    bool sampled = false;
    for (int s = 0; s < 2000 && !sampled; ++s) {
      IntRow w(static_cast<std::size_t>(dim));
      for (auto& v : w) v = static_cast<std::int64_t>(rng.below(41)) - 20;
      bool ok = true;
      for (const auto& row : rows) ok = ok && dot_sign(row, w) > 0;
      sampled = ok;
    }
    const auto w = strict_feasible(rows, dim, &stats);
    if (sampled) REQUIRE(w.has_value());
    if (w) {
      for (const auto& row : rows) REQUIRE(dot_sign(row, *w) > 0);
    }
    // A nonnegative combination summing to zero blocks every solution.
    auto blocked = rows;
    IntRow neg(static_cast<std::size_t>(dim), 0);
    for (const auto& row : rows) {
      for (int j = 0; j < dim; ++j) neg[static_cast<std::size_t>(j)] -= row[static_cast<std::size_t>(j)];
    }
    blocked.push_back(neg);
    REQUIRE_FALSE(strict_feasible(blocked, dim, &stats).has_value());
  }
  CHECK(stats.solves == 600);
}

TEST_CASE("large coefficients stay exact") {
  const std::int64_t big = std::int64_t{1} << 40;
  // Feasible only in a thin cone around (1, 1, 1).
  std::vector<IntRow> rows = {{big, -(big - 1), 0}, {0, big, -(big - 1)}, {-(big - 1), 0, big}, {1, 1, 1}};
  LpStats stats;
  const auto w = strict_feasible(rows, 3, &stats);
  REQUIRE(w.has_value());
  for (const auto& row : rows) CHECK(dot_sign(row, *w) > 0);
  rows.push_back({-1, -1, -2});
  rows.push_back({-big, big - 2, 1});
  CHECK_FALSE(strict_feasible(rows, 3, &stats).has_value());
}
