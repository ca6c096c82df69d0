#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "priorlens/netsample.hpp"
#include "priorlens/oracle.hpp"

using namespace priorlens;

namespace {

std::set<std::string> bit_strings(const std::set<OutputPattern>& s) {
  std::set<std::string> out;
  for (const auto& p : s) out.insert(p.to_bits());
  return out;
}

FreqTable sampled(int n, InputKind kind, bool bias, std::uint64_t samples, std::uint64_t seed) {
  WeightLaw law;
  if (bias) {
    law.bias = BiasDist::gaussian;
    law.bias_scale = 1.0;
  }
  CampaignConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  return run_campaign(NetSpec::perceptron(n, law), build_input_set(n, kind), cfg).freq;
}

}  // namespace

TEST_CASE("two inputs without bias: six patterns") {
  const auto s = enumerate_threshold_patterns(build_input_set(2, InputKind::hypercube01));
  CHECK(bit_strings(s) == std::set<std::string>{"0000", "0100", "0101", "0010", "0011", "0111"});
  OracleOptions opt;
  opt.with_bias = true;
  const auto b = enumerate_threshold_patterns(build_input_set(2, InputKind::hypercube01), opt);
  CHECK(b.size() == 14);
  CHECK_FALSE(b.contains(OutputPattern::from_bits("0110")));
  CHECK_FALSE(b.contains(OutputPattern::from_bits("1001")));
}

TEST_CASE("class sizes at small n") {
  for (int n = 1; n <= 4; ++n) {
    const auto sizes = class_sizes(enumerate_threshold_patterns(build_input_set(n, InputKind::hypercube01)));
    CHECK(sizes.at(0) == 1);
    CHECK(sizes.at(1) == static_cast<std::uint64_t>(n));
    CHECK_FALSE(sizes.contains(std::size_t{1} << n));
  }
  const auto s4 = class_sizes(enumerate_threshold_patterns(build_input_set(4, InputKind::hypercube01)));
  std::uint64_t total = 0;
  for (const auto& [t, c] : s4) total += c;
  CHECK(total == 370);
  OracleOptions opt;
  opt.with_bias = true;
  CHECK(enumerate_threshold_patterns(build_input_set(3, InputKind::hypercube01), opt).size() == 104);
  CHECK(enumerate_threshold_patterns(build_input_set(4, InputKind::hypercube01), opt).size() == 1882);
}

TEST_CASE("antipodal inputs force t = m/2") {
  const auto s = enumerate_threshold_patterns(build_input_set(4, InputKind::hypercube_pm1));
  for (const auto& p : s) REQUIRE(p.popcount() == 8);
  // The half with x_1 = +1 is a 3-input threshold function with bias w_1; the
  // other half is its negation.
  CHECK(s.size() == 104);
}

TEST_CASE("sampled support lies inside the oracle set and covers it at n = 3") {
  for (const bool bias : {false, true}) {
    const auto oracle = enumerate_threshold_patterns(build_input_set(3, InputKind::hypercube01),
                                                     OracleOptions{bias, nullptr});
    const auto f = sampled(3, InputKind::hypercube01, bias, 400000, 5);
    std::set<OutputPattern> seen;
    for (const auto& [p, c] : f.map()) seen.insert(p);
    CHECK(seen == oracle);
  }
  const auto oracle4 = enumerate_threshold_patterns(build_input_set(4, InputKind::hypercube01));
  for (const auto& [p, c] : sampled(4, InputKind::hypercube01, false, 200000, 6).map()) REQUIRE(oracle4.contains(p));
}

TEST_CASE("oracle input guards") {
  CHECK_THROWS_AS(enumerate_threshold_patterns(build_input_set(6, InputKind::hypercube01)), std::invalid_argument);
  RowMatrix frac(2, 1);
  frac << 0.5, 1.0;
  CHECK_THROWS_AS(enumerate_threshold_patterns(InputSet(frac, InputKind::external)), std::invalid_argument);
}

TEST_CASE("sign assignments of generic magnitudes hit every T once") {
  CHECK(bijectivity_check({1.0, 2.0}));
  CHECK_THROWS_AS(bijectivity_check({1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(bijectivity_check({1.0, 2.0, 3.0}), std::domain_error);
  CHECK_THROWS_AS(bijectivity_check({-1.0, 2.0}), std::domain_error);
  Xoshiro256pp rng(10);
  for (int n = 2; n <= 8; ++n) {
    for (int k = 0; k < 50; ++k) {
      std::vector<double> a(static_cast<std::size_t>(n));
      for (auto& v : a) v = 0.01 + rng.uniform01();
      std::sort(a.begin(), a.end());
      REQUIRE(bijectivity_check(a));
    }
  }
}
