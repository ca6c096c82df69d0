#pragma once

// Empirical objects derived from campaign tables.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "priorlens/hypercube.hpp"
#include "priorlens/tables.hpp"

namespace priorlens {

struct ChiSquare {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
};

// Pearson test of counts[0..support) against the uniform law on that support.
// Mass outside the support makes the statistic infinite.
ChiSquare chi_square_uniformity(const THistogram& h, std::size_t support);

// Pearson test of homogeneity between two histograms over bins with nonzero pooled count.
ChiSquare chi_square_homogeneity(const THistogram& a, const THistogram& b);

struct RankPoint {
  std::size_t rank = 0;
  double probability = 0.0;
  OutputPattern pattern;
  std::uint64_t count = 0;
};

struct RankCurve {
  std::vector<RankPoint> points;
  std::uint64_t cutoff = 0;  // retained counts are > cutoff
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kDefaultCutoff = 2;

RankCurve rank_curve(const FreqTable& f, std::uint64_t cutoff = kDefaultCutoff);

struct ZipfFit {
  double slope = 0.0;      // log10 p = slope * log10 rank + intercept
  double intercept = 0.0;
  double a = 0.0;          // -slope
  double b = 0.0;          // 10^intercept
  double n_o = 0.0;        // +inf when the model does not normalize
  double residual = 0.0;   // RMS of log10 residuals
  std::size_t points = 0;
};

ZipfFit zipf_fit(const RankCurve& r);

// N_O with b * integral_1^{N_O} r^{-a} dr = 1; a = 1 gives exp(1/b).
double zipf_n_o(double a, double b);

double t_moment(const THistogram& h, int q);
double mean_entropy(const THistogram& h);

// Fraction of samples whose pattern restricted to mask has popcount t.
double subset_marginal(const FreqTable& f, const SubsetMask& mask, std::size_t t);

}  // namespace priorlens
