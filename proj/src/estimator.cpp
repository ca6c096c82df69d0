#include "priorlens/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace priorlens {

namespace {

double chi2_sf(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  if (!std::isfinite(statistic)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof),
                                                  statistic));
}

}  // namespace

ChiSquare chi_square_uniformity(const THistogram& h, std::size_t support) {
  if (h.samples() == 0) throw std::invalid_argument("chi_square_uniformity: empty histogram");
  if (support < 2 || support > h.counts().size()) {
    throw std::invalid_argument("chi_square_uniformity: support must be in [2, m+1]");
  }
  const double expected = static_cast<double>(h.samples()) / static_cast<double>(support);
  ChiSquare r;
  r.dof = static_cast<int>(support) - 1;
  for (std::size_t t = 0; t < h.counts().size(); ++t) {
    const double obs = static_cast<double>(h.counts()[t]);
    if (t >= support) {
      if (obs > 0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    r.statistic += (obs - expected) * (obs - expected) / expected;
  }
  r.p_value = chi2_sf(r.statistic, r.dof);
  return r;
}

ChiSquare chi_square_homogeneity(const THistogram& a, const THistogram& b) {
  if (a.samples() == 0 || b.samples() == 0) {
    throw std::invalid_argument("chi_square_homogeneity: empty histogram");
  }
  if (a.counts().size() != b.counts().size()) {
    throw std::invalid_argument("chi_square_homogeneity: histograms differ in m");
  }
  const double na = static_cast<double>(a.samples());
  const double nb = static_cast<double>(b.samples());
  const double total = na + nb;
  ChiSquare r;
  int bins = 0;
  for (std::size_t t = 0; t < a.counts().size(); ++t) {
    const double oa = static_cast<double>(a.counts()[t]);
    const double ob = static_cast<double>(b.counts()[t]);
    const double pooled = oa + ob;
    if (pooled == 0) continue;
    ++bins;
    const double ea = na * pooled / total;
    const double eb = nb * pooled / total;
    r.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  r.dof = bins - 1;
  r.p_value = chi2_sf(r.statistic, r.dof);
  return r;
}

RankCurve rank_curve(const FreqTable& f, std::uint64_t cutoff) {
  RankCurve r;
  r.cutoff = cutoff;
  r.samples = f.samples();
  const double total = static_cast<double>(f.samples());
  std::size_t rank = 0;
  for (auto& [pattern, count] : f.sorted()) {
    if (count <= cutoff) break;
    r.points.push_back({++rank, static_cast<double>(count) / total, pattern, count});
  }
  return r;
}

double zipf_n_o(double a, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("zipf_n_o: b must be positive");
  if (std::abs(1.0 - a) < 1e-12) return std::exp(1.0 / b);
  // (N^{1-a} - 1) / (1-a) = 1/b.
  const double u = (1.0 - a) / b;
  if (1.0 + u <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp(std::log1p(u) / (1.0 - a));
}

ZipfFit zipf_fit(const RankCurve& r) {
  const std::size_t k = r.points.size();
  if (k < 10) throw std::invalid_argument("zipf_fit: need at least 10 retained ranks");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : r.points) {
    const double x = std::log10(static_cast<double>(p.rank));
    const double y = std::log10(p.probability);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double kd = static_cast<double>(k);
  const double denom = kd * sxx - sx * sx;
  if (!(denom > 0.0)) throw std::invalid_argument("zipf_fit: degenerate ranks");
  ZipfFit fit;
  fit.points = k;
  fit.slope = (kd * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / kd;
  fit.a = -fit.slope;
  fit.b = std::pow(10.0, fit.intercept);
  double ss = 0;
  for (const auto& p : r.points) {
    const double e = std::log10(p.probability) -
                     (fit.slope * std::log10(static_cast<double>(p.rank)) + fit.intercept);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / kd);
  fit.n_o = zipf_n_o(fit.a, fit.b);
  return fit;
}

double t_moment(const THistogram& h, int q) {
  if (q < 1) throw std::invalid_argument("t_moment: order must be >= 1");
  if (h.samples() == 0) throw std::invalid_argument("t_moment: empty histogram");
  double acc = 0;
  for (std::size_t t = 0; t < h.counts().size(); ++t) {
    acc += std::pow(static_cast<double>(t), q) * static_cast<double>(h.counts()[t]);
  }
  return acc / static_cast<double>(h.samples());
}

double mean_entropy(const THistogram& h) {
  if (h.samples() == 0) throw std::invalid_argument("mean_entropy: empty histogram");
  const std::size_t m = h.m();
  double acc = 0;
  for (std::size_t t = 0; t <= m; ++t) acc += entropy(t, m) * static_cast<double>(h.counts()[t]);
  return acc / static_cast<double>(h.samples());
}

double subset_marginal(const FreqTable& f, const SubsetMask& mask, std::size_t t) {
  if (f.samples() == 0) throw std::invalid_argument("subset_marginal: empty table");
  std::uint64_t hits = 0;
  for (const auto& [pattern, count] : f.map()) {
    if (restrict(pattern, mask).popcount() == t) hits += count;
  }
  return static_cast<double>(hits) / static_cast<double>(f.samples());
}

}  // namespace priorlens
