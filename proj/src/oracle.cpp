#include "priorlens/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace priorlens {

namespace {

class Enumerator {
 public:
  Enumerator(const InputSet& inputs, const OracleOptions& options)
      : m_(inputs.m()), dim_(inputs.n() + (options.with_bias ? 1 : 0)), stats_(options.stats) {
    const auto& pts = inputs.points();
    for (std::size_t i = 0; i < m_; ++i) {
      IntRow row(static_cast<std::size_t>(dim_), 1);
      for (int c = 0; c < inputs.n(); ++c) {
        const double v = pts(static_cast<Eigen::Index>(i), c);
        if (v != std::round(v) || std::abs(v) > 1e9) {
          throw std::invalid_argument("enumerate_threshold_patterns: coordinates must be integers");
        }
        row[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(v);
      }
      rows_.push_back(std::move(row));
    }
  }

  std::set<OutputPattern> run() {
    OutputPattern p(m_);
    visit(0, IntRow(static_cast<std::size_t>(dim_), 0), p);
    return std::move(found_);
  }

 private:
  static IntRow negated(const IntRow& r) {
    IntRow out(r.size());
    std::transform(r.begin(), r.end(), out.begin(), [](std::int64_t v) { return -v; });
    return out;
  }

  void visit(std::size_t i, const IntRow& witness, OutputPattern& p) {
    if (i == m_) {
      found_.insert(p);
      return;
    }
    const IntRow& row = rows_[i];
    if (std::all_of(row.begin(), row.end(), [](std::int64_t v) { return v == 0; })) {
      // Pre-activation is identically 0, so the output is 0.
      p.set(i, false);
      visit(i + 1, witness, p);
      return;
    }
    const int s = dot_sign(row, witness);
    for (const bool label : {false, true}) {
      IntRow constraint = label ? row : negated(row);
      const int want = label ? 1 : -1;
      p.set(i, label);
      if (s == want) {
        constraints_.push_back(std::move(constraint));
        visit(i + 1, witness, p);
        constraints_.pop_back();
        continue;
      }
      constraints_.push_back(std::move(constraint));
      if (auto w = strict_feasible(constraints_, dim_, stats_)) visit(i + 1, *w, p);
      constraints_.pop_back();
    }
    p.set(i, false);
  }

  std::size_t m_;
  int dim_;
  LpStats* stats_;
  std::vector<IntRow> rows_;
  std::vector<IntRow> constraints_;
  std::set<OutputPattern> found_;
};

}  // namespace

std::set<OutputPattern> enumerate_threshold_patterns(const InputSet& inputs,
                                                     const OracleOptions& options) {
  if (inputs.m() > kMaxOraclePoints) {
    throw std::invalid_argument("enumerate_threshold_patterns: at most 32 points supported");
  }
  return Enumerator(inputs, options).run();
}

std::map<std::size_t, std::uint64_t> class_sizes(const std::set<OutputPattern>& patterns) {
  std::map<std::size_t, std::uint64_t> sizes;
  for (const auto& p : patterns) ++sizes[t_value(p)];
  return sizes;
}

bool bijectivity_check(const std::vector<double>& a) {
  const std::size_t n = a.size();
  if (n < 1 || n > 16) throw std::invalid_argument("bijectivity_check: n must be in [1, 16]");
  double scale = 0.0;
  for (const double v : a) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error("bijectivity_check: magnitudes must be strictly positive");
    }
    scale += v;
  }
  // Genericity: no signed subsum with coefficients in {-1,0,1} vanishes, i.e.
  // all 2^n subset sums are distinct.
  std::vector<double> sums{0.0};
  for (const double v : a) {
    const std::size_t k = sums.size();
    for (std::size_t j = 0; j < k; ++j) sums.push_back(sums[j] + v);
  }
  std::sort(sums.begin(), sums.end());
  for (std::size_t j = 1; j < sums.size(); ++j) {
    if (sums[j] - sums[j - 1] <= 1e-9 * scale) {
      throw std::domain_error("bijectivity_check: magnitudes are not generic");
    }
  }

  const std::size_t full = std::size_t{1} << n;
  std::vector<char> seen(full, 0);
  std::vector<double> s(full);
  for (std::size_t sigma = 0; sigma < full; ++sigma) {
    // Bit j of sigma set means a negative sign on coordinate j.
    s[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t step = std::size_t{1} << j;
      const double w = ((sigma >> j) & 1U) ? -a[j] : a[j];
      for (std::size_t i = 0; i < step; ++i) s[i + step] = s[i] + w;
    }
    std::size_t t = 0;
    for (std::size_t i = 0; i < full; ++i) t += s[i] > 0.0 ? 1 : 0;
    if (t >= full || seen[t]) return false;
    seen[t] = 1;
  }
  return true;
}

}  // namespace priorlens
