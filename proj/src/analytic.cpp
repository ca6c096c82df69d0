#include "priorlens/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/normal_distribution.hpp>

#include "priorlens/errors.hpp"
#include "priorlens/rng.hpp"

namespace priorlens {

std::vector<double> uniform_law(int n) {
  if (n < 1 || n > kMaxHypercubeDim) throw std::invalid_argument("uniform_law: n out of range");
  const std::size_t full = std::size_t{1} << n;
  std::vector<double> p(full + 1, std::ldexp(1.0, -n));
  p[full] = 0.0;
  return p;
}

std::vector<double> infinitesimal_bias_law(int n) {
  if (n < 1 || n > kMaxHypercubeDim) {
    throw std::invalid_argument("infinitesimal_bias_law: n out of range");
  }
  const std::size_t full = std::size_t{1} << n;
  std::vector<double> p(full + 1, std::ldexp(1.0, -n));
  p[0] = p[full] = std::ldexp(1.0, -(n + 1));
  return p;
}

double avg_prob_in_class(int n, std::uint64_t class_size) {
  if (class_size < 1) throw std::invalid_argument("avg_prob_in_class: class size must be >= 1");
  return std::ldexp(1.0, -n) / static_cast<double>(class_size);
}

double alternating_prob_uniform_weights(int n) {
  if (n < 1) throw std::invalid_argument("alternating_prob_uniform_weights: n must be >= 1");
  return std::ldexp(1.0, -n) / std::tgamma(n + 1.0);
}

// Kernels

double KernelMatrix::correlation(Eigen::Index i, Eigen::Index j) const {
  const double d = k(i, i) * k(j, j);
  return d > 0.0 ? k(i, j) / std::sqrt(d) : 0.0;
}

bool KernelMatrix::is_psd(double tol) const {
  if (!k.isApprox(k.transpose(), 1e-12)) return false;
  if (k.rows() == 0) return true;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol * std::max(k.trace(), 1e-300);
}

KernelMatrix kernel_from_inputs(const InputSet& inputs, double sigma_w, double sigma_b) {
  if (!(sigma_w > 0.0) || !(sigma_b >= 0.0)) {
    throw std::invalid_argument("kernel_from_inputs: need sigma_w > 0 and sigma_b >= 0");
  }
  KernelMatrix out;
  const auto& x = inputs.points();
  out.k = (sigma_w * sigma_w / inputs.n()) * (x * x.transpose());
  out.k.array() += sigma_b * sigma_b;
  out.sigma_w = sigma_w;
  out.sigma_b = sigma_b;
  return out;
}

namespace {

constexpr double kClampTol = 1e-12;

double clamp_correlation(double rho) {
  if (std::abs(rho) > 1.0 + kClampTol || std::isnan(rho)) {
    throw NumericalError("kernel correlation " + std::to_string(rho) + " outside [-1, 1]");
  }
  return std::clamp(rho, -1.0, 1.0);
}

void check_diagonal(const Eigen::MatrixXd& k) {
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    if (k(i, i) < 0.0 || std::isnan(k(i, i))) {
      throw NumericalError("kernel has negative variance at index " + std::to_string(i));
    }
  }
}

}  // namespace

KernelMatrix relu_kernel_step(const KernelMatrix& kernel, double sigma_w, double sigma_b) {
  const auto& k = kernel.k;
  check_diagonal(k);
  const Eigen::Index m = k.rows();
  const double sb2 = sigma_b * sigma_b;
  const double sw2 = sigma_w * sigma_w;
  KernelMatrix out;
  out.k.resize(m, m);
  out.depth = kernel.depth + 1;
  out.sigma_w = sigma_w;
  out.sigma_b = sigma_b;
  for (Eigen::Index i = 0; i < m; ++i) {
    out.k(i, i) = sb2 + 0.5 * sw2 * k(i, i);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double scale = std::sqrt(k(i, i) * k(j, j));
      double v = sb2;
      if (scale > 0.0) {
        const double theta = std::acos(clamp_correlation(k(i, j) / scale));
        v += sw2 / (2.0 * std::numbers::pi) * scale *
             (std::sin(theta) + (std::numbers::pi - theta) * std::cos(theta));
      }
      out.k(i, j) = out.k(j, i) = v;
    }
  }
  return out;
}

ScalarActivation scalar_activation(Activation a) {
  switch (a) {
    case Activation::relu:
      return [](double x) { return x > 0.0 ? x : 0.0; };
    case Activation::tanh:
      return [](double x) { return std::tanh(x); };
    case Activation::erf:
      return [](double x) { return std::erf(x); };
    case Activation::linear:
      return [](double x) { return x; };
  }
  return [](double x) { return x; };
}

namespace {

constexpr double kZ = 10.0;
constexpr double kRelTol = 1e-12;
constexpr double kAbortTol = 1e-8;
constexpr unsigned kMaxDepth = 15;

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

template <unsigned N, typename F>
double integrate_rule(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, N>::integrate(
      f, a, b, kMaxDepth, kRelTol, &err, &l1);
  if (!(err <= kAbortTol) || !std::isfinite(v)) {
    throw NumericalError("quadrature did not converge (error estimate " + std::to_string(err) + ")");
  }
  return v;
}

// Integral of f over [a, b] with a breakpoint at `split` when it lies inside.
template <typename F>
double integrate(F&& f, double a, double b, double split, int order) {
  auto run = [&](double lo, double hi) {
    switch (order) {
      case 21:
        return integrate_rule<21>(f, lo, hi);
      case 31:
        return integrate_rule<31>(f, lo, hi);
      case 41:
        return integrate_rule<41>(f, lo, hi);
      case 51:
        return integrate_rule<51>(f, lo, hi);
      case 61:
        return integrate_rule<61>(f, lo, hi);
      default:
        throw std::invalid_argument("quadrature order must be one of 21, 31, 41, 51, 61");
    }
  };
  if (split > a && split < b) return run(a, split) + run(split, b);
  return run(a, b);
}

// Fixed rule on one panel; err accumulates |Kronrod - Gauss|.
template <unsigned N, typename F>
double panel_rule(F&& f, double a, double b, double& err) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, N>::integrate(f, a, b, 0, 0.0, &e);
  err += e;
  return v;
}

// Integral over [a, b] on a mesh graded geometrically away from `split`, the
// finest panel being `width`. Non-adaptive, so the result is a smooth function
// of the integrand's parameters and can itself be integrated adaptively.
template <typename F>
double integrate_graded(F&& f, double a, double b, double split, double width, int order,
                        double& err) {
  std::vector<double> cuts{a, b};
  split = std::clamp(split, a, b);
  cuts.push_back(split);
  for (double h = width; h < b - a; h *= 2) {
    cuts.push_back(split - h);
    cuts.push_back(split + h);
  }
  for (double x = std::ceil(a); x < b; x += 2.0) cuts.push_back(x);
  std::erase_if(cuts, [&](double x) { return x < a || x > b; });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double lo = cuts[k - 1];
    const double hi = cuts[k];
    switch (order) {
      case 21:
        total += panel_rule<21>(f, lo, hi, err);
        break;
      case 31:
        total += panel_rule<31>(f, lo, hi, err);
        break;
      case 41:
        total += panel_rule<41>(f, lo, hi, err);
        break;
      case 51:
        total += panel_rule<51>(f, lo, hi, err);
        break;
      case 61:
        total += panel_rule<61>(f, lo, hi, err);
        break;
      default:
        throw std::invalid_argument("quadrature order must be one of 21, 31, 41, 51, 61");
    }
  }
  return total;
}

}  // namespace

double gaussian_expectation(const ScalarActivation& g, int order) {
  return integrate([&](double z) { return g(z) * normal_pdf(z); }, -kZ, kZ, 0.0, order);
}

double gaussian_pair_expectation(const ScalarActivation& phi, double c, double q1, double q2,
                                 int order) {
  if (!(q1 >= 0.0) || !(q2 >= 0.0)) throw std::invalid_argument("variances must be >= 0");
  c = clamp_correlation(c);
  const double r1 = std::sqrt(q1);
  const double r2 = std::sqrt(q2);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  if (s == 0.0) {
    return gaussian_expectation([&](double z) { return phi(r1 * z) * phi(c * r2 * z); }, order);
  }
  // The inner integrand turns over within 1/(r2 s) of its breakpoint.
  const double width = std::min(1.0, 0.5 / (r2 * s));
  double inner_err = 0.0;
  auto outer = [&](double z1) {
    const double a = phi(r1 * z1);
    if (a == 0.0) return 0.0;
    auto inner = [&](double z2) { return phi(r2 * (c * z1 + s * z2)) * normal_pdf(z2); };
    double err = 0.0;
    const double v = integrate_graded(inner, -kZ, kZ, -c * z1 / s, width, order, err);
    inner_err = std::max(inner_err, err);
    return a * normal_pdf(z1) * v;
  };
  const double v = integrate(outer, -kZ, kZ, 0.0, order);
  if (!(inner_err <= kAbortTol)) {
    throw NumericalError("inner quadrature error estimate " + std::to_string(inner_err));
  }
  return v;
  return integrate(outer, -kZ, kZ, 0.0, order);
}

CorrelationState tanh_correlation_step(const CorrelationState& s, double sigma_w, double sigma_b,
                                       int order, const ScalarActivation& phi) {
  if (order < 16) throw std::invalid_argument("quadrature order must be >= 16");
  if (!(s.q11 > 0.0) || !(s.q22 > 0.0) || std::abs(s.c12) > 1.0 + kClampTol) {
    throw std::invalid_argument("invalid correlation state");
  }
  const double sw2 = sigma_w * sigma_w;
  const double sb2 = sigma_b * sigma_b;
  auto var = [&](double q) {
    const double r = std::sqrt(q);
    return sw2 * gaussian_expectation([&](double z) { const double v = phi(r * z); return v * v; },
                                      order) +
           sb2;
  };
  CorrelationState out;
  out.q11 = var(s.q11);
  out.q22 = s.q22 == s.q11 ? out.q11 : var(s.q22);
  const double q12 = sw2 * gaussian_pair_expectation(phi, s.c12, s.q11, s.q22, order) + sb2;
  out.c12 = std::clamp(q12 / std::sqrt(out.q11 * out.q22), -1.0, 1.0);
  return out;
}

const char* to_string(Regime r) { return r == Regime::ordered ? "ordered" : "chaotic"; }

RegimeInfo classify_regime(double sigma_w, double sigma_b, const ScalarActivation& phi) {
  if (!(sigma_w >= 0.0) || !(sigma_b >= 0.0)) throw std::invalid_argument("negative sigma");
  const double sw2 = sigma_w * sigma_w;
  const double sb2 = sigma_b * sigma_b;
  RegimeInfo info;
  double q = 1.0;
  bool converged = false;
  for (int it = 0; it < 2000; ++it) {
    const double r = std::sqrt(q);
    const double next =
        sw2 * gaussian_expectation([&](double z) { const double v = phi(r * z); return v * v; }) +
        sb2;
    if (!std::isfinite(next) || next > 1e12) {
      throw NumericalError("variance fixed-point iteration diverged");
    }
    const bool done = std::abs(next - q) <= 1e-13 * std::max(1.0, q);
    q = next;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged && q > 1e-12) throw NumericalError("variance fixed-point iteration did not converge");
  info.q_star = q;
  if (q <= 1e-12) {
    // Variance collapses to 0: every input maps to the same constant.
    info.regime = Regime::ordered;
    return info;
  }
  constexpr double h = 1e-4;
  const CorrelationState near = tanh_correlation_step({1.0 - h, q, q}, sigma_w, sigma_b, 31, phi);
  info.slope = (1.0 - near.c12) / h;
  info.regime = info.slope > 1.0 ? Regime::chaotic : Regime::ordered;
  return info;
}

KernelMatrix smooth_kernel_step(const KernelMatrix& kernel, double sigma_w, double sigma_b,
                                const ScalarActivation& phi, int order) {
  const auto& k = kernel.k;
  check_diagonal(k);
  const Eigen::Index m = k.rows();
  const double sw2 = sigma_w * sigma_w;
  const double sb2 = sigma_b * sigma_b;
  std::map<double, double> diag_memo;
  std::map<std::tuple<double, double, double>, double> pair_memo;
  auto second_moment = [&](double q) {
    auto [it, fresh] = diag_memo.try_emplace(q, 0.0);
    if (fresh) {
      const double r = std::sqrt(q);
      it->second =
          gaussian_expectation([&](double z) { const double v = phi(r * z); return v * v; }, order);
    }
    return it->second;
  };
  KernelMatrix out;
  out.k.resize(m, m);
  out.depth = kernel.depth + 1;
  out.sigma_w = sigma_w;
  out.sigma_b = sigma_b;
  const double phi0 = phi(0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.k(i, i) = sb2 + sw2 * (k(i, i) > 0.0 ? second_moment(k(i, i)) : phi0 * phi0);
    for (Eigen::Index j = 0; j < i; ++j) {
      double qa = k(i, i);
      double qb = k(j, j);
      double e = 0.0;
      if (qa > 0.0 && qb > 0.0) {
        const double c = clamp_correlation(k(i, j) / std::sqrt(qa * qb));
        if (qa > qb) std::swap(qa, qb);
        auto [it, fresh] = pair_memo.try_emplace({c, qa, qb}, 0.0);
        if (fresh) it->second = gaussian_pair_expectation(phi, c, qa, qb, order);
        e = it->second;
      } else {
        // One argument is deterministically 0.
        const double q = std::max(qa, qb);
        e = phi0 * (q > 0.0 ? gaussian_expectation([&](double z) { return phi(std::sqrt(q) * z); },
                                                    order)
                            : phi0);
      }
      out.k(i, j) = out.k(j, i) = sb2 + sw2 * e;
    }
  }
  return out;
}

KernelMatrix kernel_at_depth(const InputSet& inputs, int depth, double sigma_w, double sigma_b,
                             Activation act) {
  if (depth < 0) throw std::invalid_argument("kernel_at_depth: depth must be >= 0");
  KernelMatrix k = kernel_from_inputs(inputs, sigma_w, sigma_b);
  const ScalarActivation phi = scalar_activation(act);
  for (int l = 0; l < depth; ++l) {
    switch (act) {
      case Activation::relu:
        k = relu_kernel_step(k, sigma_w, sigma_b);
        break;
      case Activation::linear: {
        const int d = k.depth;
        k.k = (sigma_w * sigma_w) * k.k;
        k.k.array() += sigma_b * sigma_b;
        k.depth = d + 1;
        break;
      }
      default:
        k = smooth_kernel_step(k, sigma_w, sigma_b, phi);
    }
  }
  return k;
}

THistogram gp_t_distribution(const KernelMatrix& kernel, const GpConfig& config) {
  const Eigen::Index m = kernel.size();
  if (m < 1 || static_cast<std::size_t>(m) > kMaxGpPoints) {
    throw std::invalid_argument("gp_t_distribution: point count must be in [1, 4096]");
  }
  if (config.samples < 1 || config.shards < 1) {
    throw std::invalid_argument("gp_t_distribution: samples and shards must be >= 1");
  }
  check_diagonal(kernel.k);

  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (kernel.k(i, i) > 0.0) active.push_back(i);
  }
  const auto d = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd chol;
  if (d > 0) {
    Eigen::MatrixXd ka(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) ka(a, b) = kernel.k(active[a], active[b]);
    }
    const double mean_diag = ka.diagonal().mean();
    bool ok = false;
    for (double jitter = 1e-10; jitter <= 1e-6 * (1 + 1e-9); jitter *= 2) {
      Eigen::MatrixXd kj = ka;
      kj.diagonal().array() += jitter * mean_diag;
      Eigen::LLT<Eigen::MatrixXd> llt(kj);
      if (llt.info() == Eigen::Success) {
        chol = llt.matrixL();
        ok = true;
        break;
      }
    }
    if (!ok) throw NumericalError("kernel factorization failed at maximum jitter 1e-6");
  }

  const unsigned shards = config.shards;
  std::vector<THistogram> parts(shards, THistogram(static_cast<std::size_t>(m)));
  auto run = [&](unsigned k) {
    const std::uint64_t count = config.samples / shards + (k < config.samples % shards ? 1 : 0);
    Xoshiro256pp rng = Xoshiro256pp::stream(config.seed, k);
    boost::random::normal_distribution<double> normal;
    constexpr std::uint64_t kBatch = 2048;
    Eigen::MatrixXd g;
    Eigen::MatrixXd z;
    for (std::uint64_t done = 0; done < count;) {
      const auto b = static_cast<Eigen::Index>(std::min(kBatch, count - done));
      if (d == 0) {
        parts[k].add(0, static_cast<std::uint64_t>(b));
        done += static_cast<std::uint64_t>(b);
        continue;
      }
      g.resize(d, b);
      for (Eigen::Index c = 0; c < b; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) g(r, c) = normal(rng);
      }
      z.noalias() = chol.triangularView<Eigen::Lower>() * g;
      for (Eigen::Index c = 0; c < b; ++c) {
        parts[k].add(static_cast<std::size_t>((z.col(c).array() > 0.0).count()));
      }
      done += static_cast<std::uint64_t>(b);
    }
  };

  unsigned threads = config.max_threads ? config.max_threads
                                        : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, shards);
  if (threads <= 1) {
    for (unsigned k = 0; k < shards; ++k) run(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (unsigned k = t; k < shards; k += threads) run(k);
      });
    }
    for (auto& th : pool) th.join();
  }
  THistogram out(static_cast<std::size_t>(m));
  for (const auto& p : parts) out.merge(p);
  return out;
}

THistogram gp_t_distribution(const InputSet& inputs, int depth, double sigma_w, double sigma_b,
                             const GpConfig& config, Activation act) {
  if (inputs.m() > kMaxGpPoints) {
    throw std::invalid_argument("gp_t_distribution: point count must be <= 4096");
  }
  return gp_t_distribution(kernel_at_depth(inputs, depth, sigma_w, sigma_b, act), config);
}

}  // namespace priorlens
