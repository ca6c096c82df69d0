#pragma once

// Closed-form laws and infinite-width kernel predictions.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "priorlens/hypercube.hpp"
#include "priorlens/netsample.hpp"
#include "priorlens/tables.hpp"

namespace priorlens {

// P(T=t) for t in [0, 2^n].
std::vector<double> uniform_law(int n);
std::vector<double> infinitesimal_bias_law(int n);

double avg_prob_in_class(int n, std::uint64_t class_size);

// P(pattern 0101...) for centered uniform weights and no bias: 2^-n / n!.
double alternating_prob_uniform_weights(int n);

struct KernelMatrix {
  Eigen::MatrixXd k;
  int depth = 0;
  double sigma_w = 1.0;
  double sigma_b = 0.0;

  [[nodiscard]] Eigen::Index size() const noexcept { return k.rows(); }
  // Correlation k_ij / sqrt(k_ii k_jj); 0 where a variance is 0.
  [[nodiscard]] double correlation(Eigen::Index i, Eigen::Index j) const;
  // Symmetric and smallest eigenvalue >= -tol * trace.
  [[nodiscard]] bool is_psd(double tol = 1e-8) const;
};

// Depth-0 kernel sigma_b^2 + sigma_w^2 <x,x'> / n.
KernelMatrix kernel_from_inputs(const InputSet& inputs, double sigma_w, double sigma_b);

// Arc-cosine recursion. Zero variances are allowed and stay at sigma_b^2;
// negative variances and correlations beyond 1 + 1e-12 throw.
KernelMatrix relu_kernel_step(const KernelMatrix& kernel, double sigma_w, double sigma_b);

struct CorrelationState {
  double c12 = 0.0;
  double q11 = 1.0;
  double q22 = 1.0;
};

using ScalarActivation = std::function<double(double)>;
ScalarActivation scalar_activation(Activation a);

// Adaptive Gauss-Kronrod expectations over standard normals on [-10, 10].
// `order` is the Kronrod node count per panel (31 or 61). Panels are bisected,
// at most 15 levels, until the embedded Gauss estimate agrees to 1e-12
// relative; a final disagreement above 1e-8 throws NumericalError.
double gaussian_expectation(const ScalarActivation& g, int order = 31);
// E[phi(sqrt(q1) z1) phi(sqrt(q2) (c z1 + sqrt(1-c^2) z2))]. The outer integral
// is adaptive; the inner one uses fixed panels graded towards the sign change
// at z2 = -c z1 / sqrt(1-c^2), and its summed error estimate must stay below 1e-8.
double gaussian_pair_expectation(const ScalarActivation& phi, double c, double q1, double q2,
                                 int order = 31);

CorrelationState tanh_correlation_step(const CorrelationState& s, double sigma_w, double sigma_b,
                                       int order = 31,
                                       const ScalarActivation& phi = scalar_activation(Activation::tanh));

enum class Regime { ordered, chaotic };
const char* to_string(Regime r);

struct RegimeInfo {
  Regime regime = Regime::ordered;
  double q_star = 0.0;
  double slope = 0.0;  // one-sided slope of the correlation map at c = 1
};

RegimeInfo classify_regime(double sigma_w, double sigma_b,
                           const ScalarActivation& phi = scalar_activation(Activation::tanh));

// One layer of the kernel recursion for a smooth activation, evaluated by
// quadrature with memoization on identical (c, q, q') triples.
KernelMatrix smooth_kernel_step(const KernelMatrix& kernel, double sigma_w, double sigma_b,
                                const ScalarActivation& phi, int order = 31);

// Kernel after `depth` hidden layers of the given activation.
KernelMatrix kernel_at_depth(const InputSet& inputs, int depth, double sigma_w, double sigma_b,
                             Activation act = Activation::relu);

struct GpConfig {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned shards = 1;
  unsigned max_threads = 0;
};

inline constexpr std::size_t kMaxGpPoints = 4096;

// Draws N(0, K) vectors and histograms the number of positive entries. Points
// with zero variance output 0. The same seed reuses the same normal draws, so
// sweeps over depth share random numbers.
THistogram gp_t_distribution(const KernelMatrix& kernel, const GpConfig& config);
THistogram gp_t_distribution(const InputSet& inputs, int depth, double sigma_w, double sigma_b,
                             const GpConfig& config, Activation act = Activation::relu);

}  // namespace priorlens
