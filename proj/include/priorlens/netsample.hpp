#pragma once

// Random parameter draws, forward evaluation and the sampling campaign driver.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "priorlens/hypercube.hpp"
#include "priorlens/rng.hpp"
#include "priorlens/tables.hpp"

namespace priorlens {

enum class Activation { relu, tanh, erf, linear };
enum class WeightDist { gaussian, uniform };
enum class BiasDist { none, gaussian, uniform };
// Weight variance divisor for a layer with fan-in k: 1, k, or sqrt(k).
enum class FanIn { none, fan_in, sqrt_fan_in };

std::string to_string(Activation a);
std::string to_string(WeightDist d);
std::string to_string(BiasDist d);
std::string to_string(FanIn f);
Activation parse_activation(const std::string& s);
WeightDist parse_weight_dist(const std::string& s);
BiasDist parse_bias_dist(const std::string& s);
FanIn parse_fan_in(const std::string& s);

struct WeightLaw {
  WeightDist weight = WeightDist::gaussian;
  double weight_scale = 1.0;  // standard deviation, or half-width when uniform
  BiasDist bias = BiasDist::none;
  double bias_scale = 0.0;  // standard deviation, or half-width when uniform
  FanIn fan_in = FanIn::none;

  void validate() const;
  // Scale actually used for a layer with the given fan-in.
  [[nodiscard]] double layer_weight_scale(int fan_in_width) const;
  [[nodiscard]] std::string describe() const;
};

struct NetSpec {
  std::vector<int> widths;  // n_0, ..., n_{L+1}; n_{L+1} = 1
  Activation activation = Activation::relu;
  WeightLaw law;

  static NetSpec perceptron(int n, WeightLaw law);

  [[nodiscard]] int input_dim() const { return widths.front(); }
  [[nodiscard]] int hidden_layers() const { return static_cast<int>(widths.size()) - 2; }
  [[nodiscard]] int layer_count() const { return static_cast<int>(widths.size()) - 1; }
  // Hidden widths of 0 are accepted: such a net outputs its final bias everywhere.
  void validate() const;
  [[nodiscard]] std::string describe() const;
};

// weights[l] has shape n_{l+1} x n_l; biases[l] has length n_{l+1}.
struct NetParams {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  void check_shapes(const NetSpec& spec) const;
};

NetParams draw_params(const NetSpec& spec, Xoshiro256pp& rng);

OutputPattern eval_pattern(const NetSpec& spec, const NetParams& params, const InputSet& inputs);

// Pre-activations of every layer on every input; entry l has shape m x n_{l+1}.
std::vector<RowMatrix> forward_preactivations(const NetSpec& spec, const NetParams& params,
                                              const InputSet& inputs);

struct CampaignConfig {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned shards = 1;
  unsigned max_threads = 0;  // 0: one thread per shard, capped by hardware
  bool keep_functions = true;
};

struct CampaignResult {
  FreqTable freq;
  THistogram thist;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned shards = 1;
};

// Shard k draws from Xoshiro256pp::stream(seed, k) and handles samples/shards
// draws (the first samples%shards shards take one more). Results depend only on
// (spec, inputs, samples, seed, shards).
CampaignResult run_campaign(const NetSpec& spec, const InputSet& inputs,
                            const CampaignConfig& config);

}  // namespace priorlens
