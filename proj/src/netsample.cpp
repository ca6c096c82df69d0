#include "priorlens/netsample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace priorlens {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::erf:
      return "erf";
    case Activation::linear:
      return "linear";
  }
  return "unknown";
}

std::string to_string(WeightDist d) { return d == WeightDist::gaussian ? "gaussian" : "uniform"; }

std::string to_string(BiasDist d) {
  switch (d) {
    case BiasDist::none:
      return "none";
    case BiasDist::gaussian:
      return "gaussian";
    case BiasDist::uniform:
      return "uniform";
  }
  return "unknown";
}

std::string to_string(FanIn f) {
  switch (f) {
    case FanIn::none:
      return "none";
    case FanIn::fan_in:
      return "n";
    case FanIn::sqrt_fan_in:
      return "sqrt";
  }
  return "unknown";
}

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "erf") return Activation::erf;
  if (s == "linear") return Activation::linear;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

WeightDist parse_weight_dist(const std::string& s) {
  if (s == "gaussian") return WeightDist::gaussian;
  if (s == "uniform") return WeightDist::uniform;
  throw std::invalid_argument("unknown weight distribution '" + s + "'");
}

BiasDist parse_bias_dist(const std::string& s) {
  if (s == "none") return BiasDist::none;
  if (s == "gaussian") return BiasDist::gaussian;
  if (s == "uniform") return BiasDist::uniform;
  throw std::invalid_argument("unknown bias distribution '" + s + "'");
}

FanIn parse_fan_in(const std::string& s) {
  if (s == "none") return FanIn::none;
  if (s == "n") return FanIn::fan_in;
  if (s == "sqrt") return FanIn::sqrt_fan_in;
  throw std::invalid_argument("unknown fan-in rule '" + s + "' (none|n|sqrt)");
}

void WeightLaw::validate() const {
  if (!(weight_scale > 0.0) || !std::isfinite(weight_scale)) {
    throw std::invalid_argument("WeightLaw: weight scale must be positive and finite");
  }
  if (!(bias_scale >= 0.0) || !std::isfinite(bias_scale)) {
    throw std::invalid_argument("WeightLaw: bias scale must be non-negative and finite");
  }
}

double WeightLaw::layer_weight_scale(int fan_in_width) const {
  const double k = std::max(1, fan_in_width);
  switch (fan_in) {
    case FanIn::none:
      return weight_scale;
    case FanIn::fan_in:
      return weight_scale / std::sqrt(k);
    case FanIn::sqrt_fan_in:
      return weight_scale / std::sqrt(std::sqrt(k));
  }
  return weight_scale;
}

std::string WeightLaw::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << to_string(weight) << "(" << weight_scale << ");bias=" << to_string(bias) << "("
     << bias_scale << ");fan_in=" << to_string(fan_in);
  return os.str();
}

NetSpec NetSpec::perceptron(int n, WeightLaw law) {
  NetSpec s;
  s.widths = {n, 1};
  s.activation = Activation::linear;
  s.law = law;
  return s;
}

void NetSpec::validate() const {
  if (widths.size() < 2) throw std::invalid_argument("NetSpec: need at least input and output widths");
  if (widths.front() < 1) throw std::invalid_argument("NetSpec: input width must be >= 1");
  if (widths.back() != 1) throw std::invalid_argument("NetSpec: output width must be 1");
  for (std::size_t l = 1; l + 1 < widths.size(); ++l) {
    if (widths[l] < 0) throw std::invalid_argument("NetSpec: negative hidden width");
  }
  law.validate();
}

std::string NetSpec::describe() const {
  std::ostringstream os;
  os << "widths=";
  for (std::size_t i = 0; i < widths.size(); ++i) os << (i ? "," : "") << widths[i];
  os << ";activation=" << to_string(activation) << ";law=" << law.describe();
  return os.str();
}

void NetParams::check_shapes(const NetSpec& spec) const {
  const auto layers = static_cast<std::size_t>(spec.layer_count());
  if (weights.size() != layers || biases.size() != layers) {
    throw std::invalid_argument("NetParams: layer count differs from NetSpec");
  }
  for (std::size_t l = 0; l < layers; ++l) {
    if (weights[l].rows() != spec.widths[l + 1] || weights[l].cols() != spec.widths[l] ||
        biases[l].size() != spec.widths[l + 1]) {
      throw std::invalid_argument("NetParams: shape mismatch at layer " + std::to_string(l));
    }
  }
}

namespace {

double draw_weight(const WeightLaw& law, double scale, Xoshiro256pp& rng) {
  if (law.weight == WeightDist::gaussian) {
    return boost::random::normal_distribution<double>(0.0, scale)(rng);
  }
  return boost::random::uniform_real_distribution<double>(-scale, scale)(rng);
}

double draw_bias(const WeightLaw& law, Xoshiro256pp& rng) {
  switch (law.bias) {
    case BiasDist::none:
      return 0.0;
    case BiasDist::gaussian:
      return law.bias_scale > 0.0
                 ? boost::random::normal_distribution<double>(0.0, law.bias_scale)(rng)
                 : 0.0;
    case BiasDist::uniform:
      return law.bias_scale > 0.0
                 ? boost::random::uniform_real_distribution<double>(-law.bias_scale,
                                                                    law.bias_scale)(rng)
                 : 0.0;
  }
  return 0.0;
}

// Fills params in place; draw order is layer by layer, weights row-major, then biases.
void draw_into(const NetSpec& spec, Xoshiro256pp& rng, NetParams& params) {
  const auto layers = static_cast<std::size_t>(spec.layer_count());
  params.weights.resize(layers);
  params.biases.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = spec.widths[l];
    const int out = spec.widths[l + 1];
    auto& w = params.weights[l];
    auto& b = params.biases[l];
    w.resize(out, in);
    b.resize(out);
    const double scale = spec.law.layer_weight_scale(in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) w(i, j) = draw_weight(spec.law, scale, rng);
    }
    for (int i = 0; i < out; ++i) b(i) = draw_bias(spec.law, rng);
  }
}

template <typename M>
void apply_activation(Activation a, M& h) {
  switch (a) {
    case Activation::relu:
      h = h.cwiseMax(0.0);
      break;
    case Activation::tanh:
      h = h.array().tanh();
      break;
    case Activation::erf:
      h = h.unaryExpr([](double v) { return std::erf(v); });
      break;
    case Activation::linear:
      break;
  }
}

// Reusable forward pass; the final layer writes bits directly.
class Evaluator {
 public:
  Evaluator(const NetSpec& spec, const InputSet& inputs) : spec_(spec), inputs_(inputs) {
    if (spec.input_dim() != inputs.n()) {
      throw std::invalid_argument("input dimension " + std::to_string(inputs.n()) +
                                  " differs from network input width " +
                                  std::to_string(spec.input_dim()));
    }
    const int n = inputs.n();
    cube_ = spec.layer_count() == 1 && n <= kMaxHypercubeDim &&
            inputs.m() == (std::size_t{1} << n) &&
            (inputs.kind() == InputKind::hypercube01 || inputs.kind() == InputKind::hypercube_pm1);
    pm1_ = inputs.kind() == InputKind::hypercube_pm1;
    if (cube_) sums_.resize(inputs.m());
  }

  void eval(const NetParams& params, OutputPattern& out) {
    if (cube_) {
      eval_cube(params, out);
    } else {
      eval_generic(params, out);
    }
  }

 private:
  // Subset sums over the hypercube: sums_[i] = <w, bin(i)>.
  void eval_cube(const NetParams& params, OutputPattern& out) {
    const int n = inputs_.n();
    const auto& w = params.weights[0];
    const double b = params.biases[0](0);
    double* s = sums_.data();
    s[0] = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::size_t step = std::size_t{1} << j;
      const double wj = w(0, n - 1 - j);
      for (std::size_t i = 0; i < step; ++i) s[i + step] = s[i] + wj;
    }
    const std::size_t m = inputs_.m();
    double scale = 1.0;
    double shift = b;
    if (pm1_) {
      scale = 2.0;
      shift = b - w.sum();
    }
    auto words = out.words();
    for (std::size_t k = 0; k < words.size(); ++k) {
      std::uint64_t bits = 0;
      const std::size_t lo = 64 * k;
      const std::size_t hi = std::min(m, lo + 64);
      for (std::size_t i = lo; i < hi; ++i) {
        bits |= static_cast<std::uint64_t>(scale * s[i] + shift > 0.0) << (i - lo);
      }
      words[k] = bits;
    }
  }

  void eval_generic(const NetParams& params, OutputPattern& out) {
    const auto layers = static_cast<std::size_t>(spec_.layer_count());
    const RowMatrix* x = &inputs_.points();
    for (std::size_t l = 0; l < layers; ++l) {
      RowMatrix& h = buf_[l & 1U];
      h.noalias() = (*x) * params.weights[l].transpose();
      h.rowwise() += params.biases[l].transpose();
      if (l + 1 < layers) apply_activation(spec_.activation, h);
      x = &h;
    }
    out.clear();
    const auto& z = *x;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      if (z(i, 0) > 0.0) out.set(static_cast<std::size_t>(i), true);
    }
  }

  const NetSpec& spec_;
  const InputSet& inputs_;
  bool cube_ = false;
  bool pm1_ = false;
  std::vector<double> sums_;
  RowMatrix buf_[2];
};

struct ShardResult {
  FreqTable freq;
  THistogram thist;
};

void run_shard(const NetSpec& spec, const InputSet& inputs, std::uint64_t seed, unsigned shard,
               std::uint64_t count, bool keep_functions, ShardResult& result) {
  Xoshiro256pp rng = Xoshiro256pp::stream(seed, shard);
  Evaluator evaluator(spec, inputs);
  NetParams params;
  OutputPattern pattern(inputs.m());
  result.thist = THistogram(inputs.m());
  for (std::uint64_t s = 0; s < count; ++s) {
    draw_into(spec, rng, params);
    evaluator.eval(params, pattern);
    result.thist.add(pattern.popcount());
    if (keep_functions) result.freq.add(pattern);
  }
}

}  // namespace

NetParams draw_params(const NetSpec& spec, Xoshiro256pp& rng) {
  spec.validate();
  NetParams params;
  draw_into(spec, rng, params);
  return params;
}

OutputPattern eval_pattern(const NetSpec& spec, const NetParams& params, const InputSet& inputs) {
  spec.validate();
  params.check_shapes(spec);
  Evaluator evaluator(spec, inputs);
  OutputPattern out(inputs.m());
  evaluator.eval(params, out);
  return out;
}

std::vector<RowMatrix> forward_preactivations(const NetSpec& spec, const NetParams& params,
                                              const InputSet& inputs) {
  spec.validate();
  params.check_shapes(spec);
  if (spec.input_dim() != inputs.n()) throw std::invalid_argument("input dimension mismatch");
  std::vector<RowMatrix> pre;
  RowMatrix x = inputs.points();
  for (int l = 0; l < spec.layer_count(); ++l) {
    RowMatrix h = x * params.weights[l].transpose();
    h.rowwise() += params.biases[l].transpose();
    pre.push_back(h);
    apply_activation(spec.activation, h);
    x = std::move(h);
  }
  return pre;
}

CampaignResult run_campaign(const NetSpec& spec, const InputSet& inputs,
                            const CampaignConfig& config) {
  spec.validate();
  if (config.samples < 1) throw std::invalid_argument("run_campaign: samples must be >= 1");
  if (config.shards < 1) throw std::invalid_argument("run_campaign: shards must be >= 1");
  if (spec.input_dim() != inputs.n()) {
    throw std::invalid_argument("run_campaign: input dimension differs from network input width");
  }

  const unsigned shards = config.shards;
  std::vector<ShardResult> results(shards);
  auto shard_count = [&](unsigned k) {
    return config.samples / shards + (k < config.samples % shards ? 1 : 0);
  };

  unsigned threads = config.max_threads ? config.max_threads
                                        : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, shards);
  if (threads <= 1) {
    for (unsigned k = 0; k < shards; ++k) {
      run_shard(spec, inputs, config.seed, k, shard_count(k), config.keep_functions, results[k]);
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (unsigned k = t; k < shards; k += threads) {
            run_shard(spec, inputs, config.seed, k, shard_count(k), config.keep_functions,
                      results[k]);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  CampaignResult out;
  out.samples = config.samples;
  out.seed = config.seed;
  out.shards = shards;
  out.thist = THistogram(inputs.m());
  for (auto& r : results) {
    out.thist.merge(r.thist);
    if (config.keep_functions) {
      if (out.freq.distinct() == 0) {
        out.freq = std::move(r.freq);
      } else {
        out.freq.merge(r.freq);
      }
    }
  }
  return out;
}

}  // namespace priorlens
