#include "priorlens/expressivity.hpp"

#include <stdexcept>
#include <vector>

namespace priorlens {

namespace {

struct Clauses {
  std::vector<std::size_t> points;
  bool negated = false;
};

Clauses select_clauses(const OutputPattern& pattern, int n) {
  if (n < 1 || n > kMaxHypercubeDim || pattern.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("expressivity: pattern length must be 2^n");
  }
  const std::size_t t = pattern.popcount();
  Clauses c;
  c.negated = t > pattern.size() - t;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern.get(i) != c.negated) c.points.push_back(i);
  }
  return c;
}

void set_clause(Eigen::MatrixXd& w, Eigen::VectorXd& b, Eigen::Index row, Eigen::Index col0,
                std::size_t point, int n) {
  int positives = 0;
  for (int c = 0; c < n; ++c) {
    const bool bit = (point >> (n - 1 - c)) & 1U;
    w(row, col0 + c) = bit ? 1.0 : -1.0;
    positives += bit ? 1 : 0;
  }
  b(row) = 1.0 - positives;
}

WeightLaw construction_law() {
  WeightLaw law;
  law.bias = BiasDist::gaussian;
  return law;
}

}  // namespace

CompiledNet build_one_hidden(const OutputPattern& pattern, int n) {
  const Clauses c = select_clauses(pattern, n);
  const auto h = static_cast<Eigen::Index>(c.points.size());
  CompiledNet out;
  out.spec.widths = {n, static_cast<int>(h), 1};
  out.spec.activation = Activation::relu;
  out.spec.law = construction_law();
  out.negated = c.negated;
  out.clause_count = static_cast<int>(h);

  Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(h, n);
  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(h);
  for (Eigen::Index j = 0; j < h; ++j) set_clause(w1, b1, j, 0, c.points[static_cast<std::size_t>(j)], n);
  Eigen::MatrixXd w2 = Eigen::MatrixXd::Constant(1, h, c.negated ? -1.0 : 1.0);
  Eigen::VectorXd b2 = Eigen::VectorXd::Constant(1, c.negated ? 0.5 : 0.0);
  out.params.weights = {w1, w2};
  out.params.biases = {b1, b2};
  return out;
}

CompiledNet build_multi_layer(const OutputPattern& pattern, int n, int l) {
  if (l < 1) throw std::invalid_argument("build_multi_layer: need at least one hidden layer");
  const Clauses c = select_clauses(pattern, n);
  const auto total = static_cast<int>(c.points.size());
  const int k = (total + l - 1) / l;
  const int width = n + k + 1;
  const int acc = n + k;  // accumulator index within a hidden layer

  CompiledNet out;
  out.spec.widths.assign(static_cast<std::size_t>(l) + 2, width);
  out.spec.widths.front() = n;
  out.spec.widths.back() = 1;
  out.spec.activation = Activation::relu;
  out.spec.law = construction_law();
  out.negated = c.negated;
  out.clause_count = total;

  for (int layer = 0; layer < l; ++layer) {
    const int in = layer == 0 ? n : width;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(width, in);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(width);
    for (int i = 0; i < n; ++i) w(i, i) = 1.0;  // passthrough of the raw inputs
    for (int j = 0; j < k; ++j) {
      const int idx = layer * k + j;
      if (idx < total) set_clause(w, b, n + j, 0, c.points[static_cast<std::size_t>(idx)], n);
    }
    if (layer > 0) {
      // Accumulator sums the previous layer's clause block and accumulator.
      for (int j = 0; j <= k; ++j) w(acc, n + j) = 1.0;
    }
    out.params.weights.push_back(std::move(w));
    out.params.biases.push_back(std::move(b));
  }
  Eigen::MatrixXd wo = Eigen::MatrixXd::Zero(1, width);
  for (int j = 0; j <= k; ++j) wo(0, n + j) = c.negated ? -1.0 : 1.0;
  out.params.weights.push_back(std::move(wo));
  out.params.biases.push_back(Eigen::VectorXd::Constant(1, c.negated ? 0.5 : 0.0));
  return out;
}

bool verify(const NetSpec& spec, const NetParams& params, const OutputPattern& pattern) {
  const int n = spec.input_dim();
  if (n > kMaxHypercubeDim || pattern.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("verify: pattern length must be 2^n for the network input width");
  }
  const InputSet cube = build_input_set(n, InputKind::hypercube01);
  return eval_pattern(spec, params, cube) == pattern;
}

}  // namespace priorlens
