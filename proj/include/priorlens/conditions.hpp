#pragma once

// Sign signatures, sorted magnitudes and the multi-term inequality conditions
// that carve the magnitude cone into threshold-function regions.
//
// A weight vector is sigma * a with sigma in {-1,+1}^n and 0 < a_1 < ... < a_n.
// Magnitude i (1-based in strings) pairs with input coordinate i-1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "priorlens/exact_lp.hpp"
#include "priorlens/hypercube.hpp"

namespace priorlens {

using Signature = std::vector<int>;  // entries -1 or +1

// "+-+-" over the first `len` entries.
std::string signature_string(const Signature& sigma, std::size_t len);
Signature parse_signature(const std::string& s);

// Number of hypercube points mapped to 1 by every magnitude vector.
std::size_t t_min(const Signature& sigma);
// 2^n - 1 - t_min(-sigma).
std::size_t t_max(const Signature& sigma);
// t_max of the signature positive only at position k (1-based): 2^{k-1}.
std::uint64_t t_max_special(int k, int n);

// Signatures negative beyond position t with t_min <= t <= t_max, ordered by
// the signature read as a binary number with + as 1 and position 1 first.
std::vector<Signature> enumerate_signatures(int n, std::size_t t);

// sum_i coeffs[i] * a_{i+1} > 0.
struct LinearCondition {
  IntRow coeffs;

  [[nodiscard]] LinearCondition complement() const;
  [[nodiscard]] int involved() const;
  [[nodiscard]] int max_index() const;  // 0-based, -1 when empty
  // Orientation with a positive coefficient on the largest magnitude.
  [[nodiscard]] bool canonical() const;
  [[nodiscard]] LinearCondition canonical_form() const;
  // "a4>a1+a2": the side holding the largest magnitude is written first.
  [[nodiscard]] std::string to_string() const;
  // "a4 vs a1+a2".
  [[nodiscard]] std::string question() const;

  friend bool operator==(const LinearCondition&, const LinearCondition&) = default;
};

struct ConditionLeaf {
  Signature sigma;
  std::vector<LinearCondition> conditions;  // irredundant, beyond the ordering constraints
  IntRow witness;                           // interior magnitude vector, strictly increasing
  OutputPattern pattern;                    // function of sigma * witness on {0,1}^n
};

struct ConditionNode {
  // Internal nodes: question plus children for the "<" and ">" outcomes.
  std::optional<LinearCondition> question;
  int less = -1;
  int greater = -1;
  // Leaf nodes.
  int leaf = -1;
};

class ConditionTree {
 public:
  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] std::size_t t() const noexcept { return t_; }
  [[nodiscard]] const std::vector<ConditionLeaf>& leaves() const noexcept { return leaves_; }
  [[nodiscard]] const std::vector<ConditionNode>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] int root() const noexcept { return root_; }

  // Indented text form: questions, then "<" and ">" branches in that order.
  [[nodiscard]] std::string render() const;
  // Leaf reached by a magnitude vector, following questions; -1 on a tie.
  [[nodiscard]] int locate(const std::vector<double>& a) const;

  friend ConditionTree build_condition_tree(int n, std::size_t t, LpStats* stats);

 private:
  void render_node(int id, int indent, std::string& out) const;

  int n_ = 0;
  std::size_t t_ = 0;
  std::vector<ConditionLeaf> leaves_;
  std::vector<ConditionNode> nodes_;
  int root_ = -1;
};

inline constexpr int kMaxConditionDim = 8;

// Leaves for one signature: every function with popcount t reachable from sigma.
std::vector<ConditionLeaf> signature_leaves(const Signature& sigma, std::size_t t,
                                            LpStats* stats = nullptr);

ConditionTree build_condition_tree(int n, std::size_t t, LpStats* stats = nullptr);

// Hypercube points whose hyperplanes bound the region of a threshold pattern
// (no bias), as bin indices. Throws std::invalid_argument if not realizable.
std::vector<std::size_t> cone_facets(const OutputPattern& pattern, int n, LpStats* stats = nullptr);

struct ChainFunction {
  OutputPattern pattern;
  IntRow weights;
  std::vector<std::size_t> facets;  // bin indices of bounding hyperplanes
  int upsilon_facets = 0;           // facets through points with >= 3 ones
};

// Pattern with p_i = (1,..,1,0,..,0) (i ones) mapped to i mod 2, built one
// coordinate at a time: each new weight lies just past the p_{i} hyperplane.
ChainFunction chain_function(int n, LpStats* stats = nullptr);

}  // namespace priorlens
