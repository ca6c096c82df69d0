#include "priorlens/conditions.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace priorlens {

std::string signature_string(const Signature& sigma, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < std::min(len, sigma.size()); ++i) s += sigma[i] > 0 ? '+' : '-';
  return s;
}

Signature parse_signature(const std::string& s) {
  Signature sigma;
  for (const char c : s) {
    if (c != '+' && c != '-') throw std::invalid_argument("signature must contain only + and -");
    sigma.push_back(c == '+' ? 1 : -1);
  }
  return sigma;
}

namespace {

void check_signature(const Signature& sigma) {
  if (sigma.empty() || static_cast<int>(sigma.size()) > kMaxHypercubeDim) {
    throw std::invalid_argument("signature length must be in [1, 20]");
  }
  for (const int s : sigma) {
    if (s != 1 && s != -1) throw std::invalid_argument("signature entries must be +1 or -1");
  }
}

// Point x is 1 for every increasing positive a iff, writing a_i as a sum of
// positive increments, every increment has a non-negative coefficient and x
// has a positive coordinate.
bool surely_one(const Signature& sigma, std::size_t x) {
  const int n = static_cast<int>(sigma.size());
  int balance = 0;
  bool any_positive = false;
  for (int c = n - 1; c >= 0; --c) {
    if (!((x >> (n - 1 - c)) & 1U)) continue;
    balance += sigma[static_cast<std::size_t>(c)];
    any_positive = any_positive || sigma[static_cast<std::size_t>(c)] > 0;
    if (balance < 0) return false;
  }
  return any_positive;
}

}  // namespace

std::size_t t_min(const Signature& sigma) {
  check_signature(sigma);
  const std::size_t full = std::size_t{1} << sigma.size();
  std::size_t count = 0;
  for (std::size_t x = 1; x < full; ++x) count += surely_one(sigma, x) ? 1 : 0;
  return count;
}

std::size_t t_max(const Signature& sigma) {
  Signature neg = sigma;
  for (auto& s : neg) s = -s;
  return (std::size_t{1} << sigma.size()) - 1 - t_min(neg);
}

std::uint64_t t_max_special(int k, int n) {
  if (k < 1 || k > n || n > 62) throw std::invalid_argument("t_max_special: need 1 <= k <= n");
  return std::uint64_t{1} << (k - 1);
}

std::vector<Signature> enumerate_signatures(int n, std::size_t t) {
  if (n < 1 || n > kMaxHypercubeDim) throw std::invalid_argument("enumerate_signatures: bad n");
  if (t >= (std::size_t{1} << n)) throw std::invalid_argument("enumerate_signatures: t >= 2^n");
  const int free = static_cast<int>(std::min<std::size_t>(t, static_cast<std::size_t>(n)));
  std::vector<Signature> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << free); ++code) {
    Signature sigma(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < free; ++i) {
      if ((code >> (free - 1 - i)) & 1U) sigma[static_cast<std::size_t>(i)] = 1;
    }
    if (t_min(sigma) <= t && t <= t_max(sigma)) out.push_back(std::move(sigma));
  }
  return out;
}

// LinearCondition

LinearCondition LinearCondition::complement() const {
  LinearCondition c = *this;
  for (auto& v : c.coeffs) v = -v;
  return c;
}

int LinearCondition::involved() const {
  return static_cast<int>(std::count_if(coeffs.begin(), coeffs.end(), [](auto v) { return v != 0; }));
}

int LinearCondition::max_index() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    if (coeffs[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

bool LinearCondition::canonical() const {
  const int k = max_index();
  return k >= 0 && coeffs[static_cast<std::size_t>(k)] > 0;
}

LinearCondition LinearCondition::canonical_form() const { return canonical() ? *this : complement(); }

namespace {

std::string side_string(const IntRow& coeffs, int sign) {
  std::string s;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::int64_t v = coeffs[i] * sign;
    if (v <= 0) continue;
    if (!s.empty()) s += "+";
    if (v != 1) s += std::to_string(v);
    s += "a" + std::to_string(i + 1);
  }
  return s.empty() ? "0" : s;
}

}  // namespace

std::string LinearCondition::to_string() const {
  const int k = max_index();
  if (k < 0) return "0>0";
  const int lead = coeffs[static_cast<std::size_t>(k)] > 0 ? 1 : -1;
  return side_string(coeffs, lead) + (lead > 0 ? ">" : "<") + side_string(coeffs, -lead);
}

std::string LinearCondition::question() const {
  const LinearCondition c = canonical_form();
  return side_string(c.coeffs, 1) + " vs " + side_string(c.coeffs, -1);
}

namespace {

std::vector<IntRow> ordering_rows(int n) {
  std::vector<IntRow> rows;
  IntRow first(static_cast<std::size_t>(n), 0);
  first[0] = 1;
  rows.push_back(first);
  for (int i = 0; i + 1 < n; ++i) {
    IntRow r(static_cast<std::size_t>(n), 0);
    r[static_cast<std::size_t>(i)] = -1;
    r[static_cast<std::size_t>(i) + 1] = 1;
    rows.push_back(r);
  }
  return rows;
}

IntRow point_row(const Signature& sigma, std::size_t x) {
  const int n = static_cast<int>(sigma.size());
  IntRow r(static_cast<std::size_t>(n), 0);
  for (int c = 0; c < n; ++c) {
    if ((x >> (n - 1 - c)) & 1U) r[static_cast<std::size_t>(c)] = sigma[static_cast<std::size_t>(c)];
  }
  return r;
}

IntRow negate(IntRow r) {
  for (auto& v : r) v = -v;
  return r;
}

std::optional<IntRow> feasible_with(std::vector<IntRow>& rows, const IntRow& extra, int dim,
                                    LpStats* stats) {
  rows.push_back(extra);
  auto w = strict_feasible(rows, dim, stats);
  rows.pop_back();
  return w;
}

OutputPattern pattern_of(const Signature& sigma, const IntRow& a) {
  const int n = static_cast<int>(sigma.size());
  const std::size_t full = std::size_t{1} << n;
  OutputPattern p(full);
  for (std::size_t x = 1; x < full; ++x) p.set(x, dot_sign(point_row(sigma, x), a) > 0);
  return p;
}

class SignatureWalker {
 public:
  SignatureWalker(const Signature& sigma, std::size_t t, LpStats* stats)
      : sigma_(sigma), n_(static_cast<int>(sigma.size())), t_(t), stats_(stats) {
    const std::size_t full = std::size_t{1} << n_;
    for (std::size_t x = 1; x < full; ++x) order_.push_back(x);
    std::stable_sort(order_.begin(), order_.end(), [](std::size_t a, std::size_t b) {
      return std::popcount(a) < std::popcount(b);
    });
    base_ = ordering_rows(n_);
  }

  std::vector<ConditionLeaf> run() {
    auto w = strict_feasible(base_, n_, stats_);
    visit(0, 0, *w);
    return std::move(leaves_);
  }

 private:
  void visit(std::size_t idx, std::size_t ones, const IntRow& witness) {
    if (ones > t_) return;
    if (ones + (order_.size() - idx) < t_) return;
    if (idx == order_.size()) {
      finish(witness);
      return;
    }
    const IntRow row = point_row(sigma_, order_[idx]);
    const int s = dot_sign(row, witness);
    std::vector<IntRow> rows = lp_rows();
    std::optional<IntRow> w1 = s > 0 ? std::optional<IntRow>(witness)
                                     : feasible_with(rows, row, n_, stats_);
    std::optional<IntRow> w0 = s < 0 ? std::optional<IntRow>(witness)
                                     : feasible_with(rows, negate(row), n_, stats_);
    if (w0 && w1) {
      branch_.push_back(negate(row));
      visit(idx + 1, ones, *w0);
      branch_.back() = row;
      visit(idx + 1, ones + 1, *w1);
      branch_.pop_back();
    } else if (w1) {
      visit(idx + 1, ones + 1, *w1);
    } else if (w0) {
      visit(idx + 1, ones, *w0);
    } else {
      throw std::logic_error("condition traversal reached an empty region");
    }
  }

  std::vector<IntRow> lp_rows() const {
    std::vector<IntRow> rows = base_;
    rows.insert(rows.end(), branch_.begin(), branch_.end());
    return rows;
  }

  void finish(const IntRow& witness) {
    std::vector<IntRow> kept = branch_;
    for (std::size_t j = 0; j < kept.size();) {
      std::vector<IntRow> rows = base_;
      for (std::size_t k = 0; k < kept.size(); ++k) {
        if (k != j) rows.push_back(kept[k]);
      }
      rows.push_back(negate(kept[j]));
      if (!strict_feasible(rows, n_, stats_)) {
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        ++j;
      }
    }
    ConditionLeaf leaf;
    leaf.sigma = sigma_;
    for (auto& r : kept) {
      LinearCondition c{r};
      if (std::find(leaf.conditions.begin(), leaf.conditions.end(), c) == leaf.conditions.end()) {
        leaf.conditions.push_back(std::move(c));
      }
    }
    leaf.witness = witness;
    leaf.pattern = pattern_of(sigma_, witness);
    leaves_.push_back(std::move(leaf));
  }

  Signature sigma_;
  int n_;
  std::size_t t_;
  LpStats* stats_;
  std::vector<std::size_t> order_;
  std::vector<IntRow> base_;
  std::vector<IntRow> branch_;
  std::vector<ConditionLeaf> leaves_;
};

// Candidate order: largest magnitude first, then the smaller side's indices
// ascending, so a1+a2 is asked before a1+a3.
bool candidate_before(const LinearCondition& a, const LinearCondition& b) {
  const int ka = a.max_index();
  const int kb = b.max_index();
  if (ka != kb) return ka > kb;
  std::vector<int> sa, sb;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] < 0) sa.push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) {
    if (b.coeffs[i] < 0) sb.push_back(static_cast<int>(i));
  }
  if (sa != sb) return sa < sb;
  return a.coeffs < b.coeffs;
}

}  // namespace

std::vector<ConditionLeaf> signature_leaves(const Signature& sigma, std::size_t t,
                                            LpStats* stats) {
  check_signature(sigma);
  if (static_cast<int>(sigma.size()) > kMaxConditionDim) {
    throw std::invalid_argument("condition enumeration supports n <= 8 (LP size limit)");
  }
  return SignatureWalker(sigma, t, stats).run();
}

namespace {

struct TreeBuilder {
  int n;
  std::vector<ConditionLeaf>& leaves;
  std::vector<ConditionNode>& nodes;
  std::vector<LinearCondition> candidates;
  LpStats* stats;

  enum Side { less = 1, greater = 2, both = 3 };

  Side side_of(int leaf, const std::vector<IntRow>& path, const LinearCondition& q) {
    std::vector<IntRow> rows = ordering_rows(n);
    for (const auto& c : leaves[static_cast<std::size_t>(leaf)].conditions) rows.push_back(c.coeffs);
    rows.insert(rows.end(), path.begin(), path.end());
    const bool g = static_cast<bool>(feasible_with(rows, q.coeffs, n, stats));
    const bool l = static_cast<bool>(feasible_with(rows, q.complement().coeffs, n, stats));
    if (g && l) return both;
    if (g) return greater;
    if (l) return less;
    throw std::logic_error("leaf region is empty on its path");
  }

  int build(const std::vector<int>& group, std::vector<IntRow>& path) {
    ConditionNode node;
    if (group.size() == 1) {
      node.leaf = group.front();
      nodes.push_back(node);
      return static_cast<int>(nodes.size()) - 1;
    }
    int best = -1;
    std::size_t best_straddle = 0;
    std::vector<Side> best_sides;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::vector<Side> sides;
      std::size_t straddle = 0;
      bool has_less = false;
      bool has_greater = false;
      for (const int leaf : group) {
        const Side s = side_of(leaf, path, candidates[c]);
        sides.push_back(s);
        straddle += s == both ? 1 : 0;
        has_less = has_less || s == less;
        has_greater = has_greater || s == greater;
      }
      if (!has_less || !has_greater) continue;
      if (best < 0 || straddle < best_straddle) {
        best = static_cast<int>(c);
        best_straddle = straddle;
        best_sides = sides;
      }
      if (straddle == 0) break;
    }
    if (best < 0) throw std::logic_error("no condition separates the remaining leaves");

    const LinearCondition q = candidates[static_cast<std::size_t>(best)];
    std::vector<int> lo, hi;
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (best_sides[i] & less) lo.push_back(group[i]);
      if (best_sides[i] & greater) hi.push_back(group[i]);
    }
    node.question = q;
    nodes.push_back(node);
    const int id = static_cast<int>(nodes.size()) - 1;
    path.push_back(q.complement().coeffs);
    const int l = build(lo, path);
    path.back() = q.coeffs;
    const int g = build(hi, path);
    path.pop_back();
    nodes[static_cast<std::size_t>(id)].less = l;
    nodes[static_cast<std::size_t>(id)].greater = g;
    return id;
  }
};

}  // namespace

ConditionTree build_condition_tree(int n, std::size_t t, LpStats* stats) {
  if (n < 1 || n > kMaxConditionDim) {
    throw std::invalid_argument("build_condition_tree: n must be in [1, 8] (LP size limit)");
  }
  ConditionTree tree;
  tree.n_ = n;
  tree.t_ = t;
  for (const auto& sigma : enumerate_signatures(n, t)) {
    auto leaves = signature_leaves(sigma, t, stats);
    for (auto& leaf : leaves) tree.leaves_.push_back(std::move(leaf));
  }
  if (tree.leaves_.empty()) throw std::logic_error("no function reaches the requested t");

  std::vector<LinearCondition> candidates;
  for (const auto& leaf : tree.leaves_) {
    for (const auto& c : leaf.conditions) {
      const LinearCondition k = c.canonical_form();
      if (std::find(candidates.begin(), candidates.end(), k) == candidates.end()) {
        candidates.push_back(k);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), candidate_before);

  TreeBuilder builder{n, tree.leaves_, tree.nodes_, std::move(candidates), stats};
  std::vector<int> group(tree.leaves_.size());
  std::iota(group.begin(), group.end(), 0);
  std::vector<IntRow> path;
  tree.root_ = builder.build(group, path);
  return tree;
}

void ConditionTree::render_node(int id, int indent, std::string& out) const {
  const ConditionNode& node = nodes_[static_cast<std::size_t>(id)];
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (node.leaf >= 0) {
    const auto& leaf = leaves_[static_cast<std::size_t>(node.leaf)];
    out += signature_string(leaf.sigma, std::max<std::size_t>(1, std::min<std::size_t>(t_, leaf.sigma.size())));
    out += "\n";
    return;
  }
  const LinearCondition& q = *node.question;
  out += "[" + q.question() + "]\n";
  out += pad + "  " + q.complement().to_string() + " -> ";
  render_node(node.less, indent + 1, out);
  out += pad + "  " + q.to_string() + " -> ";
  render_node(node.greater, indent + 1, out);
}

std::string ConditionTree::render() const {
  std::string out = "n=" + std::to_string(n_) + " t=" + std::to_string(t_) + "\n";
  render_node(root_, 0, out);
  return out;
}

int ConditionTree::locate(const std::vector<double>& a) const {
  if (static_cast<int>(a.size()) != n_) throw std::invalid_argument("locate: length mismatch");
  int id = root_;
  while (nodes_[static_cast<std::size_t>(id)].leaf < 0) {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) v += static_cast<double>(node.question->coeffs[i]) * a[i];
    if (v == 0.0) return -1;
    id = v > 0.0 ? node.greater : node.less;
  }
  return nodes_[static_cast<std::size_t>(id)].leaf;
}

std::vector<std::size_t> cone_facets(const OutputPattern& pattern, int n, LpStats* stats) {
  if (n < 1 || n > kMaxConditionDim || pattern.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("cone_facets: pattern length must be 2^n with n <= 8");
  }
  if (pattern.get(0)) throw std::invalid_argument("cone_facets: origin maps to 1 without bias");
  const std::size_t full = pattern.size();
  std::vector<IntRow> rows;
  std::vector<std::size_t> points;
  for (std::size_t x = 1; x < full; ++x) {
    IntRow r(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < n; ++c) {
      if ((x >> (n - 1 - c)) & 1U) r[static_cast<std::size_t>(c)] = pattern.get(x) ? 1 : -1;
    }
    rows.push_back(std::move(r));
    points.push_back(x);
  }
  if (!strict_feasible(rows, n, stats)) {
    throw std::invalid_argument("cone_facets: pattern is not a threshold function");
  }
  std::vector<std::size_t> facets;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    std::vector<IntRow> others;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k != j) others.push_back(rows[k]);
    }
    others.push_back(negate(rows[j]));
    if (strict_feasible(others, n, stats)) facets.push_back(points[j]);
  }
  return facets;
}

ChainFunction chain_function(int n, LpStats* stats) {
  if (n < 2 || n > kMaxConditionDim) throw std::invalid_argument("chain_function: n in [2, 8]");
  // p_1 = (1,0) -> 1, p_2 = (1,1) -> 0.
  const auto base = strict_feasible({{1, 0}, {-1, -1}}, 2, stats);
  if (!base) throw std::logic_error("chain_function: base case infeasible");
  IntRow w = *base;
  for (int k = 2; k < n; ++k) {
    // Append coordinate k; p_{k+1} is the all-ones point of the first k+1 coordinates.
    const int want = (k + 1) % 2 == 1 ? 1 : -1;
    std::int64_t total = 0;
    for (const auto v : w) total += v;
    const std::int64_t target = -total;  // new weight where p_{k+1} crosses 0
    std::int64_t gap = 0;                 // distance to the next crossing beyond target
    for (std::size_t x = 0; x < (std::size_t{1} << k); ++x) {
      std::int64_t s = 0;
      for (int c = 0; c < k; ++c) {
        if ((x >> (k - 1 - c)) & 1U) s += w[static_cast<std::size_t>(c)];
      }
      const std::int64_t d = (-s - target) * want;
      if (d > 0 && (gap == 0 || d < gap)) gap = d;
    }
    if (gap == 0) gap = 1;
    for (auto& v : w) v *= 2;
    w.push_back(2 * target + want * gap);
  }

  ChainFunction out;
  out.weights = w;
  const std::size_t full = std::size_t{1} << n;
  out.pattern = OutputPattern(full);
  for (std::size_t x = 1; x < full; ++x) {
    IntRow r(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < n; ++c) r[static_cast<std::size_t>(c)] = (x >> (n - 1 - c)) & 1U;
    const int s = dot_sign(r, w);
    if (s == 0) throw std::logic_error("chain_function: weight vector lies on a hyperplane");
    out.pattern.set(x, s > 0);
  }
  for (int i = 1; i <= n; ++i) {
    const std::size_t p = ((std::size_t{1} << i) - 1) << (n - i);
    if (out.pattern.get(p) != (i % 2 == 1)) {
      throw std::logic_error("chain_function: construction does not realize p_" + std::to_string(i));
    }
  }
  out.facets = cone_facets(out.pattern, n, stats);
  for (const auto x : out.facets) out.upsilon_facets += std::popcount(x) >= 3 ? 1 : 0;
  return out;
}

}  // namespace priorlens
