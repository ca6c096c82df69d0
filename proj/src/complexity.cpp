#include "priorlens/complexity.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace priorlens {

std::size_t lz76_phrases(const OutputPattern& bits) {
  const std::size_t n = bits.size();
  if (n == 0) throw std::invalid_argument("lz76_phrases: empty string");
  if (n == 1) return 1;
  // Kaspar-Schuster scan: l is the start of the current phrase, i the candidate
  // history start, k the match length, kmax the longest match for this phrase.
  std::size_t c = 1, l = 1, i = 0, k = 1, kmax = 1;
  while (true) {
    if (bits.get(i + k - 1) == bits.get(l + k - 1)) {
      ++k;
      if (l + k > n) {
        ++c;
        break;
      }
    } else {
      kmax = std::max(k, kmax);
      ++i;
      if (i == l) {
        ++c;
        l += kmax;
        if (l + 1 > n) break;
        i = 0;
        k = 1;
        kmax = 1;
      } else {
        k = 1;
      }
    }
  }
  return c;
}

double k_lz(const OutputPattern& bits) {
  const std::size_t m = bits.size();
  if (m < 2) throw std::invalid_argument("k_lz: need m >= 2");
  const double lg = std::log2(static_cast<double>(m));
  if (bits.is_constant()) return lg;
  return lg * static_cast<double>(lz76_phrases(bits) + lz76_phrases(bits.reversed())) / 2.0;
}

// BoolFormula

int BoolFormula::add(Node node) {
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

BoolFormula BoolFormula::constant(bool value) {
  BoolFormula f;
  f.root_ = f.add({Kind::constant, value, -1});
  return f;
}

std::size_t BoolFormula::connectives() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& x) {
    return x.kind == Kind::and_op || x.kind == Kind::or_op;
  }));
}

std::size_t BoolFormula::leaves() const noexcept { return nodes_.size() - connectives(); }

bool BoolFormula::eval_node(int id, std::span<const int> a) const {
  const Node& x = nodes_[static_cast<std::size_t>(id)];
  switch (x.kind) {
    case Kind::constant:
      return x.value;
    case Kind::literal:
      return (a[static_cast<std::size_t>(x.var)] != 0) != x.value;
    case Kind::and_op:
      return eval_node(x.left, a) && eval_node(x.right, a);
    case Kind::or_op:
      return eval_node(x.left, a) || eval_node(x.right, a);
  }
  return false;
}

bool BoolFormula::evaluate(std::span<const int> assignment) const {
  if (static_cast<int>(assignment.size()) != n_ && nodes_[static_cast<std::size_t>(root_)].kind !=
                                                      Kind::constant) {
    throw std::invalid_argument("BoolFormula::evaluate: assignment length mismatch");
  }
  return eval_node(root_, assignment);
}

OutputPattern BoolFormula::truth_table() const {
  const std::size_t m = std::size_t{1} << n_;
  OutputPattern p(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto x = bin_point(i, n_);
    p.set(i, eval_node(root_, x));
  }
  return p;
}

void BoolFormula::print(int id, std::string& out, bool parent_and) const {
  const Node& x = nodes_[static_cast<std::size_t>(id)];
  switch (x.kind) {
    case Kind::constant:
      out += x.value ? "True" : "False";
      return;
    case Kind::literal:
      if (x.value) out += "~";
      out += "x" + std::to_string(x.var + 1);
      return;
    case Kind::and_op:
      print(x.left, out, true);
      out += "&";
      print(x.right, out, true);
      return;
    case Kind::or_op:
      if (parent_and) out += "(";
      print(x.left, out, false);
      out += "|";
      print(x.right, out, false);
      if (parent_and) out += ")";
      return;
  }
}

std::string BoolFormula::to_string() const {
  std::string out;
  // A top-level conjunction of disjunctions needs its clause brackets.
  print(root_, out, nodes_[static_cast<std::size_t>(root_)].kind == Kind::and_op);
  return out;
}

namespace {

// Left-leaning chain of `op` over the given node ids.
int chain(std::vector<int> ids, BoolFormula::Kind op,
          const std::function<int(BoolFormula::Node)>& add) {
  int acc = ids.front();
  for (std::size_t k = 1; k < ids.size(); ++k) acc = add({op, false, -1, acc, ids[k]});
  return acc;
}

void check_pattern(const OutputPattern& p, int n) {
  if (n < 1 || n > kMaxHypercubeDim || p.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("formula construction: pattern length is not 2^n");
  }
}

}  // namespace

BoolFormula dnf(const OutputPattern& pattern, int n) {
  check_pattern(pattern, n);
  if (pattern.popcount() == 0) {
    BoolFormula f = BoolFormula::constant(false);
    f.n_ = n;
    return f;
  }
  BoolFormula f;
  f.n_ = n;
  auto add = [&f](BoolFormula::Node node) { return f.add(node); };
  std::vector<int> clauses;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (!pattern.get(i)) continue;
    std::vector<int> lits;
    for (int v = 0; v < n; ++v) {
      const bool bit = (i >> (n - 1 - v)) & 1U;
      lits.push_back(f.add({BoolFormula::Kind::literal, !bit, v}));
    }
    clauses.push_back(chain(lits, BoolFormula::Kind::and_op, add));
  }
  f.clauses_ = clauses.size();
  f.root_ = chain(clauses, BoolFormula::Kind::or_op, add);
  return f;
}

BoolFormula cnf(const OutputPattern& pattern, int n) {
  check_pattern(pattern, n);
  if (pattern.popcount() == pattern.size()) {
    BoolFormula f = BoolFormula::constant(true);
    f.n_ = n;
    return f;
  }
  BoolFormula f;
  f.n_ = n;
  auto add = [&f](BoolFormula::Node node) { return f.add(node); };
  std::vector<int> clauses;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern.get(i)) continue;
    // Clause excluding point i: some literal disagrees with bin(i).
    std::vector<int> lits;
    for (int v = 0; v < n; ++v) {
      const bool bit = (i >> (n - 1 - v)) & 1U;
      lits.push_back(f.add({BoolFormula::Kind::literal, bit, v}));
    }
    clauses.push_back(chain(lits, BoolFormula::Kind::or_op, add));
  }
  f.clauses_ = clauses.size();
  f.root_ = chain(clauses, BoolFormula::Kind::and_op, add);
  return f;
}

namespace {

void check_nt(int n, std::uint64_t t) {
  if (n < 1 || n > 62) throw std::invalid_argument("complexity bound: n must be in [1, 62]");
  if (t > (std::uint64_t{1} << n)) throw std::invalid_argument("complexity bound: t exceeds 2^n");
}

}  // namespace

std::int64_t kbool_bound_linear(int n, std::uint64_t t) {
  check_nt(n, t);
  const std::uint64_t mn = std::min(t, (std::uint64_t{1} << n) - t);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(n) * static_cast<std::int64_t>(mn) - 1);
}

std::int64_t kbool_bound_linear_loose(int n, std::uint64_t t) {
  check_nt(n, t);
  const std::uint64_t mn = std::min(t, (std::uint64_t{1} << n) - t);
  return 2 * static_cast<std::int64_t>(n) * static_cast<std::int64_t>(mn);
}

namespace {

std::int64_t recursive_c(int n, std::uint64_t t, std::map<std::pair<int, std::uint64_t>, std::int64_t>& memo) {
  const std::uint64_t full = std::uint64_t{1} << n;
  if (t == 0 || t == full) return 0;
  if (t == 1 || t == full - 1) return n - 1;
  const auto key = std::make_pair(n, t);
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  const std::int64_t v = recursive_c(n - 1, (t + 1) / 2, memo) + recursive_c(n - 1, t / 2, memo) + 2;
  memo.emplace(key, v);
  return v;
}

}  // namespace

std::int64_t kbool_bound_recursive(int n, std::uint64_t t) {
  check_nt(n, t);
  static std::map<std::pair<int, std::uint64_t>, std::int64_t> memo;
  static std::mutex mu;
  const std::lock_guard lock(mu);
  return recursive_c(n, t, memo);
}

double kbool_tail_bound(int n, double k) {
  if (k < 0) throw std::invalid_argument("kbool_tail_bound: k must be >= 0");
  const double denom = std::ldexp(static_cast<double>(n), n);
  return std::clamp(1.0 - k / denom, 0.0, 1.0);
}

}  // namespace priorlens
