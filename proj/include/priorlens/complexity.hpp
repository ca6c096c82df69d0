#pragma once

// Complexity functionals on truth tables.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "priorlens/hypercube.hpp"

namespace priorlens {

// Phrase count of the Lempel-Ziv 1976 parse; the trailing partial phrase counts.
std::size_t lz76_phrases(const OutputPattern& bits);

// log2(m) for constant strings, otherwise log2(m) times the mean of the forward
// and reversed phrase counts.
double k_lz(const OutputPattern& bits);

// AND/OR tree over literals. Variables are named x1..xn, x1 being coordinate 0.
class BoolFormula {
 public:
  enum class Kind : std::uint8_t { constant, literal, and_op, or_op };

  struct Node {
    Kind kind;
    bool value;    // constant value, or negation flag for literals
    int var;       // literal variable, 0-based coordinate
    int left = -1;
    int right = -1;
  };

  static BoolFormula constant(bool value);

  [[nodiscard]] int variables() const noexcept { return n_; }
  [[nodiscard]] std::size_t clauses() const noexcept { return clauses_; }
  [[nodiscard]] std::size_t connectives() const noexcept;
  [[nodiscard]] std::size_t leaves() const noexcept;
  // Assignment in {0,1}^n, coordinate 0 first.
  [[nodiscard]] bool evaluate(std::span<const int> assignment) const;
  [[nodiscard]] OutputPattern truth_table() const;
  [[nodiscard]] std::string to_string() const;

  friend BoolFormula dnf(const OutputPattern& pattern, int n);
  friend BoolFormula cnf(const OutputPattern& pattern, int n);

 private:
  int add(Node node);
  bool eval_node(int id, std::span<const int> assignment) const;
  void print(int id, std::string& out, bool parent_and) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  int n_ = 0;
  std::size_t clauses_ = 0;
};

BoolFormula dnf(const OutputPattern& pattern, int n);
BoolFormula cnf(const OutputPattern& pattern, int n);

// max(0, n*min(t, 2^n-t) - 1).
std::int64_t kbool_bound_linear(int n, std::uint64_t t);
// 2*n*min(t, 2^n-t), the looser main-text form.
std::int64_t kbool_bound_linear_loose(int n, std::uint64_t t);
// Memoized recursion C(n,t) = C(n-1,ceil(t/2)) + C(n-1,floor(t/2)) + 2.
std::int64_t kbool_bound_recursive(int n, std::uint64_t t);
// 1 - k/(2^n n), clamped to [0,1].
double kbool_tail_bound(int n, double k);

}  // namespace priorlens
