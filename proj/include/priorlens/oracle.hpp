#pragma once

// Exact enumeration of threshold patterns at small m.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "priorlens/exact_lp.hpp"
#include "priorlens/hypercube.hpp"

namespace priorlens {

inline constexpr std::size_t kMaxOraclePoints = 32;

struct OracleOptions {
  bool with_bias = false;
  LpStats* stats = nullptr;
};

// Patterns p with some w (and b) such that <w,x>+b > 0 exactly on the 1-labels.
// 0-labels are held strictly negative, so boundary-only patterns are excluded;
// a 0-label on a point whose row is identically zero is always satisfied.
// Input coordinates must be integers.
std::set<OutputPattern> enumerate_threshold_patterns(const InputSet& inputs,
                                                     const OracleOptions& options = {});

// t -> |F_t|.
std::map<std::size_t, std::uint64_t> class_sizes(const std::set<OutputPattern>& patterns);

// T(sigma * a) over all sign vectors is exactly {0, ..., 2^n - 1}. Throws
// std::domain_error when a is not generic (two subset sums coincide within 1e-9
// of their total) or not strictly positive.
bool bijectivity_check(const std::vector<double>& a);

}  // namespace priorlens
