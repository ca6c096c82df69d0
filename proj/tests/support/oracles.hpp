#pragma once

// Reference computations written independently of the library, used to derive
// frozen values and to cross-check the fast paths.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace oracles {

// Lempel-Ziv 1976 by definition: each phrase is the shortest extension not
// found in the text before its last symbol; a trailing partial phrase counts.
std::size_t lz76_naive(const std::string& s);

// Binary entropy of t/m in bits.
double binary_entropy(std::size_t t, std::size_t m);

// Truth table of 1(<w,x> + b > 0) on {0,1}^n as a bit string, bin order.
std::string threshold_bits(const std::vector<double>& w, double b);

// Minimal AND/OR connective count over literals and constants for every
// function of n <= 3 variables. Index bit i is the output on bin(i).
std::vector<int> min_formula_costs(int n);

// Arc-cosine ReLU kernel entry.
double relu_arccos(double k11, double k22, double k12, double sigma_w, double sigma_b);

// E[phi(u1) phi(u2)] for a centered Gaussian pair with variances q1, q2 and
// correlation c, by a tensor midpoint rule on [-L, L]^2 in whitened coordinates.
double pair_expectation_grid(const std::function<double(double)>& phi, double c, double q1,
                             double q2, int nodes = 4000, double half_width = 9.0);

// N_O solving b * integral_1^N r^-a dr = 1 by bisection in log N.
double zipf_n_o_bisect(double a, double b);

}  // namespace oracles
