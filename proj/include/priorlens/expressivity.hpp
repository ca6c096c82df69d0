#pragma once

// Compile truth tables on {0,1}^n into ReLU networks that reproduce them exactly.
//
// Clause neuron for minterm bin(i): weight +1 on coordinates set in bin(i), -1
// elsewhere, bias 1 - (number of set coordinates). Its pre-activation is 1 on
// bin(i) and <= 0 on every other vertex. Patterns with t <= 2^n - t use one
// clause per 1-point and output sum(h) > 0; otherwise one clause per 0-point
// and output 0.5 - sum(h) > 0.

#include <utility>

#include "priorlens/hypercube.hpp"
#include "priorlens/netsample.hpp"

namespace priorlens {

struct CompiledNet {
  NetSpec spec;
  NetParams params;
  bool negated = false;  // clauses describe the 0-points
  int clause_count = 0;
};

CompiledNet build_one_hidden(const OutputPattern& pattern, int n);

// l hidden layers, each [n passthrough | ceil(t_eff/l) clause | 1 accumulator].
// Layer k holds clauses (k-1)K+1..kK; the accumulator carries the running sum
// of earlier clause outputs.
CompiledNet build_multi_layer(const OutputPattern& pattern, int n, int l);

bool verify(const NetSpec& spec, const NetParams& params, const OutputPattern& pattern);

}  // namespace priorlens
