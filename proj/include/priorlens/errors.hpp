#pragma once

#include <stdexcept>

namespace priorlens {

// File cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data is malformed (ragged CSV, non-numeric cell, bad hex).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed to meet its contract (factorization, quadrature,
// fixed-point iteration).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace priorlens
