#pragma once

#include <stdexcept>
#include <string>

namespace finquant {

// Bad scalar parameter (base, order, tolerance, n).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad structured input (unsorted positions, weights off the simplex, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative solver gave up. Derived classes may carry the last state.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace finquant
