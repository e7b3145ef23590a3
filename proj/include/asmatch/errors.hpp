#pragma once

#include <stdexcept>
#include <string>

namespace asmatch {

// Failures of the numerics themselves (underflow, overflow, divergence).
// The CLI maps these to exit code 2; bad input maps to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A balancing denominator fell below the positive floor.
class BalancingUnderflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// An entrywise power left the representable positive range.
class PowerRangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace asmatch
