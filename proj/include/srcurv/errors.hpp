#pragma once

#include <stdexcept>
#include <string>

namespace srcurv {

/// Malformed input: bad schema, dimension mismatch, invalid parameters.
/// The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold for the given data
/// (e.g. a distribution that is not bracket-generating). Also exit code 2.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

/// Numeric failure: NaN/overflow, singular systems that should not be singular,
/// divergence. The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact arithmetic cannot represent a required value (an irrational norm
/// during orthonormalization). Callers may retry in floating-point mode.
class InexactError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Two independent computations of the same object disagree. Indicates a bug.
class ConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace srcurv
