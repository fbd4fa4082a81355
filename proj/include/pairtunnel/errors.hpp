#pragma once

#include <stdexcept>
#include <string>

namespace pairtunnel {

// Invalid parameters, malformed configuration, mismatched grids.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN blow-up, eigen-solver non-convergence, unguided modes.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Requested mode is not bound by the potential.
class NotGuidedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pairtunnel
