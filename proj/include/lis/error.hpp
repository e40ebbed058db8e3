#pragma once

#include <stdexcept>
#include <string>

namespace lis {

// Invalid input (bad geometry, wrong regime, malformed config). The CLI maps
// these to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

// Method not applicable to the surface/deployment regime (e.g. sinc-1d on a
// finite surface).
class RegimeError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical failure. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPsdError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StateBudgetError : public NumericalError {
 public:
  StateBudgetError(const std::string& what, double required)
      : NumericalError(what), required_(required) {}
  double required() const noexcept { return required_; }

 private:
  double required_;
};

}  // namespace lis
