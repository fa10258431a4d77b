#pragma once

#include <stdexcept>
#include <string>

namespace catvar {

// Base of every error raised by the library. The CLI maps each subclass to
// an exit code, so new kinds should derive from one of the four groups below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad mesh sizes, unknown keys, nonpositive tolerances.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Input data that violates a documented precondition or invariant.
class InputError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public InputError {
 public:
  using InputError::InputError;
};

class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

// Weierstrass data whose period or flux residuals exceed tolerance.
class DataInvalidError : public InputError {
 public:
  DataInvalidError(const std::string& what, double residual)
      : InputError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Conformal factor collapses somewhere on the sampled annulus.
class BranchPointError : public InputError {
 public:
  BranchPointError(const std::string& what, double min_metric)
      : InputError(what), min_metric_(min_metric) {}
  double min_metric() const noexcept { return min_metric_; }

 private:
  double min_metric_;
};

// A solver failed to reach its tolerance. Carries the last residual.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Refinement study disagrees beyond tolerance (quadrature, discretization).
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace catvar
