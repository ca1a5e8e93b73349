#pragma once

#include <stdexcept>
#include <string>

namespace dilatia {

/// Base of every error raised by the library. The CLI maps all of these to
/// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or scale outside the universe an oracle is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was called without its stated hypothesis holding.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerically witnessed limit (Cauchy criterion, tail stabilization)
/// did not settle within its budget.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Radial decomposition could not be carried out (no bracketing crossing,
/// empty base set, reconstruction too far off).
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// A sampled hypothesis of a construction (bi-Lipschitz bounds,
/// homomorphism property, equicontinuity) is violated.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed space/family spec, unknown catalog name, bad parameters.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace dilatia
