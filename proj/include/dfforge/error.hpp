#pragma once

#include <stdexcept>
#include <string>

namespace dfforge {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model document; the message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A density term violates the n*beta admissibility bound.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent model setup (missing scaling radius, wrong variant for a convention, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters for which a closed form is not available.
class UnsupportedParameterError : public Error {
 public:
  using Error::Error;
};

/// Boundary conditions required by an inversion formula do not hold.
class SynthesisError : public Error {
 public:
  using Error::Error;
};

/// An improper integral does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Moments requested where the density vanishes.
class UndefinedMomentError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of refinement before reaching its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Tabulated coefficient whose spectral derivative is not trustworthy.
class DerivativeAccuracyError : public Error {
 public:
  DerivativeAccuracyError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace dfforge
