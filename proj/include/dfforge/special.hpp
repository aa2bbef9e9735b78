#pragma once

// Special functions used by the inversion formulas and their closed forms.

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "dfforge/error.hpp"

namespace dfforge::special {

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::nearbyint(x) == x;
}

inline bool is_nonnegative_integer(double x) {
  return x >= 0.0 && std::nearbyint(x) == x;
}

inline double gamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw DomainError("gamma: pole at non-positive integer " + std::to_string(x));
  }
  return std::tgamma(x);
}

/// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

/// Euler beta function for a, b > 0.
inline double beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("beta: arguments must be positive");
  if (a + b < 150.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

/// n!! with the convention 0!! = 1 (and (-1)!! = 1).
inline double double_factorial(int n) {
  if (n < -1) throw DomainError("double_factorial: n must be >= -1");
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

/// Lower incomplete gamma, integral_0^x t^{a-1} e^{-t} dt.
inline double lower_incomplete_gamma(double a, double x) {
  if (x <= 0.0) return 0.0;
  return boost::math::tgamma_lower(a, x);
}

/// Upper incomplete gamma, integral_x^inf t^{a-1} e^{-t} dt.
inline double upper_incomplete_gamma(double a, double x) {
  if (x <= 0.0) return std::tgamma(a);
  return boost::math::tgamma(a, x);
}

/// Gauss hypergeometric series 2F1(a, b; c; x) for |x| < 1.
///
/// Terminating series (a or b a non-positive integer) are summed exactly for any x.
inline double hyp2f1(double a, double b, double c, double x) {
  const bool terminates = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  if (is_nonpositive_integer(c)) {
    throw UnsupportedParameterError("hyp2f1: c is a non-positive integer");
  }
  if (!terminates && !(std::abs(x) < 1.0)) {
    throw DomainError("hyp2f1: series requires |x| < 1");
  }
  double term = 1.0;
  double sum = 1.0;
  int small_terms = 0;
  constexpr int kMaxTerms = 500000;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small_terms >= 3) return sum;
    } else {
      small_terms = 0;
    }
  }
  throw DomainError("hyp2f1: series did not converge (x too close to 1)");
}

/// The H(a, b, c, d; x) function of Dejonghe's power-law DFs, evaluated by the
/// closed-form case split of its Mellin-Barnes integral (not by contour quadrature).
inline double hfunction(double a, double b, double c, double d, double x) {
  if (is_nonpositive_integer(a + d) || is_nonpositive_integer(b + c)) {
    throw UnsupportedParameterError("hfunction: a+d or b+c is a non-positive integer");
  }
  if (x < 0.0) throw DomainError("hfunction: x must be non-negative");
  if (x < 1.0) {
    if (is_nonnegative_integer(a - c)) return 0.0;
    if (x == 0.0) return a > 0.0 ? 0.0 : (a == 0.0 ? gamma(a + b) * rgamma(c - a) * rgamma(a + d)
                                                  : std::numeric_limits<double>::infinity());
    return std::pow(x, a) * hyp2f1(a + b, 1.0 + a - c, a + d, x) * gamma(a + b) * rgamma(c - a) *
           rgamma(a + d);
  }
  if (x > 1.0) {
    if (is_nonnegative_integer(b - d)) return 0.0;
    return std::pow(x, -b) * hyp2f1(a + b, 1.0 + b - d, b + c, 1.0 / x) * gamma(a + b) *
           rgamma(d - b) * rgamma(b + c);
  }
  throw UnsupportedParameterError("hfunction: x = 1 lies on the branch point");
}

}  // namespace dfforge::special
