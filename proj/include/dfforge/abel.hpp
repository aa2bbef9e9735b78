#pragma once

// Abel-type integrals with an algebraic endpoint kernel:
//   lower tail  integral_0^x F(t) (x - t)^-alpha dt
//   upper tail  integral_x^inf F(t) (t - x)^-alpha dt

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "dfforge/coefficient.hpp"
#include "dfforge/config.hpp"
#include "dfforge/error.hpp"
#include "dfforge/quadrature.hpp"

namespace dfforge {

enum class AbelOrientation { LowerTail, UpperTail };

struct AbelWeight {
  double alpha = 0.5;
  AbelOrientation orientation = AbelOrientation::LowerTail;

  AbelWeight() = default;
  AbelWeight(double a, AbelOrientation o) : alpha(a), orientation(o) {
    if (!(a >= 0.0 && a < 1.0)) {
      throw DomainError("AbelWeight: exponent must lie in [0, 1), got " + std::to_string(a));
    }
  }
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw DomainError("Abel kernel exponent must lie in [0, 1), got " + std::to_string(alpha));
  }
}

// integral_0^x t^p e^{-k t} (x - t)^-alpha dt
inline double abel_lower_atom(double p, double k, double x, double alpha,
                              const QuadratureOptions& opts) {
  if (!(p > -1.0)) {
    throw DomainError("abel_lower: integrand x^" + std::to_string(p) + " is not integrable at 0");
  }
  if (k == 0.0) {
    return quad::integrate_jacobi([](double) { return 1.0; }, 0.0, x, p, -alpha, opts).value;
  }
  return quad::integrate_jacobi([k](double t) { return std::exp(-k * t); }, 0.0, x, p, -alpha, opts)
      .value;
}

// Truncation point u_max = T^2 of the substitution t = x + T^2 so that the
// dropped tail of t^p e^{-k t} is below rel_tol relative to the kept part.
inline double tail_extent(double p, double k, double x, double rel_tol) {
  const double base = -std::log(std::max(rel_tol, 1e-300)) + 12.0;
  double u = base / k;
  const double ref = std::max(x, 1.0 / k);
  for (int i = 0; i < 8; ++i) {
    const double growth = p > 0.0 ? p * std::log((x + u) / ref) : 0.0;
    u = (base + std::max(growth, 0.0)) / k;
  }
  return u;
}

// e^{k x} * integral_x^inf t^p e^{-k t} (t - x)^-alpha dt via t = x + s^2.
inline double abel_upper_atom_scaled(double p, double k, double x, double alpha,
                                     const QuadratureOptions& opts) {
  const double s_max = std::sqrt(tail_extent(p, k, x, opts.rel_tol));
  if (x == 0.0) {
    // t^p (t)^-alpha dt = s^{2p - 2 alpha} 2 s ds
    const double left = 2.0 * p + 1.0 - 2.0 * alpha;
    if (!(left > -1.0)) throw DivergenceError("abel_upper: integrand not integrable at 0");
    return quad::integrate_jacobi([k](double s) { return 2.0 * std::exp(-k * s * s); }, 0.0, s_max,
                                  left, 0.0, opts)
        .value;
  }
  const double left = 1.0 - 2.0 * alpha;
  return quad::integrate_jacobi(
             [=](double s) {
               const double t = x + s * s;
               return 2.0 * (p == 0.0 ? 1.0 : std::pow(t, p)) * std::exp(-k * s * s);
             },
             0.0, s_max, left, 0.0, opts)
      .value;
}

}  // namespace detail

/// integral_0^x F(t) (x - t)^-alpha dt for a callable F, smooth enough on [0, x)
/// for adaptive Gauss-Jacobi panels; the kernel singularity is integrated exactly.
template <class F>
  requires(!std::is_same_v<std::remove_cvref_t<F>, CoefficientFunction>)
double abel_lower(F&& f, double x, double alpha, const QuadratureOptions& opts = {}) {
  detail::check_alpha(alpha);
  if (x < 0.0) throw DomainError("abel_lower: upper limit must be non-negative");
  if (x == 0.0) return 0.0;
  return quad::integrate_jacobi(std::forward<F>(f), 0.0, x, 0.0, -alpha, opts).value;
}

/// Coefficient-function overload: each atom's x^p factor is carried by the
/// Jacobi weight, so power-law integrands are integrated exactly.
inline double abel_lower(const CoefficientFunction& f, double x, double alpha,
                         const QuadratureOptions& opts = {}) {
  detail::check_alpha(alpha);
  if (x < 0.0) throw DomainError("abel_lower: upper limit must be non-negative");
  if (x == 0.0) return 0.0;
  if (!f.is_atomic()) {
    const ChebyshevSeries& s = f.series();
    if (x > s.x_max() * (1.0 + 1e-12)) {
      throw DomainError("abel_lower: x beyond tabulated range of the coefficient");
    }
    return abel_lower([&s](double t) { return s(t); }, x, alpha, opts);
  }
  double sum = 0.0;
  for (const Atom& a : f.atoms()) {
    sum += a.c * detail::abel_lower_atom(a.p, a.k, x, alpha, opts);
  }
  return sum;
}

/// integral_x^inf F(t) (t - x)^-alpha dt for a callable F.
///
/// Uses t = x + s^2 and extends the range by doubling until the integrand has
/// decayed; a non-decaying integrand raises DivergenceError.
template <class F>
  requires(!std::is_same_v<std::remove_cvref_t<F>, CoefficientFunction>)
double abel_upper(F&& f, double x, double alpha, const QuadratureOptions& opts = {}) {
  detail::check_alpha(alpha);
  if (x < 0.0) throw DomainError("abel_upper: lower limit must be non-negative");
  const double left = 1.0 - 2.0 * alpha;
  auto integrand = [&](double s) { return 2.0 * f(x + s * s); };
  double lo = 0.0;
  double hi = 1.0;
  double total = 0.0;
  constexpr double kMaxExtent = 1e4;
  for (;;) {
    if (lo == 0.0) {
      total += quad::integrate_jacobi(integrand, 0.0, hi, left, 0.0, opts).value;
    } else {
      total += quad::integrate([&](double s) { return integrand(s) * std::pow(s, left); }, lo, hi,
                               opts)
                   .value;
    }
    // Decay test: the integrand at the edge, times the segment length, must be
    // negligible, and must not be growing.
    const double edge = std::abs(integrand(hi) * std::pow(hi, left));
    const double edge2 = std::abs(integrand(2.0 * hi) * std::pow(2.0 * hi, left));
    const double scale = std::max(std::abs(total), std::numeric_limits<double>::min());
    if (edge * hi <= 1e-3 * opts.rel_tol * scale && edge2 <= edge) break;
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxExtent) {
      throw DivergenceError("abel_upper: integrand does not decay at large argument");
    }
  }
  return total;
}

/// Coefficient-function overload; every atom must carry exp(-k t) with k > 0.
inline double abel_upper(const CoefficientFunction& f, double x, double alpha,
                         const QuadratureOptions& opts = {}) {
  detail::check_alpha(alpha);
  if (x < 0.0) throw DomainError("abel_upper: lower limit must be non-negative");
  if (!f.decays()) {
    throw DivergenceError("abel_upper: coefficient has an atom without exponential decay");
  }
  double sum = 0.0;
  for (const Atom& a : f.atoms()) {
    sum += a.c * std::exp(-a.k * x) * detail::abel_upper_atom_scaled(a.p, a.k, x, alpha, opts);
  }
  return sum;
}

}  // namespace dfforge
