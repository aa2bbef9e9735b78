#pragma once

// Velocity-space integrals of two-integral DFs at a configuration point.
//
// At fixed (x, R) with x = psi (bounded) or Phi (unbounded), the velocity
// volume element is d^3v = (2 pi / R) dL_z d(energy). For components
// |L_z|^lambda g(argument) the L_z integral is elementary, which leaves a
// one-dimensional energy integral; generic callables use nested quadrature.

#include <cmath>
#include <limits>

#include "dfforge/config.hpp"
#include "dfforge/df.hpp"
#include "dfforge/error.hpp"
#include "dfforge/model.hpp"
#include "dfforge/quadrature.hpp"

namespace dfforge {

/// Energy range of the unbounded integrals: [Phi, Phi + kDecaySpan / k].
inline constexpr double kDecaySpan = 40.0;

/// Zeroth and second velocity moments, unnormalised:
/// density = int f d^3v, vr2 = int f v_R^2 d^3v, vphi2 = int f v_phi^2 d^3v.
struct VelocityMoments {
  double density = 0.0;
  double vr2 = 0.0;
  double vphi2 = 0.0;
  double error = 0.0;
};

struct Recovery {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

inline double oracle_tol(const QuadratureOptions& q) { return std::max(q.rel_tol, 1e-13); }

// Energy interval of the velocity integral for one component at (x, R).
struct EnergyRange {
  double lo, hi;
};

template <Parity P>
EnergyRange component_range(const ComponentDF<P>& df, const DFComponent& c, double x) {
  if (df.convention().bounded()) return {0.0, x};
  const double k = c.decay_rate();
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DivergenceError("velocity integral: unbounded component without exponential decay");
  }
  return {x, x + kDecaySpan / k};
}

// Squared speed limit V^2 of v_phi at argument value u, with gamma the
// Q-stretch 1 + R^2/R_a^2 (1 for energy arguments).
inline double vmax2(bool bounded, double x, double u, double gamma) {
  const double room = bounded ? (x - u) : (u - x);
  return room > 0.0 ? 2.0 * room / gamma : 0.0;
}

template <Parity P>
double stretch(const ComponentDF<P>& df, const DFComponent& c, double R) {
  if (!is_q(c.argument)) return 1.0;
  const double ra = *df.scale_radius();
  return 1.0 + R * R / (ra * ra);
}

inline void check_point(const PotentialConvention& conv, double x, double R) {
  if (!(R > 0.0)) throw DomainError("velocity integral: R must be positive");
  if (!(x >= 0.0)) {
    throw DomainError(std::string("velocity integral: ") + (conv.bounded() ? "psi" : "Phi") +
                      " must be non-negative");
  }
}

}  // namespace detail

/// Density and second moments of an even DF at (x, R).
inline VelocityMoments velocity_moments(const EvenDF& df, double x, double R,
                                        const QuadratureOptions& quad = {}) {
  detail::check_point(df.convention(), x, R);
  const bool bounded = df.convention().bounded();
  VelocityMoments m;
  if (bounded && x == 0.0) return m;
  const double tol = detail::oracle_tol(quad);
  for (const DFComponent& c : df.components()) {
    if (c.prefactor == 0.0 || (c.integrand.is_zero() && c.boundary == 0.0)) continue;
    const double lam = c.lz_power;
    const double gamma = detail::stretch(df, c, R);
    const auto range = detail::component_range(df, c, x);
    const double rl = std::pow(R, lam);
    auto integrand = [&](double u, int which) {
      const double v2 = detail::vmax2(bounded, x, u, gamma);
      if (v2 <= 0.0) return 0.0;
      const double V = std::sqrt(v2);
      const double g = c.energy(u);
      switch (which) {
        case 0: return 4.0 * kPi * rl * std::pow(V, lam + 1.0) / (lam + 1.0) * g;
        case 1:
          return 4.0 * kPi * gamma * rl * std::pow(V, lam + 3.0) / ((lam + 1.0) * (lam + 3.0)) * g;
        default: return 4.0 * kPi * rl * std::pow(V, lam + 3.0) / (lam + 3.0) * g;
      }
    };
    const auto d = quad::tanh_sinh([&](double u) { return integrand(u, 0); }, range.lo, range.hi, tol);
    const auto r = quad::tanh_sinh([&](double u) { return integrand(u, 1); }, range.lo, range.hi, tol);
    const auto p = quad::tanh_sinh([&](double u) { return integrand(u, 2); }, range.lo, range.hi, tol);
    m.density += d.value;
    m.vr2 += r.value;
    m.vphi2 += p.value;
    m.error += d.error;
  }
  return m;
}

/// rho R <v_phi> of an odd DF at (x, R).
inline Recovery rotation_moment(const OddDF& df, double x, double R, const QuadratureOptions& quad = {}) {
  detail::check_point(df.convention(), x, R);
  const bool bounded = df.convention().bounded();
  Recovery out;
  if (bounded && x == 0.0) return out;
  const double tol = detail::oracle_tol(quad);
  for (const DFComponent& c : df.components()) {
    if (c.prefactor == 0.0) continue;
    const double lam = c.lz_power;
    const double gamma = detail::stretch(df, c, R);
    const auto range = detail::component_range(df, c, x);
    const double rl = std::pow(R, lam + 1.0);
    const auto e = quad::tanh_sinh(
        [&](double u) {
          const double v2 = detail::vmax2(bounded, x, u, gamma);
          if (v2 <= 0.0) return 0.0;
          return 4.0 * kPi * rl * std::pow(std::sqrt(v2), lam + 2.0) / (lam + 2.0) * c.energy(u);
        },
        range.lo, range.hi, tol);
    out.value += e.value;
    out.error += e.error;
  }
  return out;
}

/// Nested quadrature of (2 pi / R) int int w(energy, L_z) f(energy, L_z) dL_z d(energy)
/// over the physical domain at (x, R); `span` bounds the energy range of
/// unbounded conventions. `weight` receives (energy, L_z).
template <class F, class W>
Recovery velocity_integral(F&& f, W&& weight, const PotentialConvention& conv, double x, double R,
                           double span, double rel_tol = 1e-11) {
  detail::check_point(conv, x, R);
  const bool bounded = conv.bounded();
  if (bounded && x == 0.0) return {};
  const double lo = bounded ? 0.0 : x;
  const double hi = bounded ? x : x + span;
  double err = 0.0;
  // Largest inner integral so far; sets the absolute tolerance of later ones.
  double scale = 0.0;
  auto inner = [&](double e) {
    const double room = bounded ? x - e : e - x;
    if (!(room > 0.0)) return 0.0;
    const double lmax = R * std::sqrt(2.0 * room);
    auto g = [&](double l) { return weight(e, l) * f(e, l) + weight(e, -l) * f(e, -l); };
    const auto r = quad::tanh_sinh(g, 0.0, lmax, rel_tol, 12, 1e-3 * rel_tol * scale);
    scale = std::max(scale, std::abs(r.value));
    return r.value;
  };
  const auto outer = quad::tanh_sinh(inner, lo, hi, rel_tol);
  err = outer.error;
  return {2.0 * kPi / R * outer.value, 2.0 * kPi / R * err};
}

}  // namespace dfforge
