#pragma once

// Oracles for synthesized DFs: density and rotation recovery by velocity-space
// quadrature, and positivity scans over the physical domain.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "dfforge/df.hpp"
#include "dfforge/error.hpp"
#include "dfforge/model.hpp"
#include "dfforge/velocity.hpp"

namespace dfforge {

/// rho at (x, R) from an even DF.
inline Recovery recover_density(const EvenDF& df, double x, double R, const QuadratureOptions& quad = {}) {
  const VelocityMoments m = velocity_moments(df, x, R, quad);
  return {m.density, m.error};
}

/// rho R <v_phi> at (x, R) from an odd DF.
inline Recovery recover_rotation(const OddDF& df, double x, double R, const QuadratureOptions& quad = {}) {
  return rotation_moment(df, x, R, quad);
}

/// rho at (x, R) for any callable f(energy, L_z); `span` truncates the energy
/// range of unbounded conventions.
template <class F>
Recovery recover_density_generic(F&& f, const PotentialConvention& conv, double x, double R,
                                 double span = 0.0, double rel_tol = 1e-11) {
  if (!conv.bounded() && !(span > 0.0)) {
    throw ConfigurationError("recover_density_generic: unbounded convention needs an energy span");
  }
  return velocity_integral(std::forward<F>(f), [](double, double) { return 1.0; }, conv, x, R, span,
                           rel_tol);
}

/// rho R <v_phi> for any callable f(energy, L_z).
template <class F>
Recovery recover_rotation_generic(F&& f, const PotentialConvention& conv, double x, double R,
                                  double span = 0.0, double rel_tol = 1e-11) {
  if (!conv.bounded() && !(span > 0.0)) {
    throw ConfigurationError("recover_rotation_generic: unbounded convention needs an energy span");
  }
  return velocity_integral(std::forward<F>(f), [](double, double l) { return l; }, conv, x, R, span,
                           rel_tol);
}

/// Largest |L_z| reachable at a given energy: max over R of R sqrt(2 room(R)),
/// where room(R) is the kinetic energy available in the midplane (psi(R,0) - eps
/// or E - Phi(R,0)) and decreases outward.
inline double lz_envelope(const std::function<double(double)>& room, double r_hi = 1e6) {
  auto h = [&](double R) {
    const double k = room(R);
    return k > 0.0 ? R * R * 2.0 * k : 0.0;
  };
  constexpr int kSamples = 400;
  const double l0 = std::log(1e-6);
  const double l1 = std::log(r_hi);
  int best = 0;
  double best_v = -1.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double v = h(std::exp(l0 + (l1 - l0) * i / kSamples));
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best_v <= 0.0) return 0.0;
  // Golden-section refinement in log R around the best sample.
  double a = l0 + (l1 - l0) * std::max(best - 1, 0) / kSamples;
  double b = l0 + (l1 - l0) * std::min(best + 1, kSamples) / kSamples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = h(std::exp(c));
  double fd = h(std::exp(d));
  for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = h(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = h(std::exp(d));
    }
  }
  return std::sqrt(std::max({best_v, fc, fd}));
}

struct GridSpec {
  double e_min = 0.0;
  double e_max = 1.0;
  int e_steps = 50;
  double lz_min = -1.0;
  double lz_max = 1.0;
  int lz_steps = 50;
};

inline double grid_value(double lo, double hi, int i, int steps) {
  if (steps <= 1) return lo;
  if (i == steps - 1) return hi;
  return lo + (hi - lo) * i / (steps - 1);
}

struct PositivityReport {
  double min_value = 0.0;
  double argmin_energy = 0.0;
  double argmin_lz = 0.0;
  double max_abs = 0.0;
  double tol_neg = 0.0;
  std::size_t points = 0;
  std::size_t negative = 0;

  double negative_fraction() const { return points ? static_cast<double>(negative) / points : 0.0; }
  bool nonnegative() const { return negative == 0; }
};

namespace detail {

template <class F, class LzRange>
PositivityReport scan(F&& f, double e_min, double e_max, int e_steps, int lz_steps, LzRange&& lz_range,
                      double rel_tol_neg) {
  if (e_steps < 1 || lz_steps < 1) throw ConfigurationError("positivity_scan: empty grid");
  std::vector<double> values;
  std::vector<std::pair<double, double>> where;
  values.reserve(static_cast<std::size_t>(e_steps) * lz_steps);
  for (int i = 0; i < e_steps; ++i) {
    const double e = grid_value(e_min, e_max, i, e_steps);
    const auto [lo, hi] = lz_range(e);
    for (int j = 0; j < lz_steps; ++j) {
      const double l = grid_value(lo, hi, j, lz_steps);
      values.push_back(f(e, l));
      where.emplace_back(e, l);
    }
  }
  PositivityReport r;
  r.points = values.size();
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    r.max_abs = std::max(r.max_abs, std::abs(values[i]));
    if (values[i] < r.min_value) {
      r.min_value = values[i];
      r.argmin_energy = where[i].first;
      r.argmin_lz = where[i].second;
    }
  }
  r.tol_neg = rel_tol_neg * r.max_abs;
  for (double v : values)
    if (v < -r.tol_neg) ++r.negative;
  return r;
}

}  // namespace detail

/// Scan f on a rectangular (energy, L_z) grid.
template <class F>
PositivityReport positivity_scan(F&& f, const GridSpec& grid, double rel_tol_neg = 1e-12) {
  return detail::scan(std::forward<F>(f), grid.e_min, grid.e_max, grid.e_steps, grid.lz_steps,
                      [&](double) { return std::pair{grid.lz_min, grid.lz_max}; }, rel_tol_neg);
}

/// Scan f over energies in [e_min, e_max] and |L_z| <= envelope(energy).
template <class F>
PositivityReport positivity_scan(F&& f, double e_min, double e_max, int e_steps, int lz_steps,
                                 const std::function<double(double)>& envelope,
                                 double rel_tol_neg = 1e-12) {
  return detail::scan(
      std::forward<F>(f), e_min, e_max, e_steps, lz_steps,
      [&](double e) {
        const double l = envelope(e);
        return std::pair{-l, l};
      },
      rel_tol_neg);
}

}  // namespace dfforge
