#pragma once

// Synthesized two-integral distribution functions: a sum of components
// |L_z|^lambda * g(argument), with the argument epsilon, E or a Q variable.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dfforge/abel.hpp"
#include "dfforge/coefficient.hpp"
#include "dfforge/config.hpp"
#include "dfforge/model.hpp"
#include "dfforge/special.hpp"

namespace dfforge {

enum class Argument {
  Epsilon,     // relative energy, bounded potentials
  EnergyE,     // energy, unbounded potentials
  QBounded,    // epsilon - L_z^2 / (2 R_a^2), clipped at zero
  QUnbounded,  // E + L_z^2 / (2 R_a^2)
};

enum class Parity { Even, Odd };

inline bool is_bounded(Argument a) { return a == Argument::Epsilon || a == Argument::QBounded; }
inline bool is_q(Argument a) { return a == Argument::QBounded || a == Argument::QUnbounded; }

inline const char* to_string(Argument a) {
  switch (a) {
    case Argument::Epsilon: return "epsilon";
    case Argument::EnergyE: return "E";
    case Argument::QBounded: return "Q";
    case Argument::QUnbounded: return "Q_unbounded";
  }
  return "?";
}

/// c * x^exponent, a term of a closed-form energy function.
struct PowerTerm {
  double coefficient = 0.0;
  double exponent = 0.0;
};

/// One |L_z|^lz_power * g(x) component, where
///   bounded:    g(x) = prefactor [ int_0^x D(t) (x - t)^-alpha dt + boundary x^-alpha ]
///   unbounded:  g(x) = prefactor   int_x^inf D(t) (t - x)^-alpha dt
/// and D = `integrand` is the derivative of the density coefficient of order
/// `derivative_order`. g vanishes for x <= 0.
struct DFComponent {
  DensityFamily family = DensityFamily::PureRadial;
  int n = 0;
  double beta = 1.0;

  double lz_power = 0.0;
  Argument argument = Argument::Epsilon;
  double prefactor = 0.0;
  double alpha = 0.5;
  int derivative_order = 2;
  CoefficientFunction integrand;
  double boundary = 0.0;
  QuadratureOptions quad;

  double energy(double x) const {
    if (!(x > 0.0)) return 0.0;
    if (prefactor == 0.0) return 0.0;
    if (is_bounded(argument)) {
      double v = abel_lower(integrand, x, alpha, quad);
      if (boundary != 0.0) v += boundary * std::pow(x, -alpha);
      return prefactor * v;
    }
    return prefactor * abel_upper(integrand, x, alpha, quad);
  }

  /// Closed form of g as a sum of powers, available for bounded components
  /// whose integrand is a pure power sum (no exponential factors).
  std::optional<std::vector<PowerTerm>> power_terms() const {
    if (!is_bounded(argument) || !integrand.is_atomic()) return std::nullopt;
    std::vector<PowerTerm> out;
    for (const Atom& a : integrand.atoms()) {
      if (a.k != 0.0) return std::nullopt;
      out.push_back({prefactor * a.c * special::beta(a.p + 1.0, 1.0 - alpha), a.p + 1.0 - alpha});
    }
    if (boundary != 0.0) out.push_back({prefactor * boundary, -alpha});
    return out;
  }

  /// Slowest exponential decay rate of g (unbounded components).
  double decay_rate() const { return integrand.is_atomic() ? integrand.min_decay_rate() : 0.0; }
};

/// A distribution function assembled from components of one parity.
template <Parity P>
class ComponentDF {
 public:
  ComponentDF() = default;
  ComponentDF(PotentialConvention convention, std::optional<double> scale_radius,
              std::vector<DFComponent> components)
      : convention_(convention), scale_radius_(scale_radius), components_(std::move(components)) {
    for (const auto& c : components_) {
      if (is_q(c.argument) && !scale_radius_) {
        throw ConfigurationError("Q-variable component requires the scaling radius R_a");
      }
    }
  }

  static constexpr Parity parity = P;

  const PotentialConvention& convention() const { return convention_; }
  std::optional<double> scale_radius() const { return scale_radius_; }
  const std::vector<DFComponent>& components() const { return components_; }

  /// Argument of a component at (energy, L_z); energy is epsilon or E per the convention.
  double argument(const DFComponent& c, double energy, double lz) const {
    switch (c.argument) {
      case Argument::Epsilon:
      case Argument::EnergyE: return energy;
      case Argument::QBounded: {
        const double ra = *scale_radius_;
        return std::max(energy - lz * lz / (2.0 * ra * ra), 0.0);
      }
      case Argument::QUnbounded: {
        const double ra = *scale_radius_;
        return energy + lz * lz / (2.0 * ra * ra);
      }
    }
    return 0.0;
  }

  double lz_factor(const DFComponent& c, double lz) const {
    const double a = std::abs(lz);
    double f = c.lz_power == 0.0 ? 1.0 : std::pow(a, c.lz_power);
    if constexpr (P == Parity::Odd) {
      f *= lz > 0.0 ? 1.0 : (lz < 0.0 ? -1.0 : 0.0);
    }
    return f;
  }

  double component_value(const DFComponent& c, double energy, double lz) const {
    if (!(energy > 0.0)) return 0.0;
    const double lf = lz_factor(c, lz);
    if (lf == 0.0) return 0.0;
    return lf * c.energy(argument(c, energy, lz));
  }

  double operator()(double energy, double lz) const {
    if (!(energy > 0.0)) return 0.0;
    double f = 0.0;
    for (const auto& c : components_) f += component_value(c, energy, lz);
    return f;
  }

  /// Smallest exponential decay rate over unbounded components.
  double decay_rate() const {
    double k = std::numeric_limits<double>::infinity();
    for (const auto& c : components_) k = std::min(k, c.decay_rate());
    return k;
  }

 private:
  PotentialConvention convention_;
  std::optional<double> scale_radius_;
  std::vector<DFComponent> components_;
};

using EvenDF = ComponentDF<Parity::Even>;
using OddDF = ComponentDF<Parity::Odd>;

/// sgn(L_z) times the even DF.
inline OddDF make_odd(const EvenDF& even) {
  return OddDF(even.convention(), even.scale_radius(), even.components());
}

}  // namespace dfforge
