#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dfforge/coefficient.hpp"
#include "dfforge/error.hpp"

namespace dfforge {

/// Position and velocity in cylindrical coordinates (R, z; v_R, v_phi, v_z).
struct PhasePoint {
  double R = 0.0;
  double z = 0.0;
  double v_R = 0.0;
  double v_phi = 0.0;
  double v_z = 0.0;

  PhasePoint() = default;
  PhasePoint(double r, double height, double vr, double vphi, double vz)
      : R(r), z(height), v_R(vr), v_phi(vphi), v_z(vz) {
    if (!(r >= 0.0)) throw DomainError("PhasePoint: R must be non-negative");
  }

  /// Angular momentum about the symmetry axis.
  double Lz() const { return R == 0.0 ? 0.0 : R * v_phi; }
  double speed_squared() const { return v_R * v_R + v_phi * v_phi + v_z * v_z; }
};

enum class ConventionKind {
  /// psi = -Phi + Phi0 >= 0; stars only at epsilon > 0.
  RelativeBounded,
  /// Phi -> +inf at large distance; stars only at E > 0.
  UnboundedRising,
};

struct PotentialConvention {
  ConventionKind kind = ConventionKind::RelativeBounded;
  double phi0 = 0.0;

  bool bounded() const { return kind == ConventionKind::RelativeBounded; }
  friend bool operator==(const PotentialConvention&, const PotentialConvention&) = default;
};

/// epsilon = psi - v^2 / 2; values <= 0 lie outside the system.
inline double relative_energy(const PhasePoint& point, double psi) {
  if (psi < 0.0) throw DomainError("relative_energy: psi must be non-negative");
  return psi - 0.5 * point.speed_squared();
}

enum class DensityFamily {
  /// coeff(psi) R^{2 n beta}
  PureRadial,
  /// coeff(psi) R^{2 n beta} / (1 + R^2/R_a^2)^{n beta + 1/2}
  ScaledRadial,
};

struct DensityTerm {
  DensityFamily family = DensityFamily::PureRadial;
  int n = 0;
  double beta = 1.0;
  CoefficientFunction coeff;

  /// Exponent of |L_z| in the matching DF component (2 n beta).
  double lz_power() const { return 2.0 * n * beta; }
  double n_beta() const { return n * beta; }

  friend bool operator==(const DensityTerm&, const DensityTerm&) = default;
};

/// rho(x, R) as a sum of coefficient(x) x radial factor terms.
class DensityExpansion {
 public:
  DensityExpansion() = default;

  DensityExpansion(std::vector<DensityTerm> terms, std::optional<double> scale_radius = std::nullopt)
      : terms_(std::move(terms)), scale_radius_(scale_radius) {
    for (const DensityTerm& t : terms_) {
      if (t.n < 0) throw AdmissibilityError("density term with negative index n");
      if (!(t.n_beta() > -1.0)) {
        throw AdmissibilityError("density term n=" + std::to_string(t.n) +
                                 " has n*beta = " + std::to_string(t.n_beta()) + " <= -1");
      }
      if (t.family == DensityFamily::ScaledRadial && !scale_radius_) {
        throw ConfigurationError("ScaledRadial term requires the scaling radius R_a");
      }
    }
    if (scale_radius_ && !(*scale_radius_ > 0.0)) {
      throw ConfigurationError("scaling radius R_a must be positive");
    }
  }

  const std::vector<DensityTerm>& terms() const { return terms_; }
  std::optional<double> scale_radius() const { return scale_radius_; }

  bool has_family(DensityFamily f) const {
    for (const auto& t : terms_)
      if (t.family == f) return true;
    return false;
  }

  int max_index() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, t.n);
    return m;
  }

  /// Radial factor multiplying the coefficient of a term.
  double radial_factor(const DensityTerm& t, double R) const {
    const double e = t.lz_power();
    if (R == 0.0 && e < 0.0) {
      throw DomainError("eval_density: R = 0 with negative radial exponent");
    }
    const double rpow = e == 0.0 ? 1.0 : std::pow(R, e);
    if (t.family == DensityFamily::PureRadial) return rpow;
    const double ra = *scale_radius_;
    return rpow / std::pow(1.0 + (R * R) / (ra * ra), t.n_beta() + 0.5);
  }

  friend DensityExpansion operator+(const DensityExpansion& a, const DensityExpansion& b) {
    std::vector<DensityTerm> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    std::optional<double> ra = a.scale_radius_ ? a.scale_radius_ : b.scale_radius_;
    if (a.scale_radius_ && b.scale_radius_ && *a.scale_radius_ != *b.scale_radius_) {
      throw ConfigurationError("cannot concatenate expansions with different R_a");
    }
    return DensityExpansion(std::move(all), ra);
  }

  friend bool operator==(const DensityExpansion&, const DensityExpansion&) = default;

 private:
  std::vector<DensityTerm> terms_;
  std::optional<double> scale_radius_;
};

/// Density at potential value x (psi or Phi) and cylindrical radius R.
/// The result may be negative; positivity is a property of the model.
inline double eval_density(const DensityExpansion& expansion, double x, double R) {
  if (x < 0.0) throw DomainError("eval_density: potential argument must be non-negative");
  if (R < 0.0) throw DomainError("eval_density: R must be non-negative");
  double rho = 0.0;
  for (const DensityTerm& t : expansion.terms()) {
    const double radial = expansion.radial_factor(t, R);
    if (radial == 0.0) continue;
    rho += t.coeff(x) * radial;
  }
  return rho;
}

/// A complete axisymmetric model: convention, constants and density expansion.
struct ModelDefinition {
  std::string name;
  PotentialConvention convention;
  double G = 1.0;
  DensityExpansion expansion;

  std::optional<double> scale_radius() const { return expansion.scale_radius(); }
  friend bool operator==(const ModelDefinition&, const ModelDefinition&) = default;
};

}  // namespace dfforge
