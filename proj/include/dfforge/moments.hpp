#pragma once

// Velocity dispersions: closed forms from the density expansion (Hunter's
// antiderivative formulae) and direct velocity-space moments of a DF.

#include <cmath>

#include "dfforge/config.hpp"
#include "dfforge/df.hpp"
#include "dfforge/error.hpp"
#include "dfforge/model.hpp"
#include "dfforge/velocity.hpp"

namespace dfforge {

struct MomentField {
  double sigma_R2 = 0.0;
  double sigma_z2 = 0.0;
  double sigma_phi2 = 0.0;
  double vbar_phi = 0.0;
};

/// Mean rotation law v* R^{2(n+1)} / (R*^2 + R^2)^{n+1}.
inline double mean_vphi_law(int n, double v_star, double R_star, double R) {
  if (n < 0) throw DomainError("mean_vphi_law: n must be >= 0");
  if (!(R >= 0.0)) throw DomainError("mean_vphi_law: R must be non-negative");
  const double r2 = R * R;
  return v_star * std::pow(r2 / (R_star * R_star + r2), n + 1);
}

/// sigma_R^2 = sigma_z^2 = (1/rho) sum_n w_n(R) int rho_n, and
/// sigma_phi^2 = (1/rho) sum_n (2 n beta + 1) w'_n(R) int rho_n - vbar^2,
/// where the integral runs over [0, psi] (bounded) or [Phi, inf) (unbounded).
inline MomentField dispersion_closed_form(const DensityExpansion& expansion,
                                          const PotentialConvention& conv, double x, double R,
                                          double vbar_phi = 0.0) {
  if (!(R >= 0.0)) throw DomainError("dispersion_closed_form: R must be non-negative");
  if (!(x >= 0.0)) throw DomainError("dispersion_closed_form: potential argument must be non-negative");
  MomentField m;
  m.vbar_phi = vbar_phi;
  if (conv.bounded() && x == 0.0) {
    m.sigma_phi2 = -vbar_phi * vbar_phi;
    return m;
  }
  const double rho = eval_density(expansion, x, R);
  if (!(rho != 0.0)) throw UndefinedMomentError("dispersion_closed_form: density vanishes");
  double pr = 0.0;
  double pphi = 0.0;
  for (const DensityTerm& t : expansion.terms()) {
    const double anti = conv.bounded() ? t.coeff.integral_from_zero(x) : t.coeff.integral_to_infinity(x);
    const double radial = expansion.radial_factor(t, R);
    pr += radial * anti;
    double rphi = radial;
    if (t.family == DensityFamily::ScaledRadial) {
      const double ra = *expansion.scale_radius();
      rphi /= 1.0 + R * R / (ra * ra);
    }
    pphi += (2.0 * t.n_beta() + 1.0) * rphi * anti;
  }
  m.sigma_R2 = pr / rho;
  m.sigma_z2 = m.sigma_R2;
  m.sigma_phi2 = pphi / rho - vbar_phi * vbar_phi;
  return m;
}

inline MomentField dispersion_closed_form(const ModelDefinition& model, double x, double R,
                                          double vbar_phi = 0.0) {
  return dispersion_closed_form(model.expansion, model.convention, x, R, vbar_phi);
}

/// Dispersions by velocity-space integration of an even DF.
inline MomentField dispersion_from_df(const EvenDF& df, double x, double R, double vbar_phi = 0.0,
                                      const QuadratureOptions& quad = {}) {
  const VelocityMoments v = velocity_moments(df, x, R, quad);
  MomentField m;
  m.vbar_phi = vbar_phi;
  if (df.convention().bounded() && x == 0.0) {
    m.sigma_phi2 = -vbar_phi * vbar_phi;
    return m;
  }
  if (!(v.density != 0.0)) throw UndefinedMomentError("dispersion_from_df: density vanishes");
  m.sigma_R2 = v.vr2 / v.density;
  m.sigma_z2 = m.sigma_R2;
  m.sigma_phi2 = v.vphi2 / v.density - vbar_phi * vbar_phi;
  return m;
}

}  // namespace dfforge
