#pragma once

// Even DFs from density expansions by Abel inversion, term by term, plus the
// closed-form DF families: power-law (H-function) DFs, exponential DF/density
// pairs, and the rotating (odd) DFs of the logarithmic potential.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dfforge/config.hpp"
#include "dfforge/df.hpp"
#include "dfforge/error.hpp"
#include "dfforge/model.hpp"
#include "dfforge/special.hpp"

namespace dfforge {

enum class Variant {
  EpsilonForm,       // rho = sum rho_n(psi) R^{2n}, f = sum L^{2n} h_n(epsilon)
  QForm,             // rho = sum rho_n(psi) R^{2n}/(1+R^2/R_a^2)^{n+1/2}, f = sum L^{2n} g_n(Q)
  GeneralForm,       // both families, R^{2 n beta}
  UnboundedEpsilon,  // as EpsilonForm for a potential rising to +inf
  UnboundedQ,
  UnboundedGeneral,
};

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::EpsilonForm: return "epsilon";
    case Variant::QForm: return "q";
    case Variant::GeneralForm: return "general";
    case Variant::UnboundedEpsilon: return "unbounded-epsilon";
    case Variant::UnboundedQ: return "unbounded-q";
    case Variant::UnboundedGeneral: return "unbounded-general";
  }
  return "?";
}

inline Variant variant_from_string(const std::string& s) {
  for (Variant v : {Variant::EpsilonForm, Variant::QForm, Variant::GeneralForm,
                    Variant::UnboundedEpsilon, Variant::UnboundedQ, Variant::UnboundedGeneral}) {
    if (s == to_string(v)) return v;
  }
  throw ConfigurationError("unknown variant \"" + s + "\"");
}

inline bool is_unbounded(Variant v) {
  return v == Variant::UnboundedEpsilon || v == Variant::UnboundedQ ||
         v == Variant::UnboundedGeneral;
}

struct SynthesisRequest {
  DensityExpansion expansion;
  PotentialConvention convention;
  Variant variant = Variant::EpsilonForm;
  QuadratureOptions quad;
};

/// The narrowest variant that covers the expansion under the given convention.
inline Variant default_variant(const DensityExpansion& expansion, const PotentialConvention& conv) {
  bool all_unit_beta = true;
  for (const auto& t : expansion.terms()) all_unit_beta = all_unit_beta && t.beta == 1.0;
  const bool pure = expansion.has_family(DensityFamily::PureRadial);
  const bool scaled = expansion.has_family(DensityFamily::ScaledRadial);
  if (conv.bounded()) {
    if (all_unit_beta && !scaled) return Variant::EpsilonForm;
    if (all_unit_beta && !pure) return Variant::QForm;
    return Variant::GeneralForm;
  }
  if (all_unit_beta && !scaled) return Variant::UnboundedEpsilon;
  if (all_unit_beta && !pure) return Variant::UnboundedQ;
  return Variant::UnboundedGeneral;
}

namespace detail {

inline std::string term_label(const DensityTerm& t) {
  return std::string(t.family == DensityFamily::PureRadial ? "pure_radial" : "scaled_radial") +
         " term n=" + std::to_string(t.n);
}

/// d^j rho_n / dpsi^j at psi = 0 must vanish for j = 0 .. j_max.
inline void check_boundary_conditions(const DensityTerm& t, int j_max) {
  for (int j = 0; j <= j_max; ++j) {
    const CoefficientFunction d = t.coeff.derivative(j);
    const double v = d(0.0);
    bool ok;
    if (d.is_atomic()) {
      ok = v == 0.0;
    } else {
      const double scale = d.series().max_abs_coefficient();
      ok = std::abs(v) <= 100.0 * d.error_estimate() + 1e-12 * scale;
    }
    if (!ok) {
      throw SynthesisError("boundary condition violated for " + term_label(t) + ": derivative j=" +
                           std::to_string(j) + " at psi=0 is " + std::to_string(v) +
                           " (must vanish for j <= " + std::to_string(j_max) + ")");
    }
  }
}

inline void check_integrable(const DensityTerm& t, const CoefficientFunction& integrand, int order) {
  if (!integrand.is_atomic()) return;
  for (const Atom& a : integrand.atoms()) {
    if (!(a.p > -1.0)) {
      throw SynthesisError("derivative of order " + std::to_string(order) + " of " + term_label(t) +
                           " has a non-integrable singularity x^" + std::to_string(a.p) +
                           " at psi=0; non-integer powers need p > order - 1");
    }
  }
}

inline void check_lz_integrable(const DensityTerm& t) {
  if (!(t.n_beta() > -0.5)) {
    throw AdmissibilityError(term_label(t) + ": n*beta = " + std::to_string(t.n_beta()) +
                             " <= -1/2 makes |L_z|^{2 n beta} non-integrable over velocities");
  }
}

/// Order of the Abel inversion for exponent n*beta: a = floor(n beta + 3/2),
/// alpha = n beta - a + 3/2 in [0, 1).
struct InversionOrder {
  int a;
  double alpha;
};

inline InversionOrder inversion_order(double n_beta) {
  const double shifted = n_beta + 1.5;
  int a = static_cast<int>(std::floor(shifted));
  double alpha = shifted - a;
  if (alpha >= 1.0) {  // roundoff guard
    a += 1;
    alpha = shifted - a;
  }
  if (a < 0 || !(alpha >= 0.0 && alpha < 1.0)) {
    throw AdmissibilityError("no valid inversion order for n*beta = " + std::to_string(n_beta));
  }
  return {a, alpha};
}

inline double integer_family_prefactor(int n) {
  return std::pow(2.0 * kPi, -1.5) / (std::ldexp(1.0, n) * special::gamma(n + 0.5));
}

// [2^{3/2} pi 2^{n beta} Gamma(n beta + 1/2) Gamma(1 - alpha)]^{-1}
inline double general_prefactor(double n_beta, double alpha) {
  return 1.0 / (std::pow(2.0, 1.5) * kPi * std::pow(2.0, n_beta) * special::gamma(n_beta + 0.5) *
                special::gamma(1.0 - alpha));
}

inline Argument argument_for(DensityFamily f, bool bounded) {
  if (bounded) return f == DensityFamily::PureRadial ? Argument::Epsilon : Argument::QBounded;
  return f == DensityFamily::PureRadial ? Argument::EnergyE : Argument::QUnbounded;
}

inline DFComponent bounded_component(const DensityTerm& t, int a, double alpha, double prefactor,
                                     const QuadratureOptions& quad) {
  check_lz_integrable(t);
  check_boundary_conditions(t, a - 1);
  DFComponent c;
  c.family = t.family;
  c.n = t.n;
  c.beta = t.beta;
  c.lz_power = t.lz_power();
  c.argument = argument_for(t.family, true);
  c.prefactor = prefactor;
  c.alpha = alpha;
  c.derivative_order = a + 1;
  c.integrand = t.coeff.derivative(a + 1);
  check_integrable(t, c.integrand, a + 1);
  c.boundary = t.coeff.derivative_at_zero(a);
  if (!std::isfinite(c.boundary)) {
    throw SynthesisError("boundary derivative of order " + std::to_string(a) + " of " +
                         term_label(t) + " is infinite at psi=0");
  }
  c.quad = quad;
  return c;
}

inline DFComponent unbounded_component(const DensityTerm& t, int a, double alpha, double prefactor,
                                       const QuadratureOptions& quad) {
  check_lz_integrable(t);
  if (!t.coeff.decays()) {
    throw DivergenceError(term_label(t) +
                          ": unbounded-potential inversion needs every atom to decay as "
                          "exp(-k Phi) with k > 0");
  }
  DFComponent c;
  c.family = t.family;
  c.n = t.n;
  c.beta = t.beta;
  c.lz_power = t.lz_power();
  c.argument = argument_for(t.family, false);
  c.prefactor = prefactor;
  c.alpha = alpha;
  c.derivative_order = a + 1;
  c.integrand = t.coeff.derivative(a + 1);
  c.boundary = 0.0;
  c.quad = quad;
  return c;
}

inline void require_convention(const SynthesisRequest& req, bool bounded) {
  if (req.convention.bounded() != bounded) {
    throw ConfigurationError(std::string("variant ") + to_string(req.variant) + " requires the " +
                             (bounded ? "relative_bounded" : "unbounded_rising") + " convention");
  }
}

inline void require_terms(const SynthesisRequest& req, DensityFamily family) {
  for (const auto& t : req.expansion.terms()) {
    if (t.family != family) {
      throw ConfigurationError(std::string("variant ") + to_string(req.variant) + " accepts only " +
                               (family == DensityFamily::PureRadial ? "pure_radial" : "scaled_radial") +
                               " terms; use a general variant");
    }
    if (t.beta != 1.0) {
      throw ConfigurationError(std::string("variant ") + to_string(req.variant) +
                               " requires beta = 1; use a general variant");
    }
  }
}

}  // namespace detail

/// f(epsilon, L_z) = sum_n L_z^{2n} h_n(epsilon) with
/// h_n = (2 pi)^{-3/2} / (2^n Gamma(n + 1/2)) [ int_0^eps rho_n^{(n+2)}(psi) (eps - psi)^{-1/2} dpsi
///                                              + eps^{-1/2} rho_n^{(n+1)}(0) ].
inline EvenDF synthesize_even_bounded(const SynthesisRequest& req) {
  detail::require_convention(req, true);
  detail::require_terms(req, DensityFamily::PureRadial);
  std::vector<DFComponent> comps;
  for (const auto& t : req.expansion.terms()) {
    comps.push_back(detail::bounded_component(t, t.n + 1, 0.5, detail::integer_family_prefactor(t.n),
                                              req.quad));
  }
  return EvenDF(req.convention, req.expansion.scale_radius(), std::move(comps));
}

/// As synthesize_even_bounded with Q = epsilon - L_z^2/(2 R_a^2) as argument,
/// for densities rho_n(psi) R^{2n} / (1 + R^2/R_a^2)^{n+1/2}.
inline EvenDF synthesize_even_q(const SynthesisRequest& req) {
  detail::require_convention(req, true);
  detail::require_terms(req, DensityFamily::ScaledRadial);
  std::vector<DFComponent> comps;
  for (const auto& t : req.expansion.terms()) {
    comps.push_back(detail::bounded_component(t, t.n + 1, 0.5, detail::integer_family_prefactor(t.n),
                                              req.quad));
  }
  return EvenDF(req.convention, req.expansion.scale_radius(), std::move(comps));
}

/// Fractional-power terms R^{2 n beta}: each term inverts with order
/// a = floor(n beta + 3/2) and kernel exponent alpha = n beta - a + 3/2.
inline EvenDF synthesize_even_general(const SynthesisRequest& req) {
  detail::require_convention(req, true);
  std::vector<DFComponent> comps;
  for (const auto& t : req.expansion.terms()) {
    detail::check_lz_integrable(t);
    const auto order = detail::inversion_order(t.n_beta());
    comps.push_back(detail::bounded_component(t, order.a, order.alpha,
                                              detail::general_prefactor(t.n_beta(), order.alpha),
                                              req.quad));
  }
  return EvenDF(req.convention, req.expansion.scale_radius(), std::move(comps));
}

/// Potentials rising to +inf: inversion over the upper tail [E, inf), with the
/// alternating sign of the repeated derivative.
inline EvenDF synthesize_even_unbounded(const SynthesisRequest& req) {
  detail::require_convention(req, false);
  std::vector<DFComponent> comps;
  switch (req.variant) {
    case Variant::UnboundedEpsilon:
    case Variant::UnboundedQ: {
      detail::require_terms(req, req.variant == Variant::UnboundedEpsilon ? DensityFamily::PureRadial
                                                                          : DensityFamily::ScaledRadial);
      for (const auto& t : req.expansion.terms()) {
        const double sign = (t.n % 2 == 0) ? 1.0 : -1.0;
        comps.push_back(detail::unbounded_component(
            t, t.n + 1, 0.5, sign * detail::integer_family_prefactor(t.n), req.quad));
      }
      break;
    }
    case Variant::UnboundedGeneral: {
      for (const auto& t : req.expansion.terms()) {
        detail::check_lz_integrable(t);
        const auto order = detail::inversion_order(t.n_beta());
        const double sign = ((order.a - 1) % 2 == 0) ? 1.0 : -1.0;
        comps.push_back(detail::unbounded_component(
            t, order.a, order.alpha, sign * detail::general_prefactor(t.n_beta(), order.alpha),
            req.quad));
      }
      break;
    }
    default:
      throw ConfigurationError(std::string("synthesize_even_unbounded: variant ") +
                               to_string(req.variant) + " is not an unbounded variant");
  }
  return EvenDF(req.convention, req.expansion.scale_radius(), std::move(comps));
}

/// Dispatch on the request's variant.
inline EvenDF synthesize(const SynthesisRequest& req) {
  switch (req.variant) {
    case Variant::EpsilonForm: return synthesize_even_bounded(req);
    case Variant::QForm: return synthesize_even_q(req);
    case Variant::GeneralForm: return synthesize_even_general(req);
    case Variant::UnboundedEpsilon:
    case Variant::UnboundedQ:
    case Variant::UnboundedGeneral: return synthesize_even_unbounded(req);
  }
  throw ConfigurationError("unknown variant");
}

inline EvenDF synthesize(const ModelDefinition& model, std::optional<Variant> variant = std::nullopt,
                         const QuadratureOptions& quad = {}) {
  SynthesisRequest req{model.expansion, model.convention,
                       variant.value_or(default_variant(model.expansion, model.convention)), quad};
  return synthesize(req);
}

/// Even DF of the density psi^p R^{2n} / (1 + R^2)^{n+1/2}:
///   Gamma(p+1) L^{2n} (eps - L^2/2)^{p-n-3/2} / (pi 2^{n+3/2} Gamma(n+1/2) Gamma(p-n-1/2)),
/// zero for eps <= L^2/2.
inline double dejonghe_powerlaw_df(double p, int n, double eps, double lz) {
  if (n < 0) throw UnsupportedParameterError("dejonghe_powerlaw_df: n must be >= 0");
  if (!(p >= 1.5)) throw UnsupportedParameterError("dejonghe_powerlaw_df: p must be >= 3/2");
  if (!(p - n > 1.0)) {
    throw UnsupportedParameterError("dejonghe_powerlaw_df: requires p - n > 1 (got p=" +
                                    std::to_string(p) + ", n=" + std::to_string(n) + ")");
  }
  if (special::is_nonpositive_integer(p - n - 0.5)) {
    throw UnsupportedParameterError("dejonghe_powerlaw_df: Gamma(p - n - 1/2) has a pole");
  }
  const double l2 = lz * lz;
  const double x = eps - 0.5 * l2;
  if (!(x > 0.0)) return 0.0;
  const double norm = special::gamma(p + 1.0) /
                      (kPi * std::pow(2.0, n + 1.5) * special::gamma(n + 0.5) *
                       special::gamma(p - n - 0.5));
  return norm * std::pow(l2, n) * std::pow(x, p - n - 1.5);
}

/// The same family written through the H function, for g(R) = R^{2a}/(1+R^2)^{a+b}:
///   Gamma(p+1) eps^{p-3/2} / (2^{3/2} pi Gamma(a+b)) H(a, b, p-1/2, 1/2; L^2/(2 eps)).
inline double dejonghe_h_df(double p, double a, double b, double eps, double lz) {
  if (!(eps > 0.0)) return 0.0;
  if (special::is_nonnegative_integer(-a - b) && -a - b > 0) {
    throw UnsupportedParameterError("dejonghe_h_df: -a-b is a natural number");
  }
  const double x = lz * lz / (2.0 * eps);
  return special::gamma(p + 1.0) * std::pow(eps, p - 1.5) /
         (std::pow(2.0, 1.5) * kPi * special::gamma(a + b)) *
         special::hfunction(a, b, p - 0.5, 0.5, x);
}

/// DF/density pair with exponential energy dependence, valid for any potential
/// rising to +inf:
///   even: f+ = |L|^{2n+1} exp(-alpha E - beta L^2/(2 R0^2)),
///         rho = 4 pi (2n)!! R0^{2(n+1)} R^{2n+1} e^{-alpha Phi} / (alpha (R0^2 alpha + beta R^2)^{n+1})
///   odd:  f- = sgn(L) L^{2n} exp(...), with rho <v_phi> given by the same
///         expression with R^{2n} in place of R^{2n+1}.
class ExpPair {
 public:
  ExpPair(int n, double alpha, double beta, double r0, Parity parity)
      : n_(n), alpha_(alpha), beta_(beta), r0_(r0), parity_(parity) {
    if (n < 0) throw DomainError("exp_pair: n must be >= 0");
    if (!(alpha > 0.0)) throw DomainError("exp_pair: alpha must be positive for convergence");
    if (!(beta >= 0.0)) throw DomainError("exp_pair: beta must be non-negative");
    if (!(r0 > 0.0)) throw DomainError("exp_pair: R0 must be positive");
  }

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double r0() const { return r0_; }
  Parity parity() const { return parity_; }
  double decay_rate() const { return alpha_; }

  double df(double E, double lz) const {
    if (!(E > 0.0)) return 0.0;
    const double a = std::abs(lz);
    const double g = std::exp(-alpha_ * E - beta_ * lz * lz / (2.0 * r0_ * r0_));
    if (parity_ == Parity::Even) return std::pow(a, 2 * n_ + 1) * g;
    const double s = lz > 0.0 ? 1.0 : (lz < 0.0 ? -1.0 : 0.0);
    return s * std::pow(a, 2 * n_) * g;
  }

  double operator()(double E, double lz) const { return df(E, lz); }

  /// rho (even) or rho <v_phi> (odd) at potential Phi and radius R.
  double closed_form(double phi, double R) const {
    const double radial = parity_ == Parity::Even ? std::pow(R, 2 * n_ + 1) : std::pow(R, 2 * n_);
    return 4.0 * kPi * special::double_factorial(2 * n_) * std::pow(r0_, 2.0 * (n_ + 1)) * radial *
           std::exp(-alpha_ * phi) /
           (alpha_ * std::pow(r0_ * r0_ * alpha_ + beta_ * R * R, n_ + 1));
  }

  /// What velocity-space integration of the DF yields: rho (even) or rho R <v_phi> (odd).
  double velocity_moment(double phi, double R) const {
    return parity_ == Parity::Even ? closed_form(phi, R) : R * closed_form(phi, R);
  }

 private:
  int n_;
  double alpha_, beta_, r0_;
  Parity parity_;
};

inline ExpPair exp_pair(int n, double alpha, double beta, double r0, Parity parity) {
  return ExpPair(n, alpha, beta, r0, parity);
}

/// Parameters of the odd DF of the logarithmic (Binney) potential with the
/// rotation law <v_phi> = v* R^{2(n+1)} / (R*^2 + R^2)^{n+1}.
struct BinneyOddParams {
  int n = 0;
  double v_star = 1.0;
  double R_star = 1.0;
  double v0 = 1.0;
  double q = 0.9;
  double G = 1.0;
};

/// The seven bracketed groups of the odd-DF series (prefactor included), in
/// order: L^2 e^{-4E}; constant e^{-4E}; first Gaussian sum; e^{-2E};
/// double sum; single R*^2 sum; e^{-2E} Gaussian sum.
inline std::array<double, 7> binney_odd_df_terms(const BinneyOddParams& p, double E, double lz) {
  std::array<double, 7> t{};
  if (p.n < 0) throw DomainError("binney_odd_df: n must be >= 0");
  if (!(E > 0.0) || lz == 0.0) return t;
  const double sgn = lz > 0.0 ? 1.0 : -1.0;
  const double v02 = p.v0 * p.v0;
  const double q2 = p.q * p.q;
  const double rs2 = p.R_star * p.R_star;
  const double pref = p.v_star * sgn / (4.0 * kPi * kPi * p.G * q2 * v02);
  const double x = lz / (p.R_star * p.v0);
  const double x2 = x * x;
  const double e4 = std::exp(-4.0 * E / v02);
  const double e2 = std::exp(-2.0 * E / v02);
  const double e4g = std::exp(-4.0 * E / v02 - 2.0 * lz * lz / (rs2 * v02));
  const double e2g = std::exp(-2.0 * E / v02 - lz * lz / (rs2 * v02));
  const int n = p.n;
  using special::double_factorial;

  t[0] = 16.0 * (1.0 - q2) * lz * lz / v02 * e4;
  t[1] = 8.0 * (1.0 - (n + 1) * rs2 * (1.0 - q2)) * e4;
  double s = 0.0;
  for (int j = 0; j <= n; ++j) s += std::pow(4.0, j) / double_factorial(2 * j) * std::pow(x2, j);
  t[2] = -8.0 * s * e4g;
  t[3] = (2.0 * q2 - 1.0) * e2;

  double dsum = 0.0;
  double ssum = 0.0;
  if (n % 2 == 0) {
    if (n > 0) {
      for (int k = 1; k <= n / 2; ++k)
        for (int j = 0; j <= 2 * k - 1; ++j)
          dsum += std::pow(4.0, j) / double_factorial(2 * j) * std::pow(x2, j);
    }
    for (int j = 0; j <= n / 2; ++j)
      ssum += std::pow(16.0, j) / double_factorial(4 * j) * std::pow(x2, 2 * j);
  } else {
    for (int k = 0; k <= (n - 1) / 2; ++k)
      for (int j = 0; j <= 2 * k; ++j)
        dsum += std::pow(4.0, j) / double_factorial(2 * j) * std::pow(x2, j);
    for (int j = 0; j <= (n - 1) / 2; ++j)
      ssum += std::pow(2.0, 4 * j + 2) / double_factorial(4 * j + 2) * std::pow(x2, 2 * j + 1);
  }
  t[4] = 16.0 * rs2 * (1.0 - q2) * dsum * e4g;
  t[5] = 8.0 * rs2 * (1.0 - q2) * ssum * e4g;

  double g = 0.0;
  for (int j = 0; j <= n; ++j) g += std::pow(2.0, j) / double_factorial(2 * j) * std::pow(x2, j);
  t[6] = (1.0 - 2.0 * q2) * g * e2g;

  for (double& v : t) v *= pref;
  return t;
}

/// Odd DF f-(E, L_z); antisymmetric in L_z and zero on L_z = 0.
inline double binney_odd_df(const BinneyOddParams& p, double E, double lz) {
  double f = 0.0;
  for (double v : binney_odd_df_terms(p, E, lz)) f += v;
  return f;
}

}  // namespace dfforge
