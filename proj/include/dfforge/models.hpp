#pragma once

// Built-in model bundles: the logarithmic (Binney) potential, the Lynden-Bell
// model and the separable power-law family.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "dfforge/config.hpp"
#include "dfforge/error.hpp"
#include "dfforge/model.hpp"
#include "dfforge/synthesis.hpp"
#include "dfforge/verify.hpp"

namespace dfforge {

/// A model with its potential and physical-domain description.
struct ModelBundle {
  std::string kind;
  std::map<std::string, double> params;
  ModelDefinition model;
  Variant variant = Variant::EpsilonForm;

  /// Phi(R, z) (unbounded) or psi(R, z) (bounded); empty for file models.
  std::function<double(double, double)> potential;
  /// Literal density rho(R, z), when the model supplies one.
  std::function<double(double, double)> density;
  /// Largest |L_z| reachable at a given energy.
  std::function<double(double)> envelope;
  /// Energy range of the physical domain used by scans and grids.
  double energy_min = 0.0;
  double energy_max = 1.0;

  EvenDF synthesize(const QuadratureOptions& quad = {}) const {
    return dfforge::synthesize(SynthesisRequest{model.expansion, model.convention, variant, quad});
  }
};

struct BinneyParams {
  double v0 = 1.0;
  double q = 0.9;
  double G = 1.0;
};

inline double binney_potential(const BinneyParams& p, double R, double z) {
  return 0.5 * p.v0 * p.v0 * std::log1p(R * R + z * z / (p.q * p.q));
}

/// Density of the logarithmic potential as printed:
/// v0^2/(4 pi G q^2) {2[(1-q^2)R^2+1] e^{-4 Phi/v0^2} + (2q^2-1) e^{-2 Phi/v0^2}}.
inline double binney_density(const BinneyParams& p, double R, double z) {
  const double v02 = p.v0 * p.v0;
  const double q2 = p.q * p.q;
  const double phi = binney_potential(p, R, z);
  return v02 / (4.0 * kPi * p.G * q2) *
         (2.0 * ((1.0 - q2) * R * R + 1.0) * std::exp(-4.0 * phi / v02) +
          (2.0 * q2 - 1.0) * std::exp(-2.0 * phi / v02));
}

inline DensityExpansion binney_expansion(const BinneyParams& p) {
  const double v02 = p.v0 * p.v0;
  const double q2 = p.q * p.q;
  const double s = v02 / (4.0 * kPi * p.G * q2);
  DensityTerm t0;
  t0.n = 0;
  t0.coeff = CoefficientFunction({Atom{s * (2.0 * q2 - 1.0), 0.0, 2.0 / v02},
                                  Atom{2.0 * s, 0.0, 4.0 / v02}});
  DensityTerm t1;
  t1.n = 1;
  t1.coeff = CoefficientFunction({Atom{2.0 * s * (1.0 - q2), 0.0, 4.0 / v02}});
  return DensityExpansion({t0, t1});
}

/// The even DF exactly as printed alongside the density above. Its constants
/// do not reproduce that density; it is kept for documentation only.
inline double binney_printed_even_df(const BinneyParams& p, double E, double lz) {
  if (!(E > 0.0)) return 0.0;
  const double v02 = p.v0 * p.v0;
  const double q2 = p.q * p.q;
  return 1.0 / (4.0 * kPi * p.G * q2 * v02 * p.v0) *
         (std::pow(2.0, 4.5) * ((1.0 - q2) * lz * lz + std::pow(2.0, 2.5) * v02) * std::exp(-4.0 * E / v02) +
          (2.0 * q2 - 1.0) * v02 * std::exp(-2.0 * E / v02));
}

/// Largest energy kept in scans: e^{-2E/v0^2} below 1e-16.
inline double binney_energy_max(const BinneyParams& p) {
  return 0.5 * p.v0 * p.v0 * 16.0 * std::log(10.0);
}

inline double binney_envelope(const BinneyParams& p, double E) {
  if (!(E > 0.0)) return 0.0;
  return lz_envelope([&](double R) { return E - binney_potential(p, R, 0.0); });
}

inline ModelBundle binney_bundle(const BinneyParams& p) {
  if (!(p.q > 0.0)) throw DomainError("binney_bundle: q must be positive");
  if (!(p.v0 > 0.0)) throw DomainError("binney_bundle: v0 must be positive");
  ModelBundle b;
  b.kind = "binney";
  b.params = {{"v0", p.v0}, {"q", p.q}, {"G", p.G}};
  b.model.name = "binney";
  b.model.convention.kind = ConventionKind::UnboundedRising;
  b.model.G = p.G;
  b.model.expansion = binney_expansion(p);
  b.variant = Variant::UnboundedEpsilon;
  b.potential = [p](double R, double z) { return binney_potential(p, R, z); };
  b.density = [p](double R, double z) { return binney_density(p, R, z); };
  b.envelope = [p](double E) { return binney_envelope(p, E); };
  b.energy_min = 0.0;
  b.energy_max = binney_energy_max(p);
  return b;
}

/// Odd DF factory for the rotation law with index n.
inline std::function<double(double, double)> binney_odd_factory(const BinneyParams& p, int n, double v_star,
                                                                double R_star) {
  BinneyOddParams o{n, v_star, R_star, p.v0, p.q, p.G};
  return [o](double E, double lz) { return binney_odd_df(o, E, lz); };
}

struct LyndenBellParams {
  double a = 0.5;
  double G = 1.0 / (4.0 * kPi);
};

inline double lyndenbell_psi(const LyndenBellParams& p, double R, double z) {
  const double s = R * R + z * z + 1.0;
  return std::pow(s * s + p.a * R * R, -0.25);
}

inline double lyndenbell_density(const LyndenBellParams& p, double R, double z) {
  const double psi = lyndenbell_psi(p, R, z);
  return std::pow(psi, 5) / (4.0 * kPi * p.G) *
         ((3.0 + p.a) - 5.0 * p.a * (1.0 + p.a / 4.0) * R * R * std::pow(psi, 4));
}

inline DensityExpansion lyndenbell_expansion(const LyndenBellParams& p) {
  const double s = 1.0 / (4.0 * kPi * p.G);
  DensityTerm t0;
  t0.n = 0;
  t0.coeff = CoefficientFunction::power(s * (3.0 + p.a), 5.0);
  DensityTerm t1;
  t1.n = 1;
  t1.coeff = CoefficientFunction::power(-s * 5.0 * p.a * (1.0 + p.a / 4.0), 9.0);
  return DensityExpansion({t0, t1});
}

/// The Lynden-Bell DF in closed form, in units with 4 pi G = 1:
/// (2^{3/2} pi^2)^{-1} eps^{7/2} [2^7 (3+a)/7 - 15 a (4+a) 2^12/143 eps^3 L_z^2].
inline double lyndenbell_closed_df(double a, double eps, double lz) {
  if (!(eps > 0.0)) return 0.0;
  return std::pow(eps, 3.5) / (std::pow(2.0, 1.5) * kPi * kPi) *
         (128.0 * (3.0 + a) / 7.0 - 15.0 * a * (4.0 + a) * 4096.0 / 143.0 * std::pow(eps, 3) * lz * lz);
}

inline ModelBundle lyndenbell_bundle(const LyndenBellParams& p) {
  ModelBundle b;
  b.kind = "lyndenbell";
  b.params = {{"a", p.a}, {"G", p.G}};
  b.model.name = "lyndenbell";
  b.model.convention.kind = ConventionKind::RelativeBounded;
  b.model.G = p.G;
  b.model.expansion = lyndenbell_expansion(p);
  b.variant = Variant::EpsilonForm;
  b.potential = [p](double R, double z) { return lyndenbell_psi(p, R, z); };
  b.density = [p](double R, double z) { return lyndenbell_density(p, R, z); };
  b.envelope = [p](double eps) {
    if (!(eps > 0.0) || eps >= 1.0) return 0.0;
    return lz_envelope([&](double R) { return lyndenbell_psi(p, R, 0.0) - eps; });
  };
  b.energy_min = 0.0;
  b.energy_max = 1.0;
  return b;
}

/// Separable density psi^p R^{2n} / (1 + R^2)^{n+1/2}, with its closed-form DF.
inline ModelBundle fricke_powerlaw_bundle(double p, int n) {
  if (n < 0) throw UnsupportedParameterError("fricke_powerlaw_bundle: n must be >= 0");
  if (!(p - n > 1.0)) {
    throw UnsupportedParameterError("fricke_powerlaw_bundle: requires p - n > 1");
  }
  if (!(p >= 1.5)) throw UnsupportedParameterError("fricke_powerlaw_bundle: requires p >= 3/2");
  ModelBundle b;
  b.kind = "fricke";
  b.params = {{"p", p}, {"n", static_cast<double>(n)}};
  b.model.name = "fricke";
  b.model.convention.kind = ConventionKind::RelativeBounded;
  DensityTerm t;
  t.family = DensityFamily::ScaledRadial;
  t.n = n;
  t.coeff = CoefficientFunction::power(1.0, p);
  b.model.expansion = DensityExpansion({t}, 1.0);
  b.variant = Variant::QForm;
  b.potential = {};
  b.density = {};
  // Q > 0 needs L_z^2 < 2 eps; the density is defined for any psi in (0, 1].
  b.envelope = [](double eps) { return eps > 0.0 ? std::sqrt(2.0 * eps) : 0.0; };
  b.energy_min = 0.0;
  b.energy_max = 1.0;
  return b;
}

inline double fricke_closed_df(const ModelBundle& b, double eps, double lz) {
  return dejonghe_powerlaw_df(b.params.at("p"), static_cast<int>(b.params.at("n")), eps, lz);
}

/// Parse "binney:v0=1,q=0.9", "lyndenbell:a=0.5" or "fricke:p=2.5,n=0".
inline ModelBundle parse_builtin(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigurationError("builtin parameter without value: " + item);
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != val.size() || val.empty()) {
        throw ConfigurationError("builtin parameter " + key + ": not a number: " + val);
      }
      kv[key] = v;
    }
  }
  auto take = [&](const std::string& key, double def) {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&](ModelBundle b) {
    if (!kv.empty()) throw ConfigurationError("unknown parameter for " + kind + ": " + kv.begin()->first);
    return b;
  };
  if (kind == "binney") {
    BinneyParams p;
    p.v0 = take("v0", 1.0);
    p.q = take("q", 0.9);
    p.G = take("G", 1.0);
    return finish(binney_bundle(p));
  }
  if (kind == "lyndenbell") {
    LyndenBellParams p;
    p.a = take("a", 0.5);
    p.G = take("G", 1.0 / (4.0 * kPi));
    return finish(lyndenbell_bundle(p));
  }
  if (kind == "fricke") {
    const double p = take("p", 2.5);
    const double n = take("n", 0.0);
    if (n != std::floor(n)) throw ConfigurationError("fricke: n must be an integer");
    return finish(fricke_powerlaw_bundle(p, static_cast<int>(n)));
  }
  throw ConfigurationError("unknown builtin model \"" + kind + "\" (binney, lyndenbell, fricke)");
}

/// Wrap a file model; the physical domain falls back to a rectangle.
inline ModelBundle bundle_from_model(ModelDefinition model) {
  ModelBundle b;
  b.kind = "file";
  b.variant = default_variant(model.expansion, model.convention);
  b.model = std::move(model);
  double k_min = std::numeric_limits<double>::infinity();
  for (const auto& t : b.model.expansion.terms()) {
    if (t.coeff.is_atomic() && t.coeff.decays()) k_min = std::min(k_min, t.coeff.min_decay_rate());
  }
  b.energy_min = 0.0;
  b.energy_max = b.model.convention.bounded() || !std::isfinite(k_min) ? 1.0 : kDecaySpan / k_min;
  return b;
}

}  // namespace dfforge
