#pragma once

// Command implementations behind the dfforge executable. Each command writes
// its output to a stream and returns a process exit code.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dfforge/contour.hpp"
#include "dfforge/model_io.hpp"
#include "dfforge/models.hpp"
#include "dfforge/moments.hpp"
#include "dfforge/synthesis.hpp"
#include "dfforge/verify.hpp"

namespace dfforge::app {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kRoundTripFailure = 2,
  kPositivityFailure = 4,
};

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ModelRef {
  std::optional<std::string> path;
  std::optional<std::string> builtin;
};

inline ModelBundle resolve(const ModelRef& ref) {
  if (ref.path && ref.builtin) throw ConfigurationError("give either --model or --builtin, not both");
  if (ref.path) return bundle_from_model(load_model_file(*ref.path));
  if (ref.builtin) return parse_builtin(*ref.builtin);
  throw ConfigurationError("a model is required: --model FILE or --builtin SPEC");
}

inline EvenDF synthesize_bundle(const ModelBundle& b, std::optional<Variant> variant,
                                const QuadratureOptions& quad) {
  return dfforge::synthesize(SynthesisRequest{b.model.expansion, b.model.convention,
                                              variant.value_or(b.variant), quad});
}

inline nlohmann::json bundle_json(const ModelBundle& b) {
  nlohmann::json j;
  j["kind"] = b.kind;
  j["name"] = b.model.name;
  j["params"] = b.params;
  j["convention"] = b.model.convention.bounded() ? "relative_bounded" : "unbounded_rising";
  return j;
}

inline int cmd_synthesize(const ModelBundle& b, std::optional<Variant> variant,
                          const QuadratureOptions& quad, std::ostream& out) {
  const Variant v = variant.value_or(b.variant);
  const EvenDF df = synthesize_bundle(b, v, quad);
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["model"] = bundle_json(b);
  doc["variant"] = to_string(v);
  if (df.scale_radius()) doc["R_a"] = *df.scale_radius();
  nlohmann::json comps = nlohmann::json::array();
  for (const DFComponent& c : df.components()) {
    nlohmann::json jc;
    jc["family"] = c.family == DensityFamily::PureRadial ? "pure_radial" : "scaled_radial";
    jc["n"] = c.n;
    jc["beta"] = c.beta;
    jc["lz_power"] = c.lz_power;
    jc["argument"] = to_string(c.argument);
    jc["prefactor"] = c.prefactor;
    jc["alpha"] = c.alpha;
    jc["derivative_order"] = c.derivative_order;
    jc["boundary"] = c.boundary;
    if (c.integrand.is_atomic()) jc["integrand"] = detail::coefficient_to_json(c.integrand);
    if (auto terms = c.power_terms()) {
      nlohmann::json pt = nlohmann::json::array();
      for (const auto& t : *terms) pt.push_back({{"coefficient", t.coefficient}, {"exponent", t.exponent}});
      jc["closed_form"] = pt;
    }
    comps.push_back(jc);
  }
  doc["components"] = comps;
  out << doc.dump(2) << "\n";
  return kOk;
}

/// Grid defaults for a bundle: its energy range and the widest |L_z| on it.
inline GridSpec default_grid(const ModelBundle& b, int steps = 21) {
  GridSpec g;
  g.e_min = b.energy_min;
  g.e_max = b.energy_max;
  g.e_steps = steps;
  double lmax = 1.0;
  if (b.envelope) {
    lmax = 0.0;
    for (int i = 1; i <= 64; ++i) lmax = std::max(lmax, b.envelope(b.energy_min + (b.energy_max - b.energy_min) * i / 64.0));
    if (!(lmax > 0.0)) lmax = 1.0;
  }
  g.lz_min = -lmax;
  g.lz_max = lmax;
  g.lz_steps = steps;
  return g;
}

inline int cmd_eval_grid(const ModelBundle& b, std::optional<Variant> variant, const GridSpec& grid,
                         const QuadratureOptions& quad, std::ostream& out) {
  const EvenDF df = synthesize_bundle(b, variant, quad);
  out << "energy,Lz,f\n";
  for (int i = 0; i < grid.e_steps; ++i) {
    const double e = grid_value(grid.e_min, grid.e_max, i, grid.e_steps);
    for (int j = 0; j < grid.lz_steps; ++j) {
      const double l = grid_value(grid.lz_min, grid.lz_max, j, grid.lz_steps);
      out << fmt(e) << ',' << fmt(l) << ',' << fmt(df(e, l)) << '\n';
    }
  }
  return kOk;
}

struct MomentGrid {
  double x_min = 0.1, x_max = 1.0;
  int x_steps = 5;
  double r_min = 0.1, r_max = 2.0;
  int r_steps = 5;
  double vbar_phi = 0.0;
};

inline int cmd_moments(const ModelBundle& b, const MomentGrid& g, std::ostream& out) {
  out << "psi,R,sigma_R2,sigma_phi2,vbar_phi\n";
  for (int i = 0; i < g.x_steps; ++i) {
    const double x = grid_value(g.x_min, g.x_max, i, g.x_steps);
    for (int j = 0; j < g.r_steps; ++j) {
      const double R = grid_value(g.r_min, g.r_max, j, g.r_steps);
      const MomentField m = dispersion_closed_form(b.model, x, R, g.vbar_phi);
      out << fmt(x) << ',' << fmt(R) << ',' << fmt(m.sigma_R2) << ',' << fmt(m.sigma_phi2) << ','
          << fmt(m.vbar_phi) << '\n';
    }
  }
  return kOk;
}

struct ContourSpec {
  double ratio = 0.4;
  int count = 12;
  std::vector<double> levels;  // explicit levels override ratio/count
  double e_max = 0.0;          // 0: bundle default
  int e_steps = 161;
  int lz_steps = 161;
};

/// Default energy extent of contour plots.
inline double contour_energy_max(const ModelBundle& b) {
  if (b.kind == "binney") return 4.0 * b.params.at("v0") * b.params.at("v0");
  return b.energy_max;
}

inline nlohmann::json contour_document(const ModelBundle& b, const ContourSpec& spec,
                                       const QuadratureOptions& quad, std::vector<std::string>* warnings) {
  const EvenDF df = synthesize_bundle(b, std::nullopt, quad);
  const double e_max = spec.e_max > 0.0 ? spec.e_max : contour_energy_max(b);
  double lmax = 0.0;
  if (b.envelope) {
    for (int i = 1; i <= 128; ++i) lmax = std::max(lmax, b.envelope(e_max * i / 128.0));
  }
  if (!(lmax > 0.0)) lmax = 1.0;

  SampledField field;
  field.xs.resize(spec.e_steps);
  for (int i = 0; i < spec.e_steps; ++i) field.xs[i] = grid_value(0.0, e_max, i, spec.e_steps);
  field.ys = symmetric_axis(lmax, spec.lz_steps);
  field.values.resize(field.xs.size() * field.ys.size());
  for (std::size_t i = 0; i < field.xs.size(); ++i)
    for (std::size_t j = 0; j < field.ys.size(); ++j)
      field.values[i * field.ys.size() + j] = df(field.xs[i], field.ys[j]);

  const double top = field.max();
  const std::vector<double> levels =
      spec.levels.empty() ? geometric_levels(top, spec.ratio, spec.count) : spec.levels;

  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["model"] = bundle_json(b);
  doc["grid"] = {{"energy_min", 0.0}, {"energy_max", e_max}, {"energy_steps", spec.e_steps},
                 {"lz_max", lmax}, {"lz_steps", spec.lz_steps}, {"f_max", top}};
  doc["ratio"] = spec.levels.empty() ? nlohmann::json(spec.ratio) : nlohmann::json(nullptr);
  nlohmann::json jl = nlohmann::json::array();
  bool any = false;
  for (const ContourSet& cs : contour_levels(field, levels)) {
    nlohmann::json lines = nlohmann::json::array();
    for (const Polyline& pl : cs.lines) {
      nlohmann::json pts = nlohmann::json::array();
      for (const Point2& p : pl.points) pts.push_back({p.x, p.y});
      lines.push_back({{"closed", pl.closed}, {"points", pts}});
    }
    any = any || !cs.lines.empty();
    jl.push_back({{"level", cs.level}, {"polylines", lines}});
  }
  doc["levels"] = jl;
  nlohmann::json boundary = nlohmann::json::array();
  if (b.envelope) {
    for (double e : field.xs) {
      const double l = b.envelope(e);
      boundary.push_back({e, l});
    }
  }
  doc["boundary"] = boundary;
  if (!any && warnings) warnings->push_back("no contour level intersects the sampled grid");
  return doc;
}

inline int cmd_contour(const ModelBundle& b, const ContourSpec& spec, const QuadratureOptions& quad,
                       std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto doc = contour_document(b, spec, quad, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  out << doc.dump(2) << "\n";
  return kOk;
}

struct VerifyOptions {
  double round_trip_tol = 1e-6;
  double moment_tol = 1e-6;
  int round_trip_points = 10;
  int scan_energy_steps = 160;
  int scan_lz_steps = 81;
  std::uint64_t seed = 20240601;
};

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct VerifyResult {
  nlohmann::json report;
  int exit_code = kOk;
};

inline VerifyResult run_verify(const ModelBundle& b, const VerifyOptions& opt, const QuadratureOptions& quad) {
  const EvenDF df = synthesize_bundle(b, std::nullopt, quad);
  std::mt19937_64 gen(opt.seed);
  nlohmann::json report;
  report["schema_version"] = kSchemaVersion;
  report["model"] = bundle_json(b);
  report["variant"] = to_string(b.variant);

  // Density round trip.
  double rt = 0.0;
  nlohmann::json pts = nlohmann::json::array();
  for (int k = 0; k < opt.round_trip_points; ++k) {
    double x, R, expected;
    if (b.potential) {
      R = 0.1 + 1.9 * uniform01(gen);
      const double z = 1.5 * uniform01(gen);
      x = b.potential(R, z);
      expected = b.density ? b.density(R, z) : eval_density(b.model.expansion, x, R);
    } else {
      x = 0.1 + 0.9 * uniform01(gen);
      R = 0.1 + 1.9 * uniform01(gen);
      expected = eval_density(b.model.expansion, x, R);
    }
    const double got = recover_density(df, x, R, quad).value;
    const double err = std::abs(got - expected) / std::max(std::abs(expected), 1e-300);
    rt = std::max(rt, err);
    pts.push_back({{"x", x}, {"R", R}, {"expected", expected}, {"recovered", got}, {"rel_err", err}});
  }
  report["round_trip_max_rel_err"] = rt;
  report["round_trip_tol"] = opt.round_trip_tol;
  report["round_trip_points"] = pts;

  // Dispersions: closed form against direct moments.
  double me = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double x = grid_value(0.1, 1.0, i, 5);
    for (int j = 0; j < 5; ++j) {
      const double R = grid_value(0.1, 2.0, j, 5);
      const MomentField c = dispersion_closed_form(b.model, x, R);
      const MomentField d = dispersion_from_df(df, x, R, 0.0, quad);
      me = std::max(me, std::abs(c.sigma_R2 - d.sigma_R2) / std::abs(c.sigma_R2));
      me = std::max(me, std::abs(c.sigma_phi2 - d.sigma_phi2) / std::abs(c.sigma_phi2));
    }
  }
  report["moments_max_rel_err"] = me;
  report["moments_tol"] = opt.moment_tol;

  // Positivity over the physical domain.
  const double e_lo = b.energy_min + (b.energy_max - b.energy_min) / opt.scan_energy_steps;
  PositivityReport pos;
  if (b.envelope) {
    pos = positivity_scan(df, e_lo, b.energy_max, opt.scan_energy_steps, opt.scan_lz_steps, b.envelope);
  } else {
    GridSpec g = default_grid(b);
    g.e_min = e_lo;
    g.e_steps = opt.scan_energy_steps;
    g.lz_steps = opt.scan_lz_steps;
    pos = positivity_scan(df, g);
  }
  report["positivity"] = {{"min_value", pos.min_value},
                          {"argmin_energy", pos.argmin_energy},
                          {"argmin_lz", pos.argmin_lz},
                          {"negative_fraction", pos.negative_fraction()},
                          {"tol_neg", pos.tol_neg},
                          {"points", pos.points},
                          {"pass", pos.nonnegative()}};

  if (b.kind == "lyndenbell") {
    const double a = b.params.at("a");
    const double scale = 1.0 / (4.0 * kPi * b.params.at("G") * std::pow(2.0, 1.5) * kPi * kPi);
    const double want0 = 128.0 * (3.0 + a) / 7.0 * scale;
    const double want1 = -15.0 * a * (4.0 + a) * 4096.0 / 143.0 * scale;
    double got0 = 0.0, got1 = 0.0;
    for (const DFComponent& c : df.components()) {
      for (const PowerTerm& t : c.power_terms().value_or(std::vector<PowerTerm>{})) {
        if (c.n == 0 && t.exponent == 3.5) got0 += t.coefficient;
        if (c.n == 1 && t.exponent == 6.5) got1 += t.coefficient;
      }
    }
    auto rel = [](double g, double w) { return w == 0.0 ? std::abs(g) : std::abs(g - w) / std::abs(w); };
    report["coefficient_match"] = {{"eps^{7/2}", {{"expected", want0}, {"synthesized", got0}, {"rel_err", rel(got0, want0)}}},
                                   {"eps^{13/2} L_z^2", {{"expected", want1}, {"synthesized", got1}, {"rel_err", rel(got1, want1)}}}};
  }

  int code = kOk;
  if (!(rt <= opt.round_trip_tol) || !(me <= opt.moment_tol)) code |= kRoundTripFailure;
  if (!pos.nonnegative()) code |= kPositivityFailure;
  report["exit_code"] = code;
  return {report, code};
}

inline int cmd_verify(const ModelBundle& b, const VerifyOptions& opt, const QuadratureOptions& quad,
                      std::ostream& out) {
  const VerifyResult r = run_verify(b, opt, quad);
  out << r.report.dump(2) << "\n";
  return r.exit_code;
}

}  // namespace dfforge::app
