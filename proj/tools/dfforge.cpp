// dfforge: two-integral distribution functions from axisymmetric densities.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dfforge/app.hpp"

namespace {

using namespace dfforge;

struct Common {
  app::ModelRef ref;
  std::string variant;
  double quad_tol = 0.0;
  int quad_max_depth = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_variant) {
  auto* m = cmd->add_option("--model", c.ref.path, "model JSON file");
  auto* b = cmd->add_option("--builtin", c.ref.builtin,
                            "built-in model, e.g. binney:v0=1,q=0.9 | lyndenbell:a=0.5 | fricke:p=2.5,n=0");
  m->excludes(b);
  if (with_variant) {
    cmd->add_option("--variant", c.variant,
                    "epsilon | q | general | unbounded-epsilon | unbounded-q | unbounded-general");
  }
  cmd->add_option("--quad-tol", c.quad_tol, "relative quadrature tolerance (default 1e-10 or $DFFORGE_QUAD_TOL)");
  cmd->add_option("--quad-max-depth", c.quad_max_depth, "maximum adaptive subdivision depth");
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

QuadratureOptions quad_options(const Common& c) {
  QuadratureOptions q = QuadratureOptions::from_environment();
  if (c.quad_tol > 0.0) q.rel_tol = c.quad_tol;
  if (c.quad_max_depth > 0) q.max_depth = c.quad_max_depth;
  return q;
}

std::optional<Variant> variant_option(const Common& c) {
  if (c.variant.empty()) return std::nullopt;
  return variant_from_string(c.variant);
}

// Runs `body` with the output stream, writing the file only once the command
// has produced all of its output.
template <class Body>
int with_output(const Common& c, Body&& body) {
  if (c.out.empty()) return body(std::cout);
  std::ostringstream buf;
  const int code = body(buf);
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigurationError("cannot write " + c.out);
  f << buf.str();
  if (!f) throw ConfigurationError("write failed: " + c.out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"dfforge: two-integral distribution functions for axisymmetric stellar systems"};
  cli.require_subcommand(1);

  Common syn, grid, mom, con, ver;

  auto* c_syn = cli.add_subcommand("synthesize", "print the synthesized DF components as JSON");
  add_common(c_syn, syn, true);

  GridSpec gs;
  auto* c_grid = cli.add_subcommand("eval-grid", "evaluate the DF on an (energy, L_z) grid as CSV");
  add_common(c_grid, grid, true);
  double e_min = 0, e_max = 0, lz_min = 0, lz_max = 0;
  int e_steps = 0, lz_steps = 0;
  c_grid->add_option("--e-min", e_min);
  c_grid->add_option("--e-max", e_max);
  c_grid->add_option("--e-steps", e_steps);
  c_grid->add_option("--lz-min", lz_min);
  c_grid->add_option("--lz-max", lz_max);
  c_grid->add_option("--lz-steps", lz_steps);

  app::MomentGrid mg;
  auto* c_mom = cli.add_subcommand("moments", "closed-form velocity dispersions on a (psi, R) grid as CSV");
  add_common(c_mom, mom, false);
  c_mom->add_option("--psi-min", mg.x_min);
  c_mom->add_option("--psi-max", mg.x_max);
  c_mom->add_option("--psi-steps", mg.x_steps);
  c_mom->add_option("--r-min", mg.r_min);
  c_mom->add_option("--r-max", mg.r_max);
  c_mom->add_option("--r-steps", mg.r_steps);
  c_mom->add_option("--vbar-phi", mg.vbar_phi, "mean rotational velocity");

  app::ContourSpec cs;
  auto* c_con = cli.add_subcommand("contour", "isocontours of the DF in the (energy, L_z) plane as JSON");
  add_common(c_con, con, false);
  c_con->add_option("--ratio", cs.ratio, "ratio of successive levels");
  c_con->add_option("--count", cs.count, "number of levels");
  c_con->add_option("--levels", cs.levels, "explicit levels");
  c_con->add_option("--e-max", cs.e_max, "largest energy on the grid");
  c_con->add_option("--e-steps", cs.e_steps);
  c_con->add_option("--lz-steps", cs.lz_steps);

  app::VerifyOptions vo;
  auto* c_ver = cli.add_subcommand("verify", "round-trip, moment and positivity checks as JSON");
  add_common(c_ver, ver, false);
  c_ver->add_option("--points", vo.round_trip_points, "round-trip sample points");
  c_ver->add_option("--seed", vo.seed, "sampling seed");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kUsage;
  }

  try {
    if (c_syn->parsed()) {
      const auto b = app::resolve(syn.ref);
      return with_output(syn, [&](std::ostream& o) {
        return app::cmd_synthesize(b, variant_option(syn), quad_options(syn), o);
      });
    }
    if (c_grid->parsed()) {
      const auto b = app::resolve(grid.ref);
      gs = app::default_grid(b);
      if (c_grid->count("--e-min")) gs.e_min = e_min;
      if (c_grid->count("--e-max")) gs.e_max = e_max;
      if (c_grid->count("--e-steps")) gs.e_steps = e_steps;
      if (c_grid->count("--lz-min")) gs.lz_min = lz_min;
      if (c_grid->count("--lz-max")) gs.lz_max = lz_max;
      if (c_grid->count("--lz-steps")) gs.lz_steps = lz_steps;
      if (gs.e_steps < 1 || gs.lz_steps < 1) throw ConfigurationError("grid steps must be positive");
      return with_output(grid, [&](std::ostream& o) {
        return app::cmd_eval_grid(b, variant_option(grid), gs, quad_options(grid), o);
      });
    }
    if (c_mom->parsed()) {
      const auto b = app::resolve(mom.ref);
      return with_output(mom, [&](std::ostream& o) { return app::cmd_moments(b, mg, o); });
    }
    if (c_con->parsed()) {
      const auto b = app::resolve(con.ref);
      return with_output(con, [&](std::ostream& o) {
        return app::cmd_contour(b, cs, quad_options(con), o, std::cerr);
      });
    }
    if (c_ver->parsed()) {
      const auto b = app::resolve(ver.ref);
      return with_output(ver, [&](std::ostream& o) { return app::cmd_verify(b, vo, quad_options(ver), o); });
    }
  } catch (const dfforge::Error& e) {
    std::cerr << "dfforge: " << e.what() << "\n";
    return app::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "dfforge: " << e.what() << "\n";
    return app::kUsage;
  }
  return app::kUsage;
}
