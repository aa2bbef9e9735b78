#pragma once

#include <cstdlib>
#include <string>

#include "dfforge/error.hpp"

namespace dfforge {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Tolerances for the adaptive quadrature layer.
struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_depth = 48;
  /// Nodes of the coarse rule on each panel; the error check uses twice as many.
  int order = 20;

  /// Defaults, with `DFFORGE_QUAD_TOL` overriding the relative tolerance when set.
  static QuadratureOptions from_environment() {
    QuadratureOptions opts;
    if (const char* env = std::getenv("DFFORGE_QUAD_TOL"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0' || !(v > 0.0)) {
        throw ConfigurationError(std::string("DFFORGE_QUAD_TOL is not a positive number: ") + env);
      }
      opts.rel_tol = v;
    }
    return opts;
  }
};

/// Highest derivative order handed out by CoefficientFunction::derivative.
inline constexpr int kMaxDerivativeOrder = 16;

}  // namespace dfforge
