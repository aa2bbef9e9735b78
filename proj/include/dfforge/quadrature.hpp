#pragma once

// Quadrature building blocks: Gauss-Jacobi rules (Golub-Welsch), a globally
// adaptive panel integrator that carries algebraic endpoint weights exactly,
// and a tanh-sinh rule for integrands with unknown endpoint singularities.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

#include "dfforge/config.hpp"
#include "dfforge/error.hpp"

namespace dfforge::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Nodes and weights for integral_{-1}^{1} g(s) (1-s)^alpha (1+s)^beta ds.
struct JacobiRule {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Golub-Welsch construction; alpha, beta > -1.
inline JacobiRule make_jacobi_rule(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("make_jacobi_rule: need at least one node");
  if (!(alpha > -1.0 && beta > -1.0)) {
    throw DomainError("make_jacobi_rule: exponents must exceed -1");
  }
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int j = 0; j < n; ++j) {
    const double s = 2.0 * j + ab;
    if (j == 0) {
      diag(j) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(j) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int j = 1; j < n; ++j) {
    const double s = 2.0 * j + ab;
    double bj;
    if (j == 1) {
      bj = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      bj = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(j - 1) = std::sqrt(bj);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  JacobiRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  for (int j = 0; j < n; ++j) {
    rule.nodes[j] = solver.eigenvalues()(j);
    const double v = solver.eigenvectors()(0, j);
    rule.weights[j] = mu0 * v * v;
  }
  return rule;
}

/// Per-thread memo of Jacobi rules keyed by (n, alpha, beta).
inline const JacobiRule& cached_jacobi_rule(int n, double alpha, double beta) {
  thread_local std::map<std::tuple<int, double, double>, std::unique_ptr<JacobiRule>> cache;
  auto key = std::make_tuple(n, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<JacobiRule>(make_jacobi_rule(n, alpha, beta))).first;
  }
  return *it->second;
}

/// Globally adaptive integration of
///   integral_a^b g(t) (t - a)^left_exp (b - t)^right_exp dt.
///
/// Panels touching a or b integrate the corresponding power exactly with a
/// Gauss-Jacobi rule; interior panels fold the weight into the integrand.
/// Each panel is estimated with `order` and `2*order` nodes; the panel with the
/// largest error is bisected until the summed error meets the tolerance.
template <class F>
Estimate integrate_jacobi(F&& g, double a, double b, double left_exp, double right_exp,
                          const QuadratureOptions& opts = {}) {
  if (!(b > a)) {
    if (b == a) return {};
    throw DomainError("integrate_jacobi: empty or reversed interval");
  }
  const int n1 = std::max(opts.order, 2);
  const int n2 = 2 * n1;

  struct Panel {
    double lo, hi;
    int depth;
    double value, error;
    bool splittable;
  };

  auto evaluate = [&](double lo, double hi, int depth) {
    const bool carry_left = (lo == a) && left_exp != 0.0;
    const bool carry_right = (hi == b) && right_exp != 0.0;
    const double rule_alpha = carry_right ? right_exp : 0.0;
    const double rule_beta = carry_left ? left_exp : 0.0;
    const double half = 0.5 * (hi - lo);
    const double mid = lo + half;
    double scale = half;
    if (carry_left) scale *= std::pow(half, left_exp);
    if (carry_right) scale *= std::pow(half, right_exp);

    auto apply = [&](const JacobiRule& rule, double& magnitude) {
      double sum = 0.0;
      magnitude = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double s = rule.nodes[i];
        const double t = mid + half * s;
        double v = g(t);
        if (!carry_left && left_exp != 0.0) v *= std::pow((lo - a) + half * (1.0 + s), left_exp);
        if (!carry_right && right_exp != 0.0) v *= std::pow((b - hi) + half * (1.0 - s), right_exp);
        const double wv = rule.weights[i] * v;
        sum += wv;
        magnitude += std::abs(wv);
      }
      magnitude *= std::abs(scale);
      return sum * scale;
    };
    double mag1 = 0.0, mag2 = 0.0;
    const double coarse = apply(cached_jacobi_rule(n1, rule_alpha, rule_beta), mag1);
    const double fine = apply(cached_jacobi_rule(n2, rule_alpha, rule_beta), mag2);
    const double diff = std::abs(fine - coarse);
    Panel p{lo, hi, depth, fine, diff, true};
    if (!std::isfinite(fine)) {
      throw QuadratureError("integrate_jacobi: non-finite integrand", fine, diff);
    }
    // Differences at roundoff level cannot be reduced by bisection.
    if (diff <= 64.0 * std::numeric_limits<double>::epsilon() * mag2) p.splittable = false;
    return p;
  };

  auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);
  std::vector<Panel> settled;
  Panel root = evaluate(a, b, 0);
  double total = root.value;
  double total_err = root.error;
  queue.push(root);
  constexpr int kMaxPanels = 4000;
  int panels = 1;
  bool exhausted = false;  // a refinable panel hit the depth or panel limit
  for (;;) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (total_err <= tol || queue.empty()) {
      if (total_err > tol && exhausted) {
        throw QuadratureError("integrate_jacobi: maximum refinement reached", total, total_err);
      }
      break;
    }
    Panel worst = queue.top();
    queue.pop();
    if (!worst.splittable || worst.depth >= opts.max_depth || panels >= kMaxPanels) {
      if (worst.splittable) exhausted = true;
      settled.push_back(worst);
      continue;
    }
    const double m = 0.5 * (worst.lo + worst.hi);
    Panel left = evaluate(worst.lo, m, worst.depth + 1);
    Panel right = evaluate(m, worst.hi, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  // Re-sum to shed accumulated update roundoff.
  double sum = 0.0, err = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  for (const auto& p : settled) {
    sum += p.value;
    err += p.error;
  }
  return {sum, err};
}

/// Plain adaptive integral of g over [a, b].
template <class F>
Estimate integrate(F&& g, double a, double b, const QuadratureOptions& opts = {}) {
  return integrate_jacobi(std::forward<F>(g), a, b, 0.0, 0.0, opts);
}

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Robust to integrable
/// algebraic or logarithmic endpoint singularities; never samples the endpoints.
/// Converges when successive levels agree to rel_tol or to abs_tol.
template <class F>
Estimate tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-12, int max_level = 12,
                   double abs_tol = 0.0) {
  if (b == a) return {};
  if (!(b > a)) throw DomainError("tanh_sinh: reversed interval");
  const double d = 0.5 * (b - a);
  constexpr double kHalfPi = 0.5 * kPi;
  constexpr double kTMax = 6.56;  // complement 1 - tanh underflows past here

  // Contribution of the symmetric pair of abscissae at +/- t.
  auto pair = [&](double t, double& magnitude) {
    const double s = kHalfPi * std::sinh(t);
    const double e = std::exp(-2.0 * s);
    const double comp = 2.0 * e / (1.0 + e);  // 1 - tanh(s)
    const double ch = std::cosh(s);
    const double w = kHalfPi * std::cosh(t) / (ch * ch);
    const double delta = d * comp;
    double acc = 0.0;
    if (delta > 0.0 && w > 0.0) {
      const double xr = b - delta;
      const double xl = a + delta;
      if (xr < b && xr > a) {
        const double v = w * f(xr);
        acc += v;
        magnitude += std::abs(v);
      }
      if (t != 0.0 && xl > a && xl < b) {
        const double v = w * f(xl);
        acc += v;
        magnitude += std::abs(v);
      }
    }
    return acc;
  };

  double h = 1.0;
  double magnitude = 0.0;
  double sum = pair(0.0, magnitude);
  for (double t = h; t <= kTMax; t += h) sum += pair(t, magnitude);
  double prev = sum * h * d;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTMax; t += 2.0 * h) sum += pair(t, magnitude);
    const double cur = sum * h * d;
    const double diff = std::abs(cur - prev);
    const double floor = 1e-15 * magnitude * h * d;
    if (level >= 3 && (diff <= rel_tol * std::abs(cur) || diff <= floor || diff <= abs_tol)) {
      return {cur, diff};
    }
    prev = cur;
  }
  throw QuadratureError("tanh_sinh: no convergence at maximum level", prev,
                        std::abs(prev) * rel_tol);
}

}  // namespace dfforge::quad
