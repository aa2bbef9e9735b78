#pragma once

// Potential-dependent coefficient functions of a density expansion.
//
// The working representation is a finite sum of atoms c * x^p * exp(-k x), which
// is closed under differentiation, so every derivative the inversion formulas
// need is exact. Densities outside that family can be supplied as a Chebyshev
// series on [0, x_max]; its derivatives carry an error estimate that grows with
// the order.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dfforge/config.hpp"
#include "dfforge/error.hpp"
#include "dfforge/special.hpp"

namespace dfforge {

/// c * x^p * exp(-k x)
struct Atom {
  double c = 0.0;
  double p = 0.0;
  double k = 0.0;

  double operator()(double x) const {
    if (c == 0.0) return 0.0;
    if (x == 0.0) {
      if (p > 0.0) return 0.0;
      if (p == 0.0) return c;
      return std::copysign(std::numeric_limits<double>::infinity(), c);
    }
    const double e = k == 0.0 ? 1.0 : std::exp(-k * x);
    return c * (p == 0.0 ? 1.0 : std::pow(x, p)) * e;
  }

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Merge atoms sharing (p, k), drop zeros, and order by (k, p).
inline std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.k != b.k ? a.k < b.k : a.p < b.p;
  });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && out.back().p == a.p && out.back().k == a.k) {
      out.back().c += a.c;
    } else {
      out.push_back(a);
    }
  }
  std::erase_if(out, [](const Atom& a) { return a.c == 0.0; });
  return out;
}

/// Chebyshev expansion of a tabulated coefficient on [0, x_max].
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;

  /// Build from samples at the Chebyshev-Lobatto points
  /// x_j = x_max (1 - cos(pi j / N)) / 2, j = 0..N.
  static ChebyshevSeries from_lobatto_samples(double x_max, const std::vector<double>& values,
                                              double derivative_tol = 1e-6) {
    if (!(x_max > 0.0)) throw DomainError("ChebyshevSeries: x_max must be positive");
    if (values.size() < 3) throw DomainError("ChebyshevSeries: need at least 3 samples");
    const int n = static_cast<int>(values.size()) - 1;
    // Samples are given in increasing x, i.e. decreasing Chebyshev variable.
    std::vector<double> coeffs(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
      double s = 0.0;
      for (int j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        // u_j = cos(pi j/N) corresponds to x = x_max(1 + u)/2, i.e. sample index n - j.
        s += w * values[n - j] * std::cos(kPi * k * j / n);
      }
      coeffs[k] = 2.0 * s / n;
    }
    coeffs[0] *= 0.5;
    coeffs[n] *= 0.5;
    ChebyshevSeries series;
    series.x_max_ = x_max;
    series.coeffs_ = std::move(coeffs);
    series.derivative_tol_ = derivative_tol;
    double tail = 0.0;
    for (int k = std::max(0, n - 2); k <= n; ++k) tail = std::max(tail, std::abs(series.coeffs_[k]));
    series.error_ = tail;
    return series;
  }

  /// Sample a callable at the Lobatto points and build the series.
  template <class F>
  static ChebyshevSeries fit(F&& f, double x_max, int degree, double derivative_tol = 1e-6) {
    std::vector<double> values(degree + 1);
    for (int j = 0; j <= degree; ++j) {
      values[j] = f(x_max * (1.0 - std::cos(kPi * j / degree)) / 2.0);
    }
    return from_lobatto_samples(x_max, values, derivative_tol);
  }

  double x_max() const { return x_max_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Absolute error estimate of this series (tail magnitude, amplified per derivative).
  double error_estimate() const { return error_; }
  int derivative_order() const { return order_; }
  double derivative_tolerance() const { return derivative_tol_; }

  double operator()(double x) const {
    if (x < -1e-12 * x_max_ || x > x_max_ * (1.0 + 1e-12)) {
      throw DomainError("ChebyshevSeries: x outside tabulated range [0, " + std::to_string(x_max_) +
                        "]");
    }
    const double u = std::clamp(2.0 * x / x_max_ - 1.0, -1.0, 1.0);
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 1; --k) {
      const double b0 = coeffs_[k] + 2.0 * u * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return coeffs_.empty() ? 0.0 : coeffs_[0] + u * b1 - b2;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  ChebyshevSeries derivative() const {
    const int n = static_cast<int>(coeffs_.size()) - 1;
    ChebyshevSeries d = *this;
    d.order_ = order_ + 1;
    if (n < 1) {
      d.coeffs_.assign(1, 0.0);
      return d;
    }
    std::vector<double> c(n + 1, 0.0);
    // c'_{k-1} = c'_{k+1} + 2 k c_k
    for (int k = n; k >= 1; --k) {
      c[k - 1] = (k + 1 <= n ? c[k + 1] : 0.0) + 2.0 * k * coeffs_[k];
    }
    c[0] *= 0.5;
    const double scale = 2.0 / x_max_;
    for (double& v : c) v *= scale;
    c.pop_back();
    d.coeffs_ = std::move(c);
    // Markov's inequality bounds the derivative of the truncation error.
    d.error_ = error_ * static_cast<double>(n) * n * scale;
    return d;
  }

  /// integral_0^x of the series.
  double integral_from_zero(double x) const {
    const int n = static_cast<int>(coeffs_.size()) - 1;
    std::vector<double> c(n + 2, 0.0);
    for (int k = 1; k <= n + 1; ++k) {
      const double prev = (k - 1 == 0 ? 2.0 * coeffs_[0] : coeffs_[k - 1]);
      const double next = (k + 1 <= n ? coeffs_[k + 1] : 0.0);
      c[k] = (prev - next) / (2.0 * k) * (0.5 * x_max_);
    }
    ChebyshevSeries anti;
    anti.x_max_ = x_max_;
    anti.coeffs_ = c;
    const double at_zero = anti(0.0);
    return anti(x) - at_zero;
  }

 private:
  double x_max_ = 1.0;
  std::vector<double> coeffs_;
  double error_ = 0.0;
  double derivative_tol_ = 1e-6;
  int order_ = 0;
};

/// A coefficient function rho_n(x) of a density expansion.
class CoefficientFunction {
 public:
  CoefficientFunction() = default;

  explicit CoefficientFunction(std::vector<Atom> atoms) : repr_(normalize_atoms(std::move(atoms))) {}
  explicit CoefficientFunction(ChebyshevSeries series) : repr_(std::move(series)) {}

  static CoefficientFunction power(double c, double p) { return CoefficientFunction({Atom{c, p, 0.0}}); }
  static CoefficientFunction exponential(double c, double k) {
    return CoefficientFunction({Atom{c, 0.0, k}});
  }

  bool is_atomic() const { return std::holds_alternative<std::vector<Atom>>(repr_); }
  bool is_zero() const { return is_atomic() && atoms().empty(); }

  const std::vector<Atom>& atoms() const {
    if (!is_atomic()) throw ConfigurationError("coefficient is tabulated, not an atom sum");
    return std::get<std::vector<Atom>>(repr_);
  }

  const ChebyshevSeries& series() const {
    if (is_atomic()) throw ConfigurationError("coefficient is an atom sum, not tabulated");
    return std::get<ChebyshevSeries>(repr_);
  }

  double operator()(double x) const {
    if (const auto* a = std::get_if<std::vector<Atom>>(&repr_)) {
      double s = 0.0;
      for (const Atom& atom : *a) s += atom(x);
      return s;
    }
    return std::get<ChebyshevSeries>(repr_)(x);
  }

  /// Exact derivative of the given order (atom sums) or a spectral one whose
  /// estimated error must stay within the series' tolerance (tabulated).
  CoefficientFunction derivative(int order = 1) const {
    if (order < 0) throw DomainError("derivative: negative order");
    if (order > kMaxDerivativeOrder) {
      throw DomainError("derivative: order " + std::to_string(order) + " exceeds the maximum " +
                        std::to_string(kMaxDerivativeOrder));
    }
    if (order == 0) return *this;
    if (const auto* a = std::get_if<std::vector<Atom>>(&repr_)) {
      std::vector<Atom> cur = *a;
      for (int i = 0; i < order; ++i) {
        std::vector<Atom> next;
        next.reserve(cur.size() * 2);
        for (const Atom& atom : cur) {
          if (atom.p != 0.0) next.push_back({atom.c * atom.p, atom.p - 1.0, atom.k});
          if (atom.k != 0.0) next.push_back({-atom.c * atom.k, atom.p, atom.k});
        }
        cur = normalize_atoms(std::move(next));
      }
      return CoefficientFunction(std::move(cur));
    }
    ChebyshevSeries s = std::get<ChebyshevSeries>(repr_);
    for (int i = 0; i < order; ++i) s = s.derivative();
    const double scale = std::max(s.max_abs_coefficient(), std::numeric_limits<double>::min());
    if (s.error_estimate() > s.derivative_tolerance() * scale) {
      throw DerivativeAccuracyError("tabulated coefficient: derivative of order " +
                                        std::to_string(s.derivative_order()) +
                                        " has estimated relative error " +
                                        std::to_string(s.error_estimate() / scale),
                                    s.error_estimate());
    }
    return CoefficientFunction(std::move(s));
  }

  /// Value of the derivative of the given order at x = 0 (may be +-inf).
  double derivative_at_zero(int order) const { return derivative(order)(0.0); }

  /// Estimated absolute error (zero for atom sums).
  double error_estimate() const { return is_atomic() ? 0.0 : series().error_estimate(); }

  /// True when every atom decays exponentially (k > 0).
  bool decays() const {
    if (!is_atomic()) return false;
    return std::all_of(atoms().begin(), atoms().end(), [](const Atom& a) { return a.k > 0.0; });
  }

  double min_decay_rate() const {
    double k = std::numeric_limits<double>::infinity();
    for (const Atom& a : atoms()) k = std::min(k, a.k);
    return k;
  }

  /// integral_0^x of the coefficient.
  double integral_from_zero(double x) const {
    if (x < 0.0) throw DomainError("integral_from_zero: x must be non-negative");
    if (!is_atomic()) return series().integral_from_zero(x);
    double s = 0.0;
    for (const Atom& a : atoms()) {
      if (!(a.p > -1.0)) throw DivergenceError("integral_from_zero: x^p with p <= -1 at 0");
      if (a.k == 0.0) {
        s += a.c * std::pow(x, a.p + 1.0) / (a.p + 1.0);
      } else {
        s += a.c * std::pow(a.k, -a.p - 1.0) * special::lower_incomplete_gamma(a.p + 1.0, a.k * x);
      }
    }
    return s;
  }

  /// integral_x^inf of the coefficient; requires exponential decay.
  double integral_to_infinity(double x) const {
    if (!decays()) throw DivergenceError("integral_to_infinity: coefficient does not decay");
    double s = 0.0;
    for (const Atom& a : atoms()) {
      if (x == 0.0 && !(a.p > -1.0)) throw DivergenceError("integral_to_infinity: x^p with p <= -1 at 0");
      s += a.c * std::pow(a.k, -a.p - 1.0) * special::upper_incomplete_gamma(a.p + 1.0, a.k * x);
    }
    return s;
  }

  CoefficientFunction scaled(double factor) const {
    if (is_atomic()) {
      std::vector<Atom> a = atoms();
      for (Atom& atom : a) atom.c *= factor;
      return CoefficientFunction(std::move(a));
    }
    throw ConfigurationError("scaling a tabulated coefficient is not supported");
  }

  friend CoefficientFunction operator+(const CoefficientFunction& a, const CoefficientFunction& b) {
    std::vector<Atom> all = a.atoms();
    all.insert(all.end(), b.atoms().begin(), b.atoms().end());
    return CoefficientFunction(std::move(all));
  }

  friend bool operator==(const CoefficientFunction& a, const CoefficientFunction& b) {
    if (a.is_atomic() != b.is_atomic()) return false;
    if (a.is_atomic()) return a.atoms() == b.atoms();
    return a.series().x_max() == b.series().x_max() &&
           a.series().coefficients() == b.series().coefficients();
  }

 private:
  std::variant<std::vector<Atom>, ChebyshevSeries> repr_ = std::vector<Atom>{};
};

}  // namespace dfforge
