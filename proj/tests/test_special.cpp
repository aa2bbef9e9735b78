#include <gtest/gtest.h>

#include <cmath>

#include "dfforge/error.hpp"
#include "dfforge/special.hpp"
#include "test_util.hpp"

using namespace dfforge;
using testutil::rel;

TEST(Special, GammaAtHalf) { EXPECT_LT(rel(special::gamma(0.5), std::sqrt(M_PI)), 1e-15); }

TEST(Special, GammaHalfIntegers) {
  // Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
  double fact2n = 1.0, factn = 1.0;
  for (int n = 0; n <= 12; ++n) {
    if (n > 0) {
      fact2n *= (2.0 * n - 1.0) * (2.0 * n);
      factn *= n;
    }
    const double want = fact2n * std::sqrt(M_PI) / (std::pow(4.0, n) * factn);
    EXPECT_LT(rel(special::gamma(n + 0.5), want), 1e-14) << n;
  }
}

TEST(Special, GammaPoleThrows) {
  EXPECT_THROW(special::gamma(0.0), DomainError);
  EXPECT_THROW(special::gamma(-3.0), DomainError);
  EXPECT_EQ(special::rgamma(-2.0), 0.0);
}

TEST(Special, DoubleFactorial) {
  EXPECT_EQ(special::double_factorial(0), 1.0);
  EXPECT_EQ(special::double_factorial(6), 48.0);
  EXPECT_EQ(special::double_factorial(5), 15.0);
  EXPECT_EQ(special::double_factorial(-1), 1.0);
  EXPECT_EQ(special::double_factorial(2), 2.0);
}

TEST(Special, Beta) { EXPECT_LT(rel(special::beta(2.0, 0.5), 4.0 / 3.0), 1e-15); }

TEST(Special, IncompleteGamma) {
  for (double x : {0.1, 1.0, 7.5}) {
    EXPECT_LT(rel(special::lower_incomplete_gamma(1.0, x), 1.0 - std::exp(-x)), 1e-14);
    EXPECT_LT(rel(special::upper_incomplete_gamma(0.5, x), std::sqrt(M_PI) * std::erfc(std::sqrt(x))), 1e-13);
  }
}

TEST(Special, Hyp2f1Log) {
  for (double x : {-0.7, 0.2, 0.9}) {
    EXPECT_LT(rel(special::hyp2f1(1.0, 1.0, 2.0, x), -std::log1p(-x) / x), 1e-13) << x;
  }
}

TEST(Special, Hyp2f1Terminating) {
  const double b = 1.3, c = 2.7, x = 3.0;
  const double want = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
  EXPECT_LT(rel(special::hyp2f1(-2.0, b, c, x), want), 1e-14);
}

TEST(Special, Hyp2f1OutsideDiscThrows) {
  EXPECT_THROW(special::hyp2f1(0.5, 0.5, 1.5, 1.5), DomainError);
  EXPECT_THROW(special::hyp2f1(0.5, 0.5, -1.0, 0.5), UnsupportedParameterError);
}

TEST(Special, HFunctionVanishesBeyondOne) {
  EXPECT_EQ(special::hfunction(1.0, 0.5, 1.5, 0.5, 2.0), 0.0);
}

TEST(Special, HFunctionUnsupportedCases) {
  EXPECT_THROW(special::hfunction(-1.5, 0.5, 1.5, 0.5, 0.5), UnsupportedParameterError);
  EXPECT_THROW(special::hfunction(1.0, 0.5, 1.5, 0.5, 1.0), UnsupportedParameterError);
}

TEST(Special, HFunctionBelowOneMatchesPowerLaw) {
  // H(n, 1/2, c, 1/2; x) = Gamma(n + 1/2) x^n (1 - x)^{c - n - 1} / (Gamma(c - n) Gamma(n + 1/2)) for x < 1
  // from 2F1(a + b, b', a + d; x) with a + b = a + d.
  for (int n : {0, 1, 2}) {
    for (double c : {2.0, 3.25}) {
      for (double x : {0.1, 0.5, 0.8}) {
        const double want = std::pow(x, n) * std::pow(1.0 - x, c - n - 1.0) / std::tgamma(c - n);
        EXPECT_LT(rel(special::hfunction(n, 0.5, c, 0.5, x), want), 1e-12) << n << " " << c << " " << x;
      }
    }
  }
}
