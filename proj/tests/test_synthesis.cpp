#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "dfforge/models.hpp"
#include "dfforge/moments.hpp"
#include "dfforge/synthesis.hpp"
#include "dfforge/verify.hpp"
#include "test_util.hpp"

using namespace dfforge;
using testutil::rel;

namespace {

PotentialConvention bounded() { return {ConventionKind::RelativeBounded, 0.0}; }
PotentialConvention unbounded() { return {ConventionKind::UnboundedRising, 0.0}; }

DensityTerm term(DensityFamily f, int n, double beta, std::vector<Atom> atoms) {
  DensityTerm t;
  t.family = f;
  t.n = n;
  t.beta = beta;
  t.coeff = CoefficientFunction(std::move(atoms));
  return t;
}

DensityTerm pure(int n, std::vector<Atom> atoms) { return term(DensityFamily::PureRadial, n, 1.0, std::move(atoms)); }
DensityTerm scaled(int n, std::vector<Atom> atoms) { return term(DensityFamily::ScaledRadial, n, 1.0, std::move(atoms)); }

EvenDF make(std::vector<DensityTerm> terms, Variant v, PotentialConvention c, std::optional<double> ra = {}) {
  return synthesize(SynthesisRequest{DensityExpansion(std::move(terms), ra), c, v, {}});
}

}  // namespace

TEST(SynthesizeBounded, SquareDensity) {
  const auto df = make({pure(0, {{1.0, 2.0, 0.0}})}, Variant::EpsilonForm, bounded());
  for (double e : {0.01, 0.3, 1.0}) {
    const double want = 4.0 * std::pow(2.0 * M_PI, -1.5) / std::sqrt(M_PI) * std::sqrt(e);
    EXPECT_LT(rel(df(e, 0.0), want), 1e-13);
    EXPECT_LT(rel(df(e, 0.7), want), 1e-13);
  }
}

TEST(SynthesizeBounded, LyndenBellClosedForm) {
  for (double a : {0.0, 0.5, 2.0}) {
    const auto b = lyndenbell_bundle({a, 1.0 / (4.0 * M_PI)});
    const auto df = b.synthesize();
    testutil::Rng rng(17);
    for (int i = 0; i < 20; ++i) {
      const double e = rng.uniform(0.0, 1.0), l = rng.uniform(-1.5, 1.5);
      const double want = lyndenbell_closed_df(a, e, l);
      EXPECT_LT(std::abs(df(e, l) - want), 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(SynthesizeBounded, CutoffBelowZero) {
  const auto df = lyndenbell_bundle({0.5}).synthesize();
  EXPECT_EQ(df(-0.5, 0.3), 0.0);
  EXPECT_EQ(df(0.0, 0.3), 0.0);
}

TEST(SynthesizeBounded, BoundaryConditionViolation) {
  try {
    make({pure(1, {{1.0, 1.0, 0.0}})}, Variant::EpsilonForm, bounded());
    FAIL() << "expected a synthesis error";
  } catch (const SynthesisError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("j=1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("n=1"), std::string::npos) << msg;
  }
}

TEST(SynthesizeBounded, InfiniteBoundaryDerivative) {
  EXPECT_THROW(make({pure(0, {{1.0, 0.5, 0.0}})}, Variant::EpsilonForm, bounded()), SynthesisError);
}

TEST(SynthesizeBounded, NonzeroBoundaryTermIsKept) {
  // rho = psi: rho'(0) = 1 enters as eps^{-1/2} / (2 pi)^{3/2} / Gamma(1/2)
  const auto df = make({pure(0, {{1.0, 1.0, 0.0}})}, Variant::EpsilonForm, bounded());
  const double e = 0.4;
  EXPECT_LT(rel(df(e, 0.0), std::pow(2.0 * M_PI, -1.5) / std::sqrt(M_PI) / std::sqrt(e)), 1e-14);
  EXPECT_LT(rel(recover_density(df, 0.6, 0.8).value, 0.6), 1e-9);
}

TEST(SynthesizeBounded, ConventionAndFamilyChecks) {
  EXPECT_THROW(make({pure(0, {{1.0, 2.0, 0.0}})}, Variant::EpsilonForm, unbounded()), ConfigurationError);
  EXPECT_THROW(make({scaled(0, {{1.0, 2.0, 0.0}})}, Variant::EpsilonForm, bounded(), 1.0), ConfigurationError);
  EXPECT_THROW(make({term(DensityFamily::PureRadial, 1, 0.5, {{1.0, 3.0, 0.0}})}, Variant::EpsilonForm, bounded()),
               ConfigurationError);
}

TEST(SynthesizeQ, PowerDensity) {
  const double p = 3.3;
  const auto df = make({scaled(0, {{1.0, p, 0.0}})}, Variant::QForm, bounded(), 1.0);
  for (double e : {0.2, 0.9}) {
    for (double l : {0.0, 0.3}) {
      const double Q = e - 0.5 * l * l;
      const double want = std::tgamma(p + 1.0) * std::pow(2.0 * M_PI, -1.5) / std::tgamma(p - 0.5) * std::pow(Q, p - 1.5);
      EXPECT_LT(rel(df(e, l), want), 1e-12);
    }
  }
  EXPECT_EQ(df(0.5, 1.0), 0.0);  // Q = 0
  EXPECT_EQ(df(0.5, 2.0), 0.0);  // Q < 0
}

TEST(SynthesizeQ, ApproachesEpsilonForm) {
  const std::vector<Atom> c{{1.0, 3.0, 0.5}, {0.5, 4.5, 0.0}};
  const auto eps = make({pure(1, c)}, Variant::EpsilonForm, bounded());
  double prev = 1e300;
  for (double ra : {1e2, 1e4, 1e6}) {
    const auto q = make({scaled(1, c)}, Variant::QForm, bounded(), ra);
    const double err = rel(q(0.5, 0.1), eps(0.5, 0.1));
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(SynthesizeGeneral, UnitBetaMatchesEpsilonForm) {
  const std::vector<DensityTerm> terms{pure(0, {{1.0, 2.0, 0.0}}), pure(1, {{0.3, 3.5, 1.0}}), pure(2, {{0.1, 5.0, 0.0}})};
  const auto a = make(terms, Variant::EpsilonForm, bounded());
  const auto b = make(terms, Variant::GeneralForm, bounded());
  testutil::Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    const double e = rng.uniform(0, 1), l = rng.uniform(-1, 1);
    EXPECT_LT(rel(b(e, l), a(e, l)), 1e-12);
  }
}

TEST(SynthesizeGeneral, FractionalOrder) {
  const auto df = make({term(DensityFamily::PureRadial, 1, 0.75, {{1.0, 4.0, 0.0}})}, Variant::GeneralForm, bounded());
  ASSERT_EQ(df.components().size(), 1u);
  const auto& c = df.components()[0];
  EXPECT_EQ(c.derivative_order, 3);  // a = 2
  EXPECT_EQ(c.alpha, 0.25);
  EXPECT_EQ(c.lz_power, 1.5);
  for (double R : {0.3, 1.2}) {
    EXPECT_LT(rel(recover_density(df, 0.8, R).value, std::pow(0.8, 4.0) * std::pow(R, 1.5)), 1e-9);
  }
}

TEST(SynthesizeGeneral, MixedFamiliesRoundTrip) {
  const std::vector<DensityTerm> terms{term(DensityFamily::PureRadial, 1, 0.4, {{1.0, 3.0, 0.2}}),
                                       term(DensityFamily::ScaledRadial, 2, 0.6, {{0.5, 4.0, 0.0}})};
  const DensityExpansion ex(terms, 1.3);
  const auto df = synthesize(SynthesisRequest{ex, bounded(), Variant::GeneralForm, {}});
  for (double R : {0.2, 1.0, 1.8}) {
    EXPECT_LT(rel(recover_density(df, 0.7, R).value, eval_density(ex, 0.7, R)), 1e-9);
  }
  // The Q branch vanishes where Q < 0.
  EXPECT_EQ(df.component_value(df.components()[1], 0.1, 1.0), 0.0);
}

TEST(SynthesizeGeneral, RejectsNonIntegrableLzPower) {
  EXPECT_THROW(make({term(DensityFamily::PureRadial, 1, -0.6, {{1.0, 3.0, 0.0}})}, Variant::GeneralForm, bounded()),
               AdmissibilityError);
}

TEST(SynthesizeUnbounded, SingleExponential) {
  const double a = 1.7;
  const auto df = make({pure(0, {{1.0, 0.0, a}})}, Variant::UnboundedEpsilon, unbounded());
  for (double E : {0.1, 1.0, 4.0}) {
    EXPECT_LT(rel(df(E, 0.3), std::pow(a / (2.0 * M_PI), 1.5) * std::exp(-a * E)), 1e-10);
  }
  EXPECT_EQ(df(-1.0, 0.3), 0.0);
}

TEST(SynthesizeUnbounded, PolynomialDiverges) {
  EXPECT_THROW(make({pure(0, {{1.0, 2.0, 0.0}})}, Variant::UnboundedEpsilon, unbounded()), DivergenceError);
}

TEST(SynthesizeUnbounded, QFormRoundTrip) {
  const DensityExpansion ex({scaled(0, {{1.0, 0.0, 2.0}}), scaled(1, {{0.7, 1.0, 3.0}})}, 0.8);
  const auto df = synthesize(SynthesisRequest{ex, unbounded(), Variant::UnboundedQ, {}});
  for (double R : {0.3, 1.5}) {
    EXPECT_LT(rel(recover_density(df, 0.4, R).value, eval_density(ex, 0.4, R)), 1e-9);
  }
}

TEST(SynthesizeUnbounded, GeneralRoundTrip) {
  const DensityExpansion ex({term(DensityFamily::PureRadial, 1, 1.3, {{1.0, 0.5, 2.0}})});
  const auto df = synthesize(SynthesisRequest{ex, unbounded(), Variant::UnboundedGeneral, {}});
  for (double R : {0.3, 1.5}) {
    EXPECT_LT(rel(recover_density(df, 0.4, R).value, eval_density(ex, 0.4, R)), 1e-9);
  }
}

TEST(Synthesis, ParityIsExact) {
  const auto df = binney_bundle({1.0, 0.9}).synthesize();
  const auto odd = make_odd(df);
  testutil::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const double e = rng.uniform(0, 5), l = rng.uniform(0, 3);
    EXPECT_EQ(df(e, l), df(e, -l));
    EXPECT_EQ(odd(e, l), -odd(e, -l));
  }
  EXPECT_EQ(odd(1.0, 0.0), 0.0);
}

TEST(Synthesis, Linearity) {
  const DensityExpansion a({pure(0, {{1.0, 2.0, 0.0}}), pure(1, {{0.4, 3.0, 1.0}})});
  const DensityExpansion b({pure(0, {{0.3, 2.5, 0.5}}), pure(2, {{1.1, 4.0, 0.0}})});
  auto syn = [](const DensityExpansion& e) { return synthesize(SynthesisRequest{e, bounded(), Variant::EpsilonForm, {}}); };
  const auto fa = syn(a), fb = syn(b), fab = syn(a + b);
  testutil::Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const double e = rng.uniform(0, 1), l = rng.uniform(-1, 1);
    EXPECT_LT(std::abs(fab(e, l) - (fa(e, l) + fb(e, l))), 1e-12 * (std::abs(fa(e, l)) + std::abs(fb(e, l))));
  }
}

TEST(Synthesis, DefaultVariant) {
  EXPECT_EQ(default_variant(lyndenbell_expansion({}), bounded()), Variant::EpsilonForm);
  EXPECT_EQ(default_variant(binney_expansion({}), unbounded()), Variant::UnboundedEpsilon);
  EXPECT_EQ(default_variant(DensityExpansion({scaled(0, {{1, 2, 0}})}, 1.0), bounded()), Variant::QForm);
  EXPECT_EQ(variant_from_string("unbounded-q"), Variant::UnboundedQ);
  EXPECT_THROW(variant_from_string("nope"), ConfigurationError);
}

TEST(Dejonghe, VanishesBelowParabola) {
  EXPECT_EQ(dejonghe_powerlaw_df(2.5, 0, 0.4, 1.0), 0.0);
  EXPECT_EQ(dejonghe_powerlaw_df(3.5, 1, 0.5, 1.0), 0.0);
}

TEST(Dejonghe, CentralValue) {
  const double want = std::tgamma(3.5) / (std::pow(2.0, 1.5) * M_PI * std::sqrt(M_PI) * 1.0);
  EXPECT_LT(rel(dejonghe_powerlaw_df(2.5, 0, 1.0, 0.0), want), 1e-15);
}

TEST(Dejonghe, Preconditions) {
  EXPECT_THROW(dejonghe_powerlaw_df(2.0, 1, 1.0, 0.0), UnsupportedParameterError);
  EXPECT_THROW(dejonghe_powerlaw_df(1.0, 0, 1.0, 0.0), UnsupportedParameterError);
}

TEST(Dejonghe, MatchesQSynthesis) {
  for (auto [p, n] : {std::pair{2.5, 0}, {3.5, 1}, {4.0, 1}, {5.2, 2}}) {
    const auto b = fricke_powerlaw_bundle(p, n);
    const auto df = b.synthesize();
    for (int i = 1; i <= 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double e = 0.1 * i, l = -1.3 + 2.6 * j / 9.0;
        const double want = dejonghe_powerlaw_df(p, n, e, l);
        EXPECT_LE(std::abs(df(e, l) - want), 1e-8 * std::abs(want) + 1e-300) << p << " " << n << " " << e << " " << l;
      }
    }
  }
}

TEST(Dejonghe, HFunctionRoute) {
  for (auto [p, n] : {std::pair{2.5, 0}, {3.5, 1}, {4.0, 1}}) {
    for (double e : {0.3, 0.8}) {
      for (double l : {0.0, 0.5, 1.0, 1.4}) {
        if (l * l == 2.0 * e) continue;
        const double want = dejonghe_powerlaw_df(p, n, e, l);
        EXPECT_LE(std::abs(dejonghe_h_df(p, n, 0.5, e, l) - want), 1e-12 * std::abs(want) + 1e-300);
      }
    }
  }
}

TEST(ExpPair, DensityWithoutAngularCutoff) {
  const auto pr = exp_pair(0, 1.5, 0.0, 2.0, Parity::Even);
  EXPECT_LT(rel(pr.closed_form(0.7, 1.3), 4.0 * M_PI * 1.3 * std::exp(-1.5 * 0.7) / (1.5 * 1.5)), 1e-15);
}

TEST(ExpPair, DoubleFactorialFactor) {
  const auto a = exp_pair(1, 1.0, 0.0, 1.0, Parity::Even);
  // 4 pi (2)!! R^3 e^{-Phi} / (alpha alpha^2)
  EXPECT_LT(rel(a.closed_form(0.0, 1.0), 4.0 * M_PI * 2.0), 1e-15);
  EXPECT_THROW(exp_pair(0, 0.0, 1.0, 1.0, Parity::Even), DomainError);
}

TEST(ExpPair, VelocityQuadratureRecovers) {
  const PotentialConvention c = unbounded();
  for (int n : {0, 1, 2}) {
    for (Parity par : {Parity::Even, Parity::Odd}) {
      const auto pr = exp_pair(n, 1.3, 0.7, 1.1, par);
      const double phi = 1.0, R = 1.0;
      const auto f = [&](double E, double l) { return pr(E, l); };
      const double got = par == Parity::Even ? recover_density_generic(f, c, phi, R, 40.0 / pr.alpha()).value
                                             : recover_rotation_generic(f, c, phi, R, 40.0 / pr.alpha()).value;
      EXPECT_LT(rel(got, pr.velocity_moment(phi, R)), 1e-6) << n;
    }
  }
}

TEST(BinneyOdd, Antisymmetric) {
  for (int n : {0, 1, 2, 3}) {
    const BinneyOddParams p{n, 0.8, 1.2, 1.0, 0.9, 1.0};
    for (double l : {0.1, 0.7, 2.0}) EXPECT_EQ(binney_odd_df(p, 0.9, l), -binney_odd_df(p, 0.9, -l));
    EXPECT_EQ(binney_odd_df(p, 0.9, 0.0), 0.0);
    EXPECT_EQ(binney_odd_df(p, -0.1, 0.5), 0.0);
  }
}

TEST(BinneyOdd, RecoversRotationLaw) {
  const BinneyParams bp{1.0, 0.9, 1.0};
  for (int n : {0, 1, 2}) {
    const BinneyOddParams p{n, 1.0, 1.0, bp.v0, bp.q, bp.G};
    const double R = 1.0, z = 0.5;
    const double phi = binney_potential(bp, R, z);
    const double got = recover_rotation_generic([&](double E, double l) { return binney_odd_df(p, E, l); }, unbounded(),
                                                phi, R, 20.0)
                           .value;
    const double want = binney_density(bp, R, z) * R * mean_vphi_law(n, 1.0, 1.0, R);
    EXPECT_LT(rel(got, want), 1e-5) << n;
  }
}
