#include <gtest/gtest.h>

#include <cmath>

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

EvenDF single(DensityFamily fam, int n, std::vector<Atom> atoms, PotentialConvention c, Variant v,
              std::optional<double> ra = {}) {
  DensityTerm t;
  t.family = fam;
  t.n = n;
  t.coeff = CoefficientFunction(std::move(atoms));
  return synthesize(SynthesisRequest{DensityExpansion({t}, ra), c, v, {}});
}

}  // namespace

TEST(RecoverDensity, SquareCoefficient) {
  const auto df = single(DensityFamily::PureRadial, 0, {{1.0, 2.0, 0.0}}, bounded(), Variant::EpsilonForm);
  EXPECT_LT(rel(recover_density(df, 1.0, 0.7).value, 1.0), 1e-8);
}

TEST(RecoverDensity, EmptyDF) {
  const auto df = synthesize(SynthesisRequest{DensityExpansion{}, bounded(), Variant::EpsilonForm, {}});
  EXPECT_EQ(df(0.5, 0.1), 0.0);
  EXPECT_EQ(recover_density(df, 0.5, 1.0).value, 0.0);
}

TEST(RecoverDensity, Binney) {
  const BinneyParams p{1.0, 0.8, 1.0};
  const auto df = binney_bundle(p).synthesize();
  const double R = 1.0, z = 0.5;
  EXPECT_LT(rel(recover_density(df, binney_potential(p, R, z), R).value, binney_density(p, R, z)), 1e-6);
}

TEST(RecoverDensity, RejectsOutsidePoints) {
  const auto df = single(DensityFamily::PureRadial, 0, {{1.0, 2.0, 0.0}}, bounded(), Variant::EpsilonForm);
  EXPECT_THROW(recover_density(df, -0.1, 1.0), DomainError);
  EXPECT_THROW(recover_density(df, 0.5, -1.0), DomainError);
}

TEST(RecoverDensity, GenericMatchesComponentRoute) {
  const auto b = binney_bundle({1.0, 0.9});
  const auto df = b.synthesize();
  const double phi = binney_potential({1.0, 0.9}, 0.8, 0.4);
  const double a = recover_density(df, phi, 0.8).value;
  const double g = recover_density_generic(df, unbounded(), phi, 0.8, 40.0 / df.decay_rate()).value;
  EXPECT_LT(rel(g, a), 1e-9);
  EXPECT_THROW(recover_density_generic(df, unbounded(), phi, 0.8), ConfigurationError);

  const auto lb = lyndenbell_bundle({0.5}).synthesize();
  EXPECT_LT(rel(recover_density_generic(lb, bounded(), 0.6, 0.9).value, recover_density(lb, 0.6, 0.9).value),
            1e-9);
}

TEST(RecoverRotation, OddPartOfSquareDensity) {
  // odd f = sgn(L) c sqrt(eps): rho R <v> = 4 pi R c psi^{5/2} B(3/2, 2)
  const auto even = single(DensityFamily::PureRadial, 0, {{1.0, 2.0, 0.0}}, bounded(), Variant::EpsilonForm);
  const double c = 4.0 * std::pow(2.0 * M_PI, -1.5) / std::sqrt(M_PI);
  const double psi = 0.7, R = 1.2;
  const double want = 4.0 * M_PI * R * c * std::pow(psi, 2.5) * 4.0 / 15.0;
  EXPECT_LT(rel(recover_rotation(make_odd(even), psi, R).value, want), 1e-9);
}

TEST(RecoverRotation, OddExponential) {
  const double a = 1.4;
  const auto even = single(DensityFamily::PureRadial, 0, {{1.0, 0.0, a}}, unbounded(), Variant::UnboundedEpsilon);
  const double c = std::pow(a / (2.0 * M_PI), 1.5);
  const double phi = 0.5, R = 0.9;
  const double want = 4.0 * M_PI * R * c * std::exp(-a * phi) / (a * a);
  EXPECT_LT(rel(recover_rotation(make_odd(even), phi, R).value, want), 1e-9);
  EXPECT_LT(rel(recover_rotation_generic(make_odd(even), unbounded(), phi, R, 40.0 / a).value, want), 1e-9);
}

TEST(RecoverRotation, BinneyOddLowestIndex) {
  const BinneyParams bp{1.0, 0.9, 1.0};
  const auto f = binney_odd_factory(bp, 0, 1.0, 1.0);
  const double phi = binney_potential(bp, 1.0, 0.0);
  const double got = recover_rotation_generic(f, unbounded(), phi, 1.0, 20.0).value;
  EXPECT_LT(rel(got, binney_density(bp, 1.0, 0.0) * mean_vphi_law(0, 1.0, 1.0, 1.0)), 1e-5);
}

TEST(Envelope, HarmonicWell) {
  // room = E - R^2/2 gives max R^2 (2E - R^2) = E^2 at R^2 = E
  for (double E : {0.1, 1.0, 7.0}) {
    EXPECT_LT(rel(lz_envelope([&](double R) { return E - 0.5 * R * R; }), E), 1e-12);
  }
  EXPECT_EQ(lz_envelope([](double) { return -1.0; }), 0.0);
}

TEST(Envelope, MatchesDenseSampling) {
  const LyndenBellParams p{0.5};
  const double eps = 0.3;
  auto room = [&](double R) { return lyndenbell_psi(p, R, 0.0) - eps; };
  double best = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    const double R = 20.0 * i / 200000.0;
    const double k = room(R);
    if (k > 0) best = std::max(best, R * std::sqrt(2.0 * k));
  }
  EXPECT_LT(rel(lz_envelope(room), best), 1e-8);
}

TEST(Positivity, PositiveFunction) {
  const auto r = positivity_scan([](double e, double l) { return e + l * l; }, GridSpec{0.0, 1.0, 11, -1.0, 1.0, 5});
  EXPECT_TRUE(r.nonnegative());
  EXPECT_EQ(r.points, 55u);
  EXPECT_EQ(r.min_value, 0.0);
  EXPECT_EQ(r.max_abs, 2.0);
  EXPECT_EQ(r.tol_neg, 2e-12);
}

TEST(Positivity, NegativeRegion) {
  const auto r = positivity_scan([](double e, double) { return e - 0.5; }, GridSpec{0.0, 1.0, 11, -1.0, 1.0, 3});
  EXPECT_FALSE(r.nonnegative());
  EXPECT_EQ(r.negative, 15u);
  EXPECT_LT(rel(r.negative_fraction(), 15.0 / 33.0), 1e-15);
  EXPECT_EQ(r.min_value, -0.5);
  EXPECT_EQ(r.argmin_energy, 0.0);
}

TEST(Positivity, RoundoffIsTolerated) {
  const auto r = positivity_scan([](double e, double) { return e == 0.0 ? -1e-14 : e; },
                                 GridSpec{0.0, 1.0, 11, -1.0, 1.0, 3});
  EXPECT_TRUE(r.nonnegative());
  EXPECT_LT(r.min_value, 0.0);
}

TEST(Positivity, EnvelopeLimitsTheScan) {
  // Negative only outside |L| <= sqrt(2 e).
  auto f = [](double e, double l) { return 2.0 * e - l * l + 1e-9; };
  const auto r = positivity_scan(f, 0.01, 1.0, 20, 21, [](double e) { return std::sqrt(2.0 * e); });
  EXPECT_TRUE(r.nonnegative());
  EXPECT_FALSE(positivity_scan(f, GridSpec{0.01, 1.0, 20, -1.5, 1.5, 21}).nonnegative());
  EXPECT_THROW(positivity_scan(f, GridSpec{0.0, 1.0, 0, -1.0, 1.0, 3}), ConfigurationError);
}
