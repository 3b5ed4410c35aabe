#include <gtest/gtest.h>

#include "cfi/cfi.hpp"

using namespace cfi;

TEST(SlackRule, ScalesWithRightHandSide) {
  EXPECT_TRUE(slack_passes(-5e-8, 0.1));
  EXPECT_FALSE(slack_passes(-2e-7, 0.1));
  EXPECT_TRUE(slack_passes(-5e-7, 10.0));
  const auto r = InequalityReport::make(InequalityReport::Name::LSI, INFINITY, INFINITY, 0.25, "x");
  EXPECT_EQ(r.slack, 0.0);
  EXPECT_TRUE(r.passed);
  const auto bad = InequalityReport::make(InequalityReport::Name::LSI, NAN, 1.0, 0.25, "x");
  EXPECT_FALSE(bad.passed);
}

TEST(Poincare, EqualityAtHaarOnFirstMode) {
  const auto h = CircleMeasure::haar(16);
  const auto f = FourierSeries::from_modes(16, {{1, cplx(0.7, -0.3)}}, false);
  const auto r = verify_poincare(h, 0.5, f);
  EXPECT_NEAR(r.slack, 0.0, 1e-14);
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(verify_poincare(h, 0.51, f).passed);
}

TEST(Poincare, HoldsAtEquilibria) {
  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const double rho = 0.05 + 0.4 * (t % 5) / 4.0;
    const auto q = random_convex_potential(rng, 32, 6, 0.5, rho);
    ASSERT_TRUE(convexity_hypothesis(q, rho));
    const auto mu = solve_equilibrium(q).measure;
    for (int k = 0; k < 10; ++k) {
      const auto f = random_trig_polynomial(rng, 32, 1 + k, true);
      EXPECT_TRUE(verify_poincare(mu, rho, f).passed);
    }
  }
}

TEST(Poincare, HaarThresholdIsOneHalf) {
  const auto h = CircleMeasure::haar(16);
  std::vector<FourierSeries> fs;
  Rng rng(52);
  for (int k = 0; k < 10; ++k) fs.push_back(random_trig_polynomial(rng, 16, 1 + k, true));
  EXPECT_NEAR(max_passing_rho(h, fs, 0.45, 0.55, 1e-3), 0.5, 1.5e-3);
}

TEST(TransportFamily, HoldsAndOrders) {
  Rng rng(53);
  for (int t = 0; t < 15; ++t) {
    const double rho = 0.25;
    const auto q = random_convex_potential(rng, 32, 6, 0.5, rho);
    const auto mu = random_density(rng, 32, 6, 0.5);
    const auto rs = verify_transport_family(q, mu, rho);
    for (const auto& r : rs) EXPECT_TRUE(r.passed) << to_string(r.name) << " slack " << r.slack;
    EXPECT_LE(rs[2].rhs, rs[1].rhs + 1e-12);
    EXPECT_EQ(verify_transport(q, mu, rho).slack, rs[0].slack);
  }
}

TEST(TransportFamily, ZeroPotentialCosineRatioIsOneHalf) {
  const Potential q(FourierSeries::zero(64));
  const auto mu = CircleMeasure::from_density(FourierSeries::from_modes(64, {{0, 1.0}, {1, 0.2}}));
  const auto r = verify_transport(q, mu, 0.25);
  const double w2 = modified_wasserstein(mu, CircleMeasure::haar(64), 2.0).value;
  EXPECT_NEAR(r.rhs / (w2 * w2), 0.5, 1e-9);
  EXPECT_NEAR(r.lhs, 0.125 * w2 * w2, 1e-15);
}

TEST(PotentialFree, FirstHarmonicBreaksTheTenthChain) {
  const auto mu = CircleMeasure::from_density(FourierSeries::from_modes(32, {{0, 1.0}, {1, 0.05}}));
  const auto rs = verify_potential_free(mu, CircleMeasure::haar(32));
  EXPECT_TRUE(rs[0].passed);
  EXPECT_TRUE(rs[1].passed);
  EXPECT_NEAR(rs[1].slack, 0.0, 1e-15);
  EXPECT_LT(rs[2].slack, 0.0);
  EXPECT_NEAR(rs[2].rhs / rs[2].lhs, 4.0 * std::sqrt(2.0) / pi - 8.0 / (pi * pi), 1e-6);
}

TEST(HoudreKagan, ReportsPass) {
  Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    const auto phi = random_trig_polynomial(rng, 16, 1 + t % 8, true);
    for (int k = 1; k <= 5; ++k)
      for (const auto& r : verify_houdre_kagan(phi, k)) EXPECT_TRUE(r.passed);
  }
}

TEST(ScalarLemma, Oracles) {
  EXPECT_NEAR(scalar_lemma_margin(pi / 2 + 0.1, pi / 2), 8.3556232353090791e-6, 1e-15);
  EXPECT_NEAR(scalar_lemma_margin(0.4, 2.5), 1.0358868546459438, 1e-13);
  EXPECT_NEAR(scalar_lemma_margin_integral(0.4, 2.5), 1.0358868546459438, 1e-10);
  EXPECT_THROW(scalar_lemma_margin(0.0, 1.0), DomainError);
}

TEST(ScalarLemma, NonNegativeOnGrid) {
  const int n = 200;
  double worst = INFINITY;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) worst = std::min(worst, scalar_lemma_margin(pi * i / n, pi * j / n));
  EXPECT_GE(worst, -1e-12);
}

TEST(ScalarLemma, HFunction) {
  EXPECT_NEAR(h_function(pi / 2), 1.0, 1e-9);
  EXPECT_NEAR(h_function(1.0), 1.1249067062848372, 1e-8);
  EXPECT_NEAR(h_function(0.5), 1.7094639530483455, 1e-8);
  EXPECT_NEAR(h_function(2.0), 1.0662945890996258, 1e-8);
  EXPECT_GT(h_function(0.05), h_function(0.1));
  EXPECT_GT(h_function(0.02), 2.0 * h_function(0.05));
  EXPECT_GT(h_function(0.02), 30.0);
  EXPECT_NEAR(h_function(1.0), h_function(pi - 1.0), 1e-8);
  EXPECT_THROW(h_function(pi), DomainError);
}

TEST(ImprovedDelta, DefaultProfile) {
  const auto r = improved_delta(default_delta_profile(256));
  EXPECT_NEAR(r.delta, 0.170865, 5e-7);
  EXPECT_NEAR(r.improved_constant, (1.0 + r.delta) / 4.0, 0.0);
  EXPECT_GT(r.improved_constant, 0.25);
}

TEST(ImprovedDelta, RejectsBadProfiles) {
  auto g = default_delta_profile(64);
  auto odd = g;
  odd[5] += 0.1;
  EXPECT_THROW(improved_delta(odd), InvalidInput);
  auto low = g;
  low[16] = 0.9;
  low[48] = 0.9;
  EXPECT_THROW(improved_delta(low), InvalidInput);
  auto flat = g;
  flat[8] = flat[56] = 1.0;
  EXPECT_THROW(improved_delta(flat), InvalidInput);
  auto high = g;
  high[20] = high[44] = 3.0;
  EXPECT_THROW(improved_delta(high), InvalidInput);
  EXPECT_NO_THROW(improved_delta(high, 0, false));
  EXPECT_THROW(improved_delta(std::vector<double>(48, 2.0)), InvalidInput);
}

TEST(BrunnMinkowski, ConstantsAreExact) {
  const Potential q1(FourierSeries::from_modes(8, {{0, 0.3}}));
  const Potential q2(FourierSeries::from_modes(8, {{0, -0.5}}));
  const auto r = verify_brunn_minkowski(q1, q2, 0.25);
  EXPECT_NEAR(r.slack, 0.0, 1e-9);
  EXPECT_TRUE(r.passed);
}

TEST(BrunnMinkowski, EqualPotentialsGiveLowerInterpolant) {
  const Potential q(FourierSeries::from_modes(16, {{1, 0.1}, {2, cplx(0.0, 0.03)}}));
  const auto bm = brunn_minkowski_potential(q, q, 0.5);
  const auto v = q.series().real_samples(256);
  for (int j = 0; j < 256; ++j) EXPECT_LE(bm.tight_samples[j], v[j] + 1e-9);
  EXPECT_TRUE(verify_brunn_minkowski(q, q, 0.5).passed);
}

TEST(BrunnMinkowski, ShiftedCosines) {
  const Potential q1(FourierSeries::from_modes(16, {{1, 0.2}}));
  const Potential q2(FourierSeries::from_modes(16, {{1, std::polar(0.2, 1.0)}}));
  for (double a : {0.5, 1.0 / 3.0, 0.75}) EXPECT_TRUE(verify_brunn_minkowski(q1, q2, a).passed) << a;
  EXPECT_THROW(verify_brunn_minkowski(q1, q2, 1.5), DomainError);
  EXPECT_THROW(verify_brunn_minkowski(q1, q2, 1.0 / std::sqrt(2.0)), DomainError);
}

TEST(Sharpness, HarmonicFamilyAboveFloor) {
  const auto s = sharpness_scan(Potential(FourierSeries::zero(32)), MeasureFamily::HarmonicPerturbations, 40, 42, 32);
  EXPECT_EQ(s.evaluated, 40);
  EXPECT_GE(s.min_transport_ratio, 0.25);
  EXPECT_GE(s.min_lsi_ratio, 0.25);
  EXPECT_GE(s.min_standard_transport_ratio, s.min_transport_ratio - 1e-9);
  EXPECT_EQ(measure_family_from_string("bump-like"), MeasureFamily::BumpLike);
  EXPECT_THROW(measure_family_from_string("nope"), InvalidInput);
}

TEST(Hierarchy, LinearizationConvergesToPoincareSlack) {
  Rng rng(55);
  const auto q = random_convex_potential(rng, 32, 6, 0.4, 0.25);
  auto f = random_potential_series(rng, 32, 4, 0.2);
  f.set(0, 0.0);
  const auto a = lsi_linearization(q, f, 0.25, 0.02);
  const auto b = lsi_linearization(q, f, 0.25, 0.01);
  const double ea = std::abs(a.scaled - a.poincare_target);
  const double eb = std::abs(b.scaled - b.poincare_target);
  EXPECT_LT(eb, ea);
  EXPECT_NEAR(ea / eb, 2.0, 0.3);
}
