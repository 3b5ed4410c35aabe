#include <gtest/gtest.h>

#include <numbers>

#include "cfi/cfi.hpp"

using namespace cfi;

namespace {

CircleMeasure cosine_density(double eps, int n = 64) {
  return CircleMeasure::from_density(FourierSeries::from_modes(n, {{0, 1.0}, {1, 0.5 * eps}}));
}

} // namespace

TEST(CircleDistance, Basics) {
  EXPECT_NEAR(circle_distance(0.1, two_pi - 0.1), 0.2, 1e-15);
  EXPECT_NEAR(circle_distance(0.0, pi), pi, 1e-15);
  EXPECT_EQ(circle_distance(1.0, 1.0 + 2 * two_pi), 0.0);
}

TEST(ModifiedWasserstein, DiracAgainstHaar) {
  const auto d = CircleMeasure::dirac(0.0);
  const auto h = CircleMeasure::haar(64);
  EXPECT_NEAR(modified_wasserstein(d, h, 2.0).value, std::sqrt(2.0 * pi * pi * pi / 3.0), 1e-14);
  EXPECT_NEAR(modified_wasserstein(h, d, 1.0).value, pi * pi, 1e-13);
  EXPECT_EQ(modified_wasserstein(d, CircleMeasure::dirac(0.0), 2.0).value, 0.0);
  EXPECT_TRUE(std::isinf(modified_wasserstein(d, CircleMeasure::dirac(1.0), 2.0).value));
  EXPECT_THROW(modified_wasserstein(d, cosine_density(0.5), 2.0), UnsupportedMeasure);
  EXPECT_THROW(modified_wasserstein(h, h, 0.5), DomainError);
}

TEST(ModifiedWasserstein, CosineAgainstHaarClosedForm) {
  for (double eps : {0.1, 0.5, 0.9}) {
    const auto mu = cosine_density(eps, 256);
    const auto h = CircleMeasure::haar(256);
    const double w2 = modified_wasserstein(mu, h, 2.0).value;
    EXPECT_NEAR(w2 * w2, eps * eps / 2.0, 1e-8);
    EXPECT_NEAR(modified_wasserstein(mu, h, 1.0).value, 2.0 * eps / pi, 5e-6 * eps);
  }
  EXPECT_NEAR(std::pow(modified_wasserstein(cosine_density(0.5, 512), CircleMeasure::haar(512), 2.0).value, 2), 0.125,
              1e-9);
}

TEST(ModifiedWasserstein, CutIndependence) {
  Rng rng(31);
  std::uniform_real_distribution<double> unit(0.0, two_pi);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = random_density(rng, 32, 6, 0.5);
    const auto nu = random_density(rng, 32, 6, 0.5);
    const int m = min_lift_grid;
    double first = -1.0;
    for (int k = 0; k < 5; ++k) {
      const double u = unit(rng);
      const double v = admissible_partner(mu, u, nu);
      EXPECT_NEAR(lift(mu, u, m).mean(), lift(nu, v, m).mean(), 1e-10);
      const double w = lift_wasserstein(LiftedMeasure(mu, u, m), LiftedMeasure(nu, v, m), 2.0).value;
      if (first < 0) first = w;
      EXPECT_NEAR(w, first, 1e-7);
    }
    EXPECT_NEAR(modified_wasserstein(mu, nu, 2.0).value, first, 1e-7);
  }
}

TEST(ModifiedWasserstein, MetricProperties) {
  Rng rng(32);
  int strict = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_density(rng, 32, 6, 0.5);
    const auto b = random_density(rng, 32, 6, 0.5);
    const auto c = random_density(rng, 32, 6, 0.5);
    for (double p : {1.0, 2.0}) {
      const double ab = modified_wasserstein(a, b, p).value;
      const double bc = modified_wasserstein(b, c, p).value;
      const double ac = modified_wasserstein(a, c, p).value;
      EXPECT_LE(ac, ab + bc + 1e-8);
      EXPECT_NEAR(ab, modified_wasserstein(b, a, p).value, 1e-7);
      const double geodesic = circle_wasserstein(a, b, p);
      EXPECT_LE(geodesic, ab + 1e-8);
      if (p == 2.0 && geodesic < ab - 1e-6) ++strict;
    }
    EXPECT_NEAR(modified_wasserstein(a, a, 2.0).value, 0.0, 1e-10);
  }
  EXPECT_GT(strict, 0);
}

TEST(ModifiedWasserstein, AgreesWithGeodesicAgainstHaar) {
  Rng rng(33);
  const auto h = CircleMeasure::haar(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_density(rng, 32, 6, 0.5);
    EXPECT_NEAR(modified_wasserstein(mu, h, 2.0).value, circle_wasserstein(mu, h, 2.0), 1e-6);
    EXPECT_LE(circle_wasserstein(mu, h, 1.0), modified_wasserstein(mu, h, 1.0).value + 1e-8);
  }
}

TEST(ModifiedWasserstein, MapIsMonotone) {
  Rng rng(34);
  const auto mu = random_density(rng, 16, 5, 0.5);
  const auto nu = random_density(rng, 16, 5, 0.5);
  const auto r = modified_wasserstein(mu, nu, 2.0, true);
  ASSERT_TRUE(r.map.has_value());
  for (std::size_t j = 1; j < r.map->image.size(); ++j) EXPECT_GE(r.map->image[j], r.map->image[j - 1]);
  EXPECT_NEAR(r.map->cost(2.0), r.value, 1e-14);
}

TEST(HopfLax, AgainstBruteForce) {
  const auto f = FourierSeries::from_modes(8, {{1, 0.15}});
  const auto u = hopf_lax_at(f, 0.1, 0.5, {0.0, 1.0, 2.0});
  EXPECT_NEAR(u[0], 0.29864865531800566, 1e-12);
  EXPECT_NEAR(u[1], 0.1459409670433022, 1e-12);
  EXPECT_NEAR(u[2], -0.14165669980012416, 1e-12);
}

TEST(HopfLax, BoundedByInitialDatum) {
  Rng rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_potential_series(rng, 16, 6, 0.5);
    const auto v = f.real_samples(64);
    const auto u = hopf_lax(f, 0.0, 0.3, 64);
    const auto fine = f.real_samples(8192);
    const auto lo = *std::min_element(fine.begin(), fine.end());
    for (int j = 0; j < 64; ++j) {
      EXPECT_LE(u[j], v[j] + 1e-14);
      EXPECT_GE(u[j], lo - 1e-12);
    }
  }
  EXPECT_THROW(hopf_lax(FourierSeries::zero(2), 0.0, 0.0), DomainError);
}

TEST(HopfLax, HamiltonJacobiSecondOrder) {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_potential_series(rng, 8, 3, 0.2);
    const double coarse = hopf_lax_pde_residual(f, 0.1, 0.5, 64);
    const double fine = hopf_lax_pde_residual(f, 0.1, 0.5, 128);
    EXPECT_LT(fine, 1e-3);
    EXPECT_GT(coarse / fine, 3.5) << coarse << " " << fine;
  }
}

TEST(HopfLax, SmallTimeExpansion) {
  const auto f = FourierSeries::from_modes(8, {{1, 0.3}, {3, cplx(0.0, 0.1)}});
  const double a = hopf_lax_expansion_residual(f, 0.2, 0.02, 256);
  const double b = hopf_lax_expansion_residual(f, 0.2, 0.01, 256);
  EXPECT_LT(b, 1e-5);
  EXPECT_GT(a / b, 7.0);
  EXPECT_LT(a / b, 9.0);
}

TEST(DualCertificates, BelowDistances) {
  Rng rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = random_density(rng, 32, 6, 0.5);
    const auto nu = random_density(rng, 32, 6, 0.5);
    auto f = random_potential_series(rng, 32, 4, 1.0);
    const auto d = f.derivative().real_samples(256);
    double lip = 0.0;
    for (double v : d) lip = std::max(lip, std::abs(v));
    f *= 0.9 / lip;
    EXPECT_LE(w1_dual_certificate(mu, nu, f, 0.0), modified_wasserstein(mu, nu, 1.0).value + 1e-9);
    const double w2 = modified_wasserstein(mu, nu, 2.0).value;
    EXPECT_LE(w2_dual_certificate(mu, nu, f, 0.0), w2 * w2 + 1e-9);
  }
  const auto big = FourierSeries::from_modes(4, {{1, 2.0}});
  EXPECT_THROW(w1_dual_certificate(CircleMeasure::haar(4), CircleMeasure::haar(4), big, 0.0), CertificateRejected);
}

TEST(ModifiedWasserstein, OrderOneGapAgainstHaar) {
  const auto mu = CircleMeasure::from_density(FourierSeries::from_modes(16, {{0, 1.0}, {1, 0.3}, {2, cplx(0.0, -0.15)}}));
  const auto h = CircleMeasure::haar(16);
  EXPECT_NEAR(circle_wasserstein(mu, h, 1.0), 0.3819718634, 2e-6);
  EXPECT_NEAR(modified_wasserstein(mu, h, 1.0).value, 0.3931126400, 1e-9);
}
