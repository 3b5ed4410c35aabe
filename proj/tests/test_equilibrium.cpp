#include <gtest/gtest.h>

#include <numbers>

#include "cfi/cfi.hpp"

using namespace cfi;

TEST(Equilibrium, ZeroPotentialGivesHaar) {
  const auto r = solve_equilibrium(Potential(FourierSeries::zero(8)));
  EXPECT_TRUE(r.measure.is_haar());
  EXPECT_EQ(r.energy, 0.0);
  EXPECT_EQ(r.constant_C, 0.0);
  EXPECT_EQ(r.min_density, 1.0);
}

TEST(Equilibrium, CosinePotentialClosedForm) {
  for (double c : {0.05, 0.2, 0.45}) {
    const Potential q(FourierSeries::from_modes(16, {{1, c}}));
    const auto r = solve_equilibrium(q);
    const auto v = r.density.real_samples(64);
    for (int j = 0; j < 64; ++j) EXPECT_NEAR(v[j], 1.0 - 2.0 * c * std::cos(grid_angle(j, 64)), 1e-12);
    EXPECT_NEAR(r.energy, -c * c, 1e-15);
    EXPECT_NEAR(r.min_density, 1.0 - 2.0 * c, 1e-12);
  }
}

TEST(Equilibrium, ConstantShiftsEnergy) {
  const Potential q(FourierSeries::from_modes(4, {{0, 0.7}, {2, 0.1}}));
  EXPECT_NEAR(solve_equilibrium(q).energy, 0.7 - 0.5 * 2 * 2 * 0.01, 1e-15);
  EXPECT_NEAR(solve_equilibrium(q).constant_C, -0.7, 0.0);
}

TEST(Equilibrium, MassScaling) {
  const Potential q(FourierSeries::from_modes(4, {{1, 0.1}}));
  const auto r = solve_equilibrium(q, 2.0);
  EXPECT_NEAR(r.density[0].real(), 2.0, 0.0);
  EXPECT_NEAR(r.measure.density()[1].real(), -0.05, 1e-15);
  EXPECT_THROW(solve_equilibrium(q, -1.0), InvalidInput);
}

TEST(Equilibrium, RejectsPartialSupport) {
  const Potential q(FourierSeries::from_modes(4, {{1, 0.6}}));
  EXPECT_THROW(solve_equilibrium(q), NotFullSupport);
}

TEST(Equilibrium, RandomPotentialsSatisfyVariationalConditions) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto q = random_convex_potential(rng, 64, 10, 0.5, 0.1);
    const auto r = solve_equilibrium(q);
    EXPECT_LE(variational_residual(q, r.measure), 1e-12);
    EXPECT_NEAR(r.measure.integrate(q.series().derivative()), 0.0, 1e-12);
    EXPECT_NEAR(energy(q, r.measure), r.energy, 1e-12);
    const auto quad = equilibrium_density_by_quadrature(q);
    const auto spec = r.density.real_samples(q.grid());
    for (std::size_t j = 0; j < quad.size(); ++j) ASSERT_NEAR(quad[j], spec[j], 1e-10);
  }
}

TEST(Equilibrium, IsEnergyMinimiser) {
  Rng rng(9);
  const auto q = random_convex_potential(rng, 32, 6, 0.5, 0.2);
  const auto eq = solve_equilibrium(q);
  for (int t = 0; t < 20; ++t) {
    const auto mu = random_density(rng, 32, 6, 0.5);
    EXPECT_GE(energy(q, mu), eq.energy - 1e-14);
  }
  EXPECT_EQ(energy(q, CircleMeasure::dirac(0.3)), std::numeric_limits<double>::infinity());
}

TEST(DensityFloor, HoldsForConvexEnoughPotentials) {
  Rng rng(10);
  const double ln2 = std::numbers::ln2;
  int checked = 0;
  for (int t = 0; t < 40 && checked < 20; ++t) {
    const auto q = random_convex_potential(rng, 64, 8, 0.5, 0.5 - 0.5 / ln2 + 0.05);
    const double beta = q.second_derivative_min() + 0.5 / ln2;
    if (beta <= 0.0) continue;
    const auto r = density_lower_bound_check(q, beta);
    EXPECT_TRUE(r.passed) << r.slack;
    EXPECT_GE(r.min_density, 2.0 * beta * ln2 - 1e-8);
    ++checked;
  }
  EXPECT_EQ(checked, 20);
  const Potential q(FourierSeries::from_modes(4, {{1, 0.1}}));
  EXPECT_THROW(density_lower_bound_check(q, 2.0), PreconditionFailed);
}

TEST(Perturbation, SecondOrderExpansion) {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto q = random_convex_potential(rng, 32, 6, 0.3, 0.2);
    auto f = random_potential_series(rng, 32, 4, 0.3);
    auto g = random_potential_series(rng, 32, 4, 0.3);
    const auto r = perturbation_check(q, f, g, 0.01);
    EXPECT_TRUE(r.passed) << "ratio " << r.ratio;
    EXPECT_LE(r.density_error, 1e-12);
    EXPECT_GE(r.ratio, 7.0);
    EXPECT_GT(r.residual_literal, r.residual);
  }
}

TEST(Perturbation, ExactResidualFormula) {
  const Potential q(FourierSeries::from_modes(8, {{1, 0.1}}));
  const auto f = FourierSeries::from_modes(8, {{2, 0.2}});
  const auto g = FourierSeries::from_modes(8, {{2, cplx(0.0, 0.1)}, {3, 0.05}});
  const double t = 0.1;
  FourierSeries moved = q.series();
  moved += t * f;
  moved += (t * t) * g;
  const double exact = solve_equilibrium(Potential(moved)).energy;
  const double predicted = perturbation_expansion(q, f, g, t) - t * t * t * n_form(f, g).real() -
                           0.5 * t * t * t * t * n_form(g, g).real();
  EXPECT_NEAR(exact, predicted, 1e-15);
}
