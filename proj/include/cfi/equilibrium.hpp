#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cfi/errors.hpp"
#include "cfi/fourier_series.hpp"
#include "cfi/measures.hpp"
#include "cfi/operators.hpp"

namespace cfi {

inline constexpr double support_tolerance = 1e-8;

struct EquilibriumResult {
  CircleMeasure measure;   ///< probability measure (density / mass)
  FourierSeries density;   ///< mass - N Q against Haar measure
  double mass = 1.0;
  double constant_C = 0.0; ///< -integral of Q
  double energy = 0.0;     ///< mass * integral of Q - <NQ,Q>/2
  double min_density = 0.0;
};

/// Spectral equilibrium density mass - N Q, rejected when it dips below -1e-8.
inline EquilibriumResult solve_equilibrium(const Potential& q, double mass = 1.0) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidInput("mass must be positive");
  const FourierSeries& qs = q.series();
  FourierSeries u = -1.0 * apply(OperatorKind::N, qs);
  u.set(0, mass);
  const int grid = q.grid();
  const auto samples = u.real_samples(grid);
  const double lowest = *std::min_element(samples.begin(), samples.end());
  if (lowest < -support_tolerance)
    throw NotFullSupport("equilibrium density is negative (min " + std::to_string(lowest) + "); support is not the whole circle");
  EquilibriumResult r;
  r.mass = mass;
  r.density = u;
  r.min_density = lowest;
  r.measure = CircleMeasure::from_density((1.0 / mass) * u, grid, support_tolerance);
  r.constant_C = -q.mean() + 0.0;
  r.energy = mass * q.mean() - 0.5 * n_form(qs, qs).real();
  return r;
}

/// Closed-form minimal energy integral of Q - <NQ,Q>/2.
inline double equilibrium_energy(const Potential& q) { return solve_equilibrium(q).energy; }

/**
 * \brief Max over the grid of |2 U + Q - mean(Q)|, U the logarithmic potential of mu.
 *
 * 2 U is the series E applied to the density.
 */
inline double variational_residual(const Potential& q, const CircleMeasure& mu) {
  if (mu.is_dirac()) throw UnsupportedMeasure("variational residual needs a density");
  const int grid = std::max(mu.grid(), q.grid());
  FourierSeries lhs = -1.0 * apply(OperatorKind::E, mu.density());
  lhs -= q.series();
  FourierSeries c = FourierSeries::zero(0);
  c.set(0, q.mean());
  lhs += c;
  const auto v = lhs.real_samples(grid);
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x));
  return worst;
}

/**
 * \brief Equilibrium density from the real singular-integral form
 * mass + 2 * integral of (Q'(z)-Q'(w)) Im(z/w) / |z-w|^2, evaluated by the trapezoid rule.
 */
inline std::vector<double> equilibrium_density_by_quadrature(const Potential& q, double mass = 1.0, int grid = 0) {
  const int m = grid > 0 ? grid : q.grid();
  const auto d1 = q.series().derivative().real_samples(m);
  const auto d2 = q.series().derivative().derivative().real_samples(m);
  std::vector<double> kernel(m, 0.0);
  for (int d = 1; d < m; ++d) {
    const double s = two_pi * d / m;
    const double half = std::sin(0.5 * s);
    kernel[d] = 2.0 * std::sin(s) / (4.0 * half * half);
  }
  std::vector<double> u(m);
  for (int j = 0; j < m; ++j) {
    double acc = 2.0 * d2[j];
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      const int d = ((j - k) % m + m) % m;
      acc += (d1[j] - d1[k]) * kernel[d];
    }
    u[j] = mass + acc / m;
  }
  return u;
}

struct PerturbationReport {
  double t = 0.0;
  double density_error = 0.0;    ///< max coefficient gap between mu_{Q+tf+t^2 g} and mu_Q - tNf - t^2 Ng
  double residual = 0.0;         ///< energy minus second-order expansion at t
  double residual_half = 0.0;    ///< same at t/2
  double ratio = 0.0;            ///< residual / residual_half
  double residual_literal = 0.0; ///< residual with the t^2 bracket entering with a minus sign
  bool passed = false;
};

/**
 * \brief Second-order energy expansion E_Q + t int f dmu_Q + t^2 (int g dmu_Q - <Nf,f>/2).
 */
inline double perturbation_expansion(const Potential& q, const FourierSeries& f, const FourierSeries& g, double t,
                                     double bracket_sign = 1.0) {
  const auto base = solve_equilibrium(q);
  const double first = base.measure.integrate(f);
  const double second = base.measure.integrate(g) - 0.5 * n_form(f, f).real();
  return base.energy + t * first + bracket_sign * t * t * second;
}

inline PerturbationReport perturbation_check(const Potential& q, const FourierSeries& f, const FourierSeries& g,
                                             double t) {
  if (!f.real_valued() || !g.real_valued()) throw InvalidInput("perturbations must be real valued");
  PerturbationReport r;
  r.t = t;
  const auto base = solve_equilibrium(q);
  auto energy_at = [&](double s) {
    FourierSeries p = q.series();
    p += s * f;
    p += (s * s) * g;
    return solve_equilibrium(Potential(p, q.grid()));
  };
  const auto moved = energy_at(t);
  FourierSeries predicted = base.density;
  predicted -= t * apply(OperatorKind::N, f);
  predicted -= (t * t) * apply(OperatorKind::N, g);
  r.density_error = max_coeff_diff(moved.density, predicted);
  r.residual = std::abs(moved.energy - perturbation_expansion(q, f, g, t));
  r.residual_literal = std::abs(moved.energy - perturbation_expansion(q, f, g, t, -1.0));
  const auto half = energy_at(0.5 * t);
  r.residual_half = std::abs(half.energy - perturbation_expansion(q, f, g, 0.5 * t));
  const double floor = 1e-13 * std::max(1.0, std::abs(base.energy));
  if (r.residual <= floor) {
    r.ratio = 0.0;
    r.passed = r.density_error <= 1e-12;
  } else {
    r.ratio = r.residual / std::max(r.residual_half, 1e-300);
    r.passed = r.density_error <= 1e-12 && r.ratio >= 7.0;
  }
  return r;
}

struct DensityFloorReport {
  double beta = 0.0;
  double bound = 0.0;       ///< 2 beta log 2
  double min_density = 0.0;
  double slack = 0.0;
  bool passed = false;
};

/// If Q'' >= beta - 1/(2 log 2) then the equilibrium density is at least 2 beta log 2.
inline DensityFloorReport density_lower_bound_check(const Potential& q, double beta) {
  const double ln2 = std::numbers::ln2;
  if (q.second_derivative_min() < beta - 1.0 / (2.0 * ln2) - 1e-12)
    throw PreconditionFailed("min Q'' is below beta - 1/(2 log 2)");
  DensityFloorReport r;
  r.beta = beta;
  r.bound = 2.0 * beta * ln2;
  r.min_density = solve_equilibrium(q).min_density;
  r.slack = r.min_density - r.bound;
  r.passed = r.slack >= -1e-8;
  return r;
}

} // namespace cfi
