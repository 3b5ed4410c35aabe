#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cfi/digest.hpp"
#include "cfi/errors.hpp"
#include "cfi/fourier_series.hpp"
#include "cfi/measures.hpp"
#include "cfi/operators.hpp"
#include "cfi/transport.hpp"

namespace cfi {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/**
 * \brief Principal-value cotangent integral of a density at an angle:
 * (1/2 pi) p.v. integral of cot((x-y)/2) phi(y) dy, by the trapezoid rule on the subtracted integrand.
 */
inline double hilbert_pv_quadrature(const FourierSeries& density, double x, int grid) {
  const double fx = density.real_value_at(x);
  double acc = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double y = grid_angle(k, grid);
    const double half = 0.5 * (x - y);
    if (std::abs(std::sin(half)) < 1e-12) {
      acc += -2.0 * density.derivative().real_value_at(x);
      continue;
    }
    acc += (density.real_value_at(y) - fx) / std::tan(half);
  }
  return acc / grid;
}

namespace detail {

/// Sign relating the cotangent-kernel transform to (E phi)', fixed by a quadrature self-test.
inline double compute_hilbert_sign() {
  const auto density = FourierSeries::from_modes(1, {{0, 1.0}, {1, 0.5}});
  const double x = 1.0;
  const double pv = hilbert_pv_quadrature(density, x, 64);
  const double spectral = apply(OperatorKind::E, density).derivative().real_value_at(x);
  return pv * spectral >= 0.0 ? 1.0 : -1.0;
}

} // namespace detail

inline double hilbert_sign() {
  static const double sign = detail::compute_hilbert_sign();
  return sign;
}

namespace detail {
inline const double hilbert_sign_at_startup = hilbert_sign();
}

/// Circular Hilbert transform of the density as a series.
inline FourierSeries hilbert_series(const CircleMeasure& mu) {
  if (mu.is_dirac()) throw UnsupportedMeasure("Hilbert transform needs a density");
  return hilbert_sign() * apply(OperatorKind::E, mu.density()).derivative();
}

/// Circular Hilbert transform on the grid of mu.
inline std::vector<double> hilbert_transform(const CircleMeasure& mu, int grid = 0) {
  return hilbert_series(mu).real_samples(grid > 0 ? grid : mu.grid());
}

/// Logarithmic energy with external field: integral of Q d mu + sum_{n>=1} |m_n|^2 / n.
inline double energy(const Potential& q, const CircleMeasure& mu) {
  if (mu.is_dirac()) return infinity;
  double acc = mu.integrate(q.series());
  for (int n = 1; n <= mu.half_bandwidth(); ++n) acc += std::norm(mu.moment(n)) / n;
  return acc;
}

/// Potential-independent entropy: <E phi, phi> = sum_{n != 0} |phi_n|^2 / |n| for mu - nu = phi alpha.
inline double relative_entropy_H(const CircleMeasure& mu, const CircleMeasure& nu) {
  if (mu.is_dirac() || nu.is_dirac()) {
    if (mu.is_dirac() && nu.is_dirac() && circle_distance(mu.atom_angle(), nu.atom_angle()) == 0.0) return 0.0;
    return infinity;
  }
  const FourierSeries d = detail::density_difference(mu, nu);
  double acc = 0.0;
  for (int n = 1; n <= d.half_bandwidth(); ++n) acc += (std::norm(d[n]) + std::norm(d[-n])) / n;
  return acc;
}

/// Minus the logarithmic energy of the signed measure mu - nu; half of relative_entropy_H.
inline double log_energy_of_difference(const CircleMeasure& mu, const CircleMeasure& nu) {
  return 0.5 * relative_entropy_H(mu, nu);
}

/// Relative free Fisher information: integral of (H mu - Q')^2 d mu - (integral of Q' d mu)^2.
inline double fisher_information_IQ(const Potential& q, const CircleMeasure& mu) {
  if (mu.is_dirac()) throw UnsupportedMeasure("Fisher information needs a density");
  const int grid = std::max({mu.grid(), q.grid(), grid_for(std::max(mu.half_bandwidth(), q.half_bandwidth()))});
  const auto h = hilbert_series(mu).real_samples(grid);
  const auto dq = q.series().derivative().real_samples(grid);
  const auto w = mu.density().real_samples(grid);
  double sq = 0.0, lin = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double r = h[j] - dq[j];
    sq += r * r * w[j];
    lin += dq[j] * w[j];
  }
  sq /= grid;
  lin /= grid;
  return std::max(0.0, sq - lin * lin);
}

/// Squared L2 distance of densities; +infinity without densities.
inline double potential_free_I(const CircleMeasure& mu, const CircleMeasure& nu) {
  if (mu.is_dirac() || nu.is_dirac()) return infinity;
  return l2_norm_sq(detail::density_difference(mu, nu));
}

struct FunctionalValue {
  enum class Name { Energy, RelEntropyH, FisherIQ, PotentialFreeI };
  Name name = Name::Energy;
  double value = 0.0;
  std::string inputs_digest;
};

inline std::string to_string(FunctionalValue::Name n) {
  switch (n) {
  case FunctionalValue::Name::Energy: return "Energy";
  case FunctionalValue::Name::RelEntropyH: return "RelEntropyH";
  case FunctionalValue::Name::FisherIQ: return "FisherIQ";
  case FunctionalValue::Name::PotentialFreeI: return "PotentialFreeI";
  }
  return "?";
}

} // namespace cfi
