#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "cfi/fourier_series.hpp"
#include "cfi/measures.hpp"

namespace cfi {

using Rng = std::mt19937_64;

/// splitmix64 mix of a base seed and an instance index.
inline std::uint64_t instance_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Trig polynomial with standard normal coefficients for 0 <= |n| <= degree.
inline FourierSeries random_trig_polynomial(Rng& rng, int half_bandwidth, int degree, bool complex_valued = false) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto f = FourierSeries::zero(half_bandwidth, !complex_valued);
  for (int n = complex_valued ? -degree : 0; n <= degree; ++n) {
    cplx c{gauss(rng), gauss(rng)};
    if (!complex_valued && n == 0) c = {c.real(), 0.0};
    f.set(n, c);
  }
  return f;
}

/// Real potential with coefficients of standard deviation sigma / n^3.
inline FourierSeries random_potential_series(Rng& rng, int half_bandwidth, int degree, double sigma) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto f = FourierSeries::zero(half_bandwidth);
  f.set(0, sigma * gauss(rng));
  for (int n = 1; n <= degree; ++n) {
    const double s = sigma / (double(n) * n * n);
    f.set(n, cplx{s * gauss(rng), s * gauss(rng)});
  }
  return f;
}

/// Random potential rescaled so that its grid minimum of Q'' is at least rho - 1/2.
inline Potential random_convex_potential(Rng& rng, int half_bandwidth, int degree, double sigma, double rho) {
  auto q = random_potential_series(rng, half_bandwidth, degree, sigma);
  const double floor = rho - 0.5;
  Potential p(q);
  const double m = p.second_derivative_min();
  if (m < floor) {
    if (floor >= 0.0) throw DomainError("no periodic potential has Q'' bounded below by a positive constant");
    q *= (floor / m) * (1.0 - 1e-9);
    p = Potential(q);
  }
  return p;
}

/// Density 1 + sum of harmonics with coefficients of standard deviation sigma / n^2, rescaled to stay above floor.
inline CircleMeasure random_density(Rng& rng, int half_bandwidth, int degree, double sigma, double floor = 0.1) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto f = FourierSeries::zero(half_bandwidth);
  for (int n = 1; n <= degree; ++n) {
    const double s = sigma / (double(n) * n);
    f.set(n, cplx{s * gauss(rng), s * gauss(rng)});
  }
  const auto v = f.real_samples(grid_for(half_bandwidth));
  const double lowest = *std::min_element(v.begin(), v.end());
  if (1.0 + lowest < floor) f *= (1.0 - floor) / (-lowest);
  f.set(0, 1.0);
  return CircleMeasure::from_density(f);
}

} // namespace cfi
