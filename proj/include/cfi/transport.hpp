#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "cfi/errors.hpp"
#include "cfi/fourier_series.hpp"
#include "cfi/measures.hpp"
#include "cfi/scalar.hpp"

namespace cfi {

/// Geodesic distance between angles.
inline double circle_distance(double x, double y) { return std::abs(std::remainder(x - y, two_pi)); }

/**
 * \brief Non-decreasing map theta from [u, u+2 pi) onto [v, v+2 pi), sampled on the lift grid of mu.
 */
struct MonotoneMap {
  double base_u = 0.0;
  double base_v = 0.0;
  std::vector<double> points;  ///< x_j
  std::vector<double> image;   ///< theta(x_j)
  std::vector<double> weights; ///< density of mu at x_j against Haar measure

  /// (integral of |x - theta(x)|^p d mu_u)^(1/p) by the periodic trapezoid rule.
  double cost(double p) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) acc += std::pow(std::abs(points[j] - image[j]), p) * weights[j];
    return std::pow(acc / static_cast<double>(points.size()), 1.0 / p);
  }
};

struct DistanceResult {
  double value = 0.0;
  double p = 2.0;
  double cut_u = 0.0;
  double cut_v = 0.0;
  std::optional<MonotoneMap> map;

  bool finite() const { return std::isfinite(value); }
};

namespace detail {

inline void require_atomless(const CircleMeasure& mu, const char* what) {
  if (mu.is_dirac()) throw UnsupportedMeasure(std::string(what) + " requires atomless measures");
}

inline int common_grid(const CircleMeasure& a, const CircleMeasure& b) { return std::max(a.grid(), b.grid()); }

/// Density difference mu - nu as a series with zero mean.
inline FourierSeries density_difference(const CircleMeasure& mu, const CircleMeasure& nu) {
  FourierSeries d = mu.density();
  d -= nu.density();
  d.set(0, 0.0);
  return d;
}

} // namespace detail

/// F_mu,0(t) - F_nu,0(t) + (mean_mu,0 - mean_nu,0) / 2 pi; zero at an admissible common cut.
inline double matching_cut_residual(const CircleMeasure& mu, const CircleMeasure& nu, double t) {
  const FourierSeries d = detail::density_difference(mu, nu);
  const double target = -(detail::lift_mean(mu.density(), 0.0) - detail::lift_mean(nu.density(), 0.0)) / two_pi;
  return detail::exact_cdf(d, 0.0, t) - target;
}

/// Common cut t with mean(mu lifted at t) = mean(nu lifted at t), by grid bracketing and bisection.
inline double find_matching_cut(const CircleMeasure& mu, const CircleMeasure& nu) {
  detail::require_atomless(mu, "find_matching_cut");
  detail::require_atomless(nu, "find_matching_cut");
  const FourierSeries d = detail::density_difference(mu, nu);
  const double target = -(detail::lift_mean(mu.density(), 0.0) - detail::lift_mean(nu.density(), 0.0)) / two_pi;
  auto g = [&](double t) { return detail::exact_cdf(d, 0.0, t) - target; };
  if (std::abs(g(0.0)) <= 1e-14) return 0.0;
  const int m = detail::common_grid(mu, nu);
  const int nb = d.half_bandwidth();
  auto anti = FourierSeries::zero(nb, false);
  for (int n = -nb; n <= nb; ++n)
    if (n != 0) anti.set(n, d[n] / cplx{0.0, two_pi * n});
  const auto s = anti.samples(m);
  std::vector<double> vals(m + 1);
  for (int j = 0; j < m; ++j) vals[j] = (s[j] - s[0]).real() - target;
  vals[m] = vals[0];
  for (int j = 0; j < m; ++j) {
    if ((vals[j] <= 0.0 && vals[j + 1] >= 0.0) || (vals[j] >= 0.0 && vals[j + 1] <= 0.0)) {
      const double a = grid_angle(j, m), b = grid_angle(j + 1, m);
      if (g(a) == 0.0) return a;
      const double ga = g(a), gb = g(b);
      if ((ga > 0) == (gb > 0)) continue;
      const double t = bisect_root(g, a, b, 1e-15);
      return t >= two_pi ? t - two_pi : t;
    }
  }
  // The residual averages to zero over a period, so the scan only misses a root when it is
  // tangential; fall back to the grid point of smallest residual.
  int best = 0;
  for (int j = 1; j < m; ++j)
    if (std::abs(vals[j]) < std::abs(vals[best])) best = j;
  return grid_angle(best, m);
}

/// v with mean(nu lifted at v) = mean(mu lifted at u).
inline double admissible_partner(const CircleMeasure& mu, double u, const CircleMeasure& nu) {
  detail::require_atomless(mu, "admissible_partner");
  detail::require_atomless(nu, "admissible_partner");
  const double target = detail::lift_mean(mu.density(), u);
  auto h = [&](double v) { return detail::lift_mean(nu.density(), v) - target; };
  double a = u, b = u;
  double ha = h(a);
  if (ha == 0.0) return u;
  if (ha < 0.0) {
    b = a + two_pi;
    while (h(b) < 0.0) {
      a = b;
      b += two_pi;
    }
  } else {
    a = b - two_pi;
    while (h(a) > 0.0) {
      b = a;
      a -= two_pi;
    }
  }
  return bisect_root(h, a, b, 1e-15);
}

/// Interval Wasserstein distance between two lifts via theta = G^{-1} o F on the grid of the first.
inline DistanceResult lift_wasserstein(const LiftedMeasure& lmu, const LiftedMeasure& lnu, double p,
                                       bool keep_map = false) {
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  const int m = lmu.grid();
  MonotoneMap map;
  map.base_u = lmu.base();
  map.base_v = lnu.base();
  map.points.resize(m);
  map.image.resize(m);
  map.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    map.points[j] = lmu.point(j);
    map.image[j] = lnu.quantile(lmu.cdf_grid()[j], true);
    map.weights[j] = lmu.pdf_grid()[j] * two_pi;
  }
  for (int j = 1; j < m; ++j) map.image[j] = std::max(map.image[j], map.image[j - 1]);
  DistanceResult r;
  r.p = p;
  r.cut_u = lmu.base();
  r.cut_v = lnu.base();
  r.value = map.cost(p);
  if (keep_map) r.map = std::move(map);
  return r;
}

namespace detail {

/// Order-1 distance of two lifts cut at the same base: integral of |F_mu - F_nu| split at the sign changes.
inline double common_cut_w1(const CircleMeasure& mu, const CircleMeasure& nu, double t, int grid) {
  const FourierSeries d = density_difference(mu, nu);
  const int nb = d.half_bandwidth();
  if (nb == 0) return 0.0;
  auto anti = FourierSeries::zero(nb, false);
  auto second = FourierSeries::zero(nb, false);
  for (int n = -nb; n <= nb; ++n)
    if (n != 0) {
      anti.set(n, d[n] / cplx{0.0, two_pi * n});
      second.set(n, d[n] / cplx{-two_pi * n * n, 0.0});
    }
  const double a0 = anti.value_at(t).real();
  auto diff = [&](double x) { return anti.value_at(x).real() - a0; };
  auto primitive = [&](double x) { return second.value_at(x).real() - a0 * x; };
  std::vector<double> cuts{t};
  const double step = two_pi / grid;
  double prev = 0.0;
  for (int j = 1; j < grid; ++j) {
    const double x = t + j * step;
    const double cur = diff(x);
    if (j > 1 && ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0))) cuts.push_back(bisect_root(diff, x - step, x, 1e-16));
    prev = cur;
  }
  cuts.push_back(t + two_pi);
  double acc = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) acc += std::abs(primitive(cuts[k]) - primitive(cuts[k - 1]));
  return acc;
}

} // namespace detail

/// Smallest lift grid used by modified_wasserstein; monotone maps are not band limited.
inline constexpr int min_lift_grid = default_grid_size;

/// Closed form for a unit atom against Haar measure.
inline double dirac_haar_distance(double p) { return std::pow(2.0 * std::pow(pi, p + 1.0) / (p + 1.0), 1.0 / p); }

/**
 * \brief Modified Wasserstein distance: interval distance between lifts cut at matching means.
 *
 * Dirac/Dirac and Dirac/Haar use closed forms; other Dirac combinations are unsupported.
 */
inline DistanceResult modified_wasserstein(const CircleMeasure& mu, const CircleMeasure& nu, double p,
                                           bool keep_map = false) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p must be a finite real >= 1");
  DistanceResult r;
  r.p = p;
  if (mu.is_dirac() && nu.is_dirac()) {
    r.cut_u = mu.atom_angle();
    r.cut_v = nu.atom_angle();
    r.value = circle_distance(mu.atom_angle(), nu.atom_angle()) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return r;
  }
  if (mu.is_dirac() || nu.is_dirac()) {
    const CircleMeasure& other = mu.is_dirac() ? nu : mu;
    if (!other.is_haar()) throw UnsupportedMeasure("a Dirac measure is only supported against another Dirac or Haar measure");
    const double a = mu.is_dirac() ? mu.atom_angle() : nu.atom_angle();
    r.cut_u = r.cut_v = std::fmod(a + pi, two_pi);
    r.value = dirac_haar_distance(p);
    return r;
  }
  const double t = find_matching_cut(mu, nu);
  const int m = std::max(detail::common_grid(mu, nu), min_lift_grid);
  r = lift_wasserstein(LiftedMeasure(mu, t, m), LiftedMeasure(nu, t, m), p, keep_map);
  if (p == 1.0) r.value = detail::common_cut_w1(mu, nu, t, m);
  return r;
}

/**
 * \brief Geodesic Wasserstein distance on the circle: minimum over the cut-mass shift lambda of
 * the quantile coupling cost, by golden section over eight subintervals of [-1/2, 1/2].
 */
inline double circle_wasserstein(const CircleMeasure& mu, const CircleMeasure& nu, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p must be a finite real >= 1");
  if (mu.is_dirac() && nu.is_dirac()) return circle_distance(mu.atom_angle(), nu.atom_angle());
  if (mu.is_dirac() || nu.is_dirac()) {
    const CircleMeasure& other = mu.is_dirac() ? nu : mu;
    const double a = mu.is_dirac() ? mu.atom_angle() : nu.atom_angle();
    const auto& w = other.samples();
    double acc = 0.0;
    for (int j = 0; j < other.grid(); ++j) acc += std::pow(circle_distance(a, grid_angle(j, other.grid())), p) * w[j];
    return std::pow(acc / other.grid(), 1.0 / p);
  }
  const int m = std::max(detail::common_grid(mu, nu), min_lift_grid);
  const LiftedMeasure lmu(mu, 0.0, m), lnu(nu, 0.0, m);
  std::vector<double> x(m);
  for (int k = 0; k < m; ++k) x[k] = lmu.quantile((k + 0.5) / m);
  auto cost = [&](double lambda) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
      double s = (k + 0.5) / m + lambda;
      s -= std::floor(s);
      acc += std::pow(circle_distance(x[k], lnu.quantile(s)), p);
    }
    return acc / m;
  };
  double best = std::numeric_limits<double>::infinity();
  const int starts = 8;
  for (int i = 0; i < starts; ++i) {
    const double a = -0.5 + static_cast<double>(i) / starts;
    const double b = a + 1.0 / starts;
    best = std::min(best, golden_section_minimize(cost, a, b, 1e-10).value);
  }
  return std::pow(best, 1.0 / p);
}

namespace detail {

struct HopfLaxEnvelope {
  std::vector<double> y;  ///< abscissae, sorted
  std::vector<double> h;  ///< f(y) - lambda y
  std::vector<int> v;     ///< indices of parabolas on the lower envelope
  std::vector<double> z;  ///< breakpoints between consecutive envelope parabolas
  double t = 1.0;

  void build() {
    const int n = static_cast<int>(y.size());
    v.assign(1, 0);
    z.assign(1, -std::numeric_limits<double>::infinity());
    auto key = [&](int i) { return h[i] + y[i] * y[i] / t; };
    for (int q = 1; q < n; ++q) {
      for (;;) {
        const int r = v.back();
        const double s = (key(q) - key(r)) / (2.0 * (y[q] - y[r]) / t);
        if (s <= z.back() && v.size() > 1) {
          v.pop_back();
          z.pop_back();
          continue;
        }
        v.push_back(q);
        z.push_back(s);
        break;
      }
    }
  }

  /// Index of the minimising parabola at x.
  int argmin(double x) const {
    const auto it = std::upper_bound(z.begin(), z.end(), x);
    return v[static_cast<std::size_t>(it - z.begin()) - 1];
  }
};

} // namespace detail

/**
 * \brief Inf-convolution U_t^lambda f(x) = inf_y f(y) + (x-y)^2/t + lambda (x-y) at the given points.
 *
 * The lower envelope of parabolas over a periodised sample grid picks the basin; a safeguarded
 * Newton step on the exact series then locates the minimiser inside the neighbouring cells.
 */
inline std::vector<double> hopf_lax_at(const FourierSeries& f, double lambda, double t, const std::vector<double>& xs,
                                       int grid = 0) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("Hopf-Lax time must be positive");
  if (!f.real_valued()) throw InvalidInput("Hopf-Lax needs a real function");
  const int m = grid > 0 ? grid : grid_for(f.half_bandwidth());
  const auto samples = f.real_samples(m);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double reach = std::abs(lambda) * t / 2.0 + std::sqrt(t * (*hi - *lo)) + two_pi / m;
  const int wings = static_cast<int>(std::ceil(reach / two_pi)) + 1;
  detail::HopfLaxEnvelope env;
  env.t = t;
  const double step = two_pi / m;
  for (int k = -wings; k <= wings; ++k)
    for (int j = 0; j < m; ++j) {
      const double y = k * two_pi + j * step;
      env.y.push_back(y);
      env.h.push_back(samples[j] - lambda * y);
    }
  env.build();
  std::vector<double> out(xs.size());
  for (std::size_t q = 0; q < xs.size(); ++q) {
    const double x = xs[q];
    auto phi = [&](double y) { return f.real_value_at(y) + (x - y) * (x - y) / t + lambda * (x - y); };
    const int i = env.argmin(x);
    const double discrete = env.h[i] + (x - env.y[i]) * (x - env.y[i]) / t + lambda * x;
    double a = env.y[i] - step, b = env.y[i] + step;
    double y = env.y[i];
    bool converged = false;
    for (int it = 0; it < 30; ++it) {
      const auto d = f.value_and_derivatives_at(y);
      const double g1 = d[1].real() - 2.0 * (x - y) / t - lambda;
      const double g2 = d[2].real() + 2.0 / t;
      if (g1 > 0) b = std::min(b, y); else a = std::max(a, y);
      if (!(g2 > 0)) break;
      double next = y - g1 / g2;
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - y) < 1e-15 * std::max(1.0, std::abs(y))) {
        y = next;
        converged = true;
        break;
      }
      y = next;
    }
    double refined = phi(y);
    if (!converged) {
      const auto gs = golden_section_minimize(phi, env.y[i] - step, env.y[i] + step, 1e-13);
      refined = std::min(refined, gs.value);
    }
    out[q] = std::min(discrete, refined);
  }
  return out;
}

/// Hopf-Lax semigroup on the grid 2 pi j / M.
inline std::vector<double> hopf_lax(const FourierSeries& f, double lambda, double t, int grid = 0) {
  const int m = grid > 0 ? grid : grid_for(f.half_bandwidth());
  std::vector<double> xs(m);
  for (int j = 0; j < m; ++j) xs[j] = grid_angle(j, m);
  return hopf_lax_at(f, lambda, t, xs, m);
}

/// Max over the grid of |d_t u + (d_x u - lambda)^2 / 4| for u = U_t f, by centred differences of step 2 pi / M.
inline double hopf_lax_pde_residual(const FourierSeries& f, double lambda, double t, int grid) {
  const double h = two_pi / grid;
  if (!(t > h)) throw DomainError("time must exceed the grid step");
  std::vector<double> xs(grid), left(grid), right(grid);
  for (int j = 0; j < grid; ++j) {
    xs[j] = grid_angle(j, grid);
    left[j] = xs[j] - h;
    right[j] = xs[j] + h;
  }
  const auto later = hopf_lax_at(f, lambda, t + h, xs, grid);
  const auto earlier = hopf_lax_at(f, lambda, t - h, xs, grid);
  const auto ul = hopf_lax_at(f, lambda, t, left, grid);
  const auto ur = hopf_lax_at(f, lambda, t, right, grid);
  double worst = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double ut = (later[j] - earlier[j]) / (2.0 * h);
    const double ux = (ur[j] - ul[j]) / (2.0 * h);
    worst = std::max(worst, std::abs(ut + 0.25 * (ux - lambda) * (ux - lambda)));
  }
  return worst;
}

/// Max over the grid of |U_1^{t lambda}(t f) - t f + t^2 (f' - lambda)^2 / 4|.
inline double hopf_lax_expansion_residual(const FourierSeries& f, double lambda, double t, int grid = 0) {
  const int m = grid > 0 ? grid : grid_for(f.half_bandwidth());
  const auto u = hopf_lax(t * f, t * lambda, 1.0, m);
  const auto v = f.real_samples(m);
  const auto d = f.derivative().real_samples(m);
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    const double predicted = t * v[j] - 0.25 * t * t * (d[j] - lambda) * (d[j] - lambda);
    worst = std::max(worst, std::abs(u[j] - predicted));
  }
  return worst;
}

/// Lower bound integral of f d(mu - nu) on the order-1 distance; requires |f' - lambda| <= 1.
inline double w1_dual_certificate(const CircleMeasure& mu, const CircleMeasure& nu, const FourierSeries& f,
                                  double lambda) {
  if (!f.real_valued()) throw InvalidInput("certificate function must be real valued");
  const int m = std::max({grid_for(f.half_bandwidth()), mu.grid(), nu.grid()});
  const auto d = f.derivative().real_samples(m);
  for (double v : d)
    if (std::abs(v - lambda) > 1.0 + 1e-9) throw CertificateRejected("|f' - lambda| exceeds 1");
  return mu.integrate(f) - nu.integrate(f);
}

/// Lower bound integral of U_1^lambda f d mu - integral of f d nu on the squared order-2 distance.
inline double w2_dual_certificate(const CircleMeasure& mu, const CircleMeasure& nu, const FourierSeries& f,
                                  double lambda) {
  if (!f.real_valued()) throw InvalidInput("certificate function must be real valued");
  double first = 0.0;
  if (mu.is_dirac()) {
    first = hopf_lax_at(f, lambda, 1.0, {mu.atom_angle()})[0];
  } else {
    const int m = std::max(mu.grid(), grid_for(f.half_bandwidth()));
    const auto u = hopf_lax(f, lambda, 1.0, m);
    const auto w = mu.density().real_samples(m);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += u[j] * w[j];
    first = acc / m;
  }
  return first - nu.integrate(f);
}

} // namespace cfi
