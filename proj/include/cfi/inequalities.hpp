#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cfi/digest.hpp"
#include "cfi/equilibrium.hpp"
#include "cfi/errors.hpp"
#include "cfi/functionals.hpp"
#include "cfi/measures.hpp"
#include "cfi/operators.hpp"
#include "cfi/random.hpp"
#include "cfi/scalar.hpp"
#include "cfi/transport.hpp"

namespace cfi {

inline constexpr double slack_tolerance = 1e-7;

inline bool slack_passes(double slack, double rhs, double tol = slack_tolerance) {
  const double scale = std::isfinite(rhs) ? std::max(1.0, std::abs(rhs)) : 1.0;
  return slack >= -tol * scale;
}

struct InequalityReport {
  enum class Name { Poincare, Transport, LSI, HWI, BrunnMinkowski, ChainW1H, ChainHI, ChainHWI10, HoudreKagan };

  Name name = Name::Poincare;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double rho_used = 0.0;
  std::string instance_digest;
  bool passed = false;
  bool in_hypothesis = true;
  double tolerance = slack_tolerance;
  std::string note;

  static InequalityReport make(Name name, double lhs, double rhs, double rho, std::string digest,
                               bool in_hypothesis = true, double tol = slack_tolerance) {
    InequalityReport r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = (std::isinf(lhs) && lhs == rhs) ? 0.0 : rhs - lhs;
    if (std::isnan(r.slack)) r.slack = -std::numeric_limits<double>::infinity();
    r.rho_used = rho;
    r.instance_digest = std::move(digest);
    r.in_hypothesis = in_hypothesis;
    r.tolerance = tol;
    r.passed = slack_passes(r.slack, rhs, tol);
    return r;
  }
};

inline std::string to_string(InequalityReport::Name n) {
  using N = InequalityReport::Name;
  switch (n) {
  case N::Poincare: return "Poincare";
  case N::Transport: return "Transport";
  case N::LSI: return "LSI";
  case N::HWI: return "HWI";
  case N::BrunnMinkowski: return "BrunnMinkowski";
  case N::ChainW1H: return "ChainW1H";
  case N::ChainHI: return "ChainHI";
  case N::ChainHWI10: return "ChainHWI10";
  case N::HoudreKagan: return "HoudreKagan";
  }
  return "?";
}

/// Right-hand side of the free Poincare inequality: integral |f'|^2 d mu - |integral f' d mu|^2.
inline double poincare_variance(const CircleMeasure& mu, const FourierSeries& f) {
  const FourierSeries d = f.derivative();
  if (mu.is_dirac()) return 0.0;
  const int grid = std::max(mu.grid(), grid_for(std::max(f.half_bandwidth(), mu.half_bandwidth())));
  const auto v = d.samples(grid);
  const auto w = mu.density().real_samples(grid);
  double sq = 0.0;
  cplx lin{};
  for (int j = 0; j < grid; ++j) {
    sq += std::norm(v[j]) * w[j];
    lin += v[j] * w[j];
  }
  sq /= grid;
  lin /= double(grid);
  return sq - std::norm(lin);
}

/// 2 rho <N f, f> <= integral |f'|^2 d mu - |integral f' d mu|^2.
inline InequalityReport verify_poincare(const CircleMeasure& mu, double rho, const FourierSeries& f) {
  const double lhs = 2.0 * rho * n_form(f, f).real();
  const double rhs = poincare_variance(mu, f);
  return InequalityReport::make(InequalityReport::Name::Poincare, lhs, rhs, rho, Digest().add(mu).add(f).add(rho).hex());
}

/// Largest rho on a uniform scan at which every test function passes.
inline double max_passing_rho(const CircleMeasure& mu, const std::vector<FourierSeries>& fs, double lo, double hi,
                              double step) {
  double best = lo;
  for (double rho = lo; rho <= hi + 1e-15; rho += step) {
    bool ok = true;
    for (const auto& f : fs)
      if (!verify_poincare(mu, rho, f).passed) {
        ok = false;
        break;
      }
    if (!ok) break;
    best = rho;
  }
  return best;
}

inline bool convexity_hypothesis(const Potential& q, double rho) { return q.second_derivative_min() >= rho - 0.5 - 1e-12; }

struct TransportInputs {
  double w2 = 0.0;       ///< modified order-2 distance to mu_Q
  double energy_gap = 0.0;
  double fisher = 0.0;
};

namespace detail {
inline TransportInputs transport_inputs(const Potential& q, const CircleMeasure& mu, bool need_fisher) {
  const auto eq = solve_equilibrium(q);
  TransportInputs t;
  t.w2 = modified_wasserstein(mu, eq.measure, 2.0).value;
  t.energy_gap = energy(q, mu) - eq.energy;
  if (need_fisher) t.fisher = fisher_information_IQ(q, mu);
  return t;
}
} // namespace detail

/// (rho/2) W_2(mu, mu_Q)^2 <= E_Q(mu) - E_Q.
inline InequalityReport verify_transport(const Potential& q, const CircleMeasure& mu, double rho) {
  const auto t = detail::transport_inputs(q, mu, false);
  auto r = InequalityReport::make(InequalityReport::Name::Transport, 0.5 * rho * t.w2 * t.w2, t.energy_gap, rho,
                                  Digest().add(q).add(mu).add(rho).hex(), convexity_hypothesis(q, rho));
  if (!r.in_hypothesis) r.note = "out of hypothesis";
  return r;
}

/// E_Q(mu) - E_Q <= I_Q(mu) / (2 rho).
inline InequalityReport verify_lsi(const Potential& q, const CircleMeasure& mu, double rho) {
  const auto t = detail::transport_inputs(q, mu, true);
  auto r = InequalityReport::make(InequalityReport::Name::LSI, t.energy_gap, t.fisher / (2.0 * rho), rho,
                                  Digest().add(q).add(mu).add(rho).hex(), convexity_hypothesis(q, rho));
  if (!r.in_hypothesis) r.note = "out of hypothesis";
  return r;
}

/// E_Q(mu) - E_Q <= sqrt(I_Q(mu)) W_2 - (rho/2) W_2^2.
inline InequalityReport verify_hwi(const Potential& q, const CircleMeasure& mu, double rho) {
  const auto t = detail::transport_inputs(q, mu, true);
  const double rhs = std::sqrt(t.fisher) * t.w2 - 0.5 * rho * t.w2 * t.w2;
  auto r = InequalityReport::make(InequalityReport::Name::HWI, t.energy_gap, rhs, rho,
                                  Digest().add(q).add(mu).add(rho).hex(), convexity_hypothesis(q, rho));
  if (!r.in_hypothesis) r.note = "out of hypothesis";
  return r;
}

/// Transport, LSI and HWI reports on one instance, sharing the distance and information values.
inline std::array<InequalityReport, 3> verify_transport_family(const Potential& q, const CircleMeasure& mu, double rho) {
  const auto t = detail::transport_inputs(q, mu, true);
  const std::string dg = Digest().add(q).add(mu).add(rho).hex();
  const bool hyp = convexity_hypothesis(q, rho);
  using N = InequalityReport::Name;
  std::array<InequalityReport, 3> out{
      InequalityReport::make(N::Transport, 0.5 * rho * t.w2 * t.w2, t.energy_gap, rho, dg, hyp),
      InequalityReport::make(N::LSI, t.energy_gap, t.fisher / (2.0 * rho), rho, dg, hyp),
      InequalityReport::make(N::HWI, t.energy_gap, std::sqrt(t.fisher) * t.w2 - 0.5 * rho * t.w2 * t.w2, rho, dg, hyp)};
  if (!hyp)
    for (auto& r : out) r.note = "out of hypothesis";
  return out;
}

/// Three margins of the potential-free chain: W_1^2 <= H, H <= I, H <= 2 sqrt(I) W_1 - W_1^2.
inline std::array<InequalityReport, 3> verify_potential_free(const CircleMeasure& mu, const CircleMeasure& nu) {
  const double w1 = modified_wasserstein(mu, nu, 1.0).value;
  const double h = relative_entropy_H(mu, nu);
  const double i = potential_free_I(mu, nu);
  const std::string dg = Digest().add(mu).add(nu).hex();
  using N = InequalityReport::Name;
  return {InequalityReport::make(N::ChainW1H, w1 * w1, h, 0.0, dg),
          InequalityReport::make(N::ChainHI, h, i, 0.0, dg),
          InequalityReport::make(N::ChainHWI10, h, 2.0 * std::sqrt(i) * w1 - w1 * w1, 0.0, dg)};
}

/// Houdre-Kagan bracketing as two reports: lower <= <N phi,phi> and <N phi,phi> <= upper.
inline std::array<InequalityReport, 2> verify_houdre_kagan(const FourierSeries& phi, int k) {
  const auto b = houdre_kagan_bounds(phi, k);
  const std::string dg = Digest().add(phi).add(std::int64_t(k)).hex();
  using N = InequalityReport::Name;
  return {InequalityReport::make(N::HoudreKagan, b.lower, b.exact, 0.0, dg),
          InequalityReport::make(N::HoudreKagan, b.exact, b.upper, 0.0, dg)};
}

// ---------------------------------------------------------------------------------------------
// Brunn-Minkowski

struct BrunnMinkowskiPotential {
  Potential q3;
  std::vector<double> tight_samples; ///< inf-convolution on the output grid
  double smoothing = 0.0;            ///< Gaussian width used, 0 when none was needed
  bool degraded = false;
};

namespace detail {

/// Best rational p/q with q <= max_den.
inline std::pair<int, int> rationalize(double a, int max_den = 64) {
  int best_p = 0, best_q = 1;
  double best_err = std::abs(a);
  for (int q = 1; q <= max_den; ++q) {
    const int p = static_cast<int>(std::lround(a * q));
    const double err = std::abs(a - double(p) / q);
    if (err < best_err - 1e-15) {
      best_err = err;
      best_p = p;
      best_q = q;
    }
  }
  return {best_p, best_q};
}

} // namespace detail

/**
 * \brief Tightest Q3 with a V1(x) + (1-a) V2(y) >= V3(a x + (1-a) y) for all real x, y.
 *
 * For a = p/q the constraint reduces to finitely many lifted branches y = (w - a x)/(1-a) + 2 pi r/(q-p).
 * The infimum over x is scanned on a grid and refined by golden section on the exact series. When the
 * result is too rough for a full-support equilibrium, it is smoothed by a Gaussian filter and shifted
 * down so that it stays below the infimum at every sample.
 */
inline BrunnMinkowskiPotential brunn_minkowski_potential(const Potential& q1, const Potential& q2, double a,
                                                         int grid = 256) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("interpolation weight must lie in (0,1)");
  const auto [p, q] = detail::rationalize(a);
  if (std::abs(a - double(p) / q) > 1e-12) throw DomainError("interpolation weight must be rational with denominator <= 64");
  const int branches = q - p;
  const FourierSeries& v1 = q1.series();
  const FourierSeries& v2 = q2.series();
  const int fine = 16 * grid;
  const auto s1 = v1.real_samples(grid);
  const auto s2 = v2.real_samples(fine);
  auto v2_interp = [&](double y) {
    double r = y / two_pi;
    r -= std::floor(r);
    const double pos = r * fine;
    const int j = std::min(static_cast<int>(pos), fine - 1);
    const double frac = pos - j;
    return (1.0 - frac) * s2[j] + frac * s2[(j + 1) % fine];
  };
  BrunnMinkowskiPotential out;
  out.tight_samples.resize(grid);
  const double hx = two_pi / grid;
  for (int m = 0; m < grid; ++m) {
    const double w = grid_angle(m, grid);
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0, best_r = 0;
    for (int r = 0; r < branches; ++r)
      for (int k = 0; k < grid; ++k) {
        const double x = k * hx;
        const double y = (w - a * x) / (1.0 - a) + two_pi * r / branches;
        const double val = a * s1[k] + (1.0 - a) * v2_interp(y);
        if (val < best) {
          best = val;
          best_k = k;
          best_r = r;
        }
      }
    auto objective = [&](double x) {
      const double y = (w - a * x) / (1.0 - a) + two_pi * best_r / branches;
      return a * v1.real_value_at(x) + (1.0 - a) * v2.real_value_at(y);
    };
    const auto refined = golden_section_minimize(objective, (best_k - 1) * hx, (best_k + 1) * hx, 1e-12);
    out.tight_samples[m] = std::min(refined.value, objective(best_k * hx));
  }
  const int nb = std::max(q1.half_bandwidth(), q2.half_bandwidth());
  const FourierSeries raw = FourierSeries::from_grid(out.tight_samples);
  double lip = 0.0;
  for (int m = 0; m < grid; ++m)
    lip = std::max(lip, std::abs(out.tight_samples[(m + 1) % grid] - out.tight_samples[m]) / hx);

  const std::array<double, 8> widths{0.0, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8};
  for (double sigma : widths) {
    FourierSeries cand = raw;
    for (int n = -cand.half_bandwidth(); n <= cand.half_bandwidth(); ++n)
      cand.set(n, raw[n] * std::exp(-0.5 * sigma * sigma * n * n));
    if (sigma > 0.0) {
      const auto vals = cand.real_samples(grid);
      double shift = 0.0;
      for (int m = 0; m < grid; ++m) shift = std::max(shift, vals[m] - out.tight_samples[m]);
      cand.set(0, cand[0] - (shift + lip * hx));
    } else {
      double tail = 0.0, total = 0.0;
      for (int n = 0; n <= raw.half_bandwidth(); ++n) {
        total += std::norm(raw[n]);
        if (n > raw.half_bandwidth() / 2) tail += std::norm(raw[n]);
      }
      if (tail > 1e-20 * std::max(total, 1e-300)) continue;
    }
    try {
      Potential pot(cand.resized(std::max(nb, cand.half_bandwidth())));
      solve_equilibrium(pot);
      out.q3 = pot;
      out.smoothing = sigma;
      out.degraded = sigma > 0.0;
      return out;
    } catch (const NotFullSupport&) {
    }
  }
  throw NotFullSupport("no admissible smoothing of the inf-convolution has a full-support equilibrium");
}

/// a E_{Q1} + (1-a) E_{Q2} >= E_{Q3} for the inf-convolution potential Q3.
inline InequalityReport verify_brunn_minkowski(const Potential& q1, const Potential& q2, double a, int grid = 256) {
  const double e1 = equilibrium_energy(q1);
  const double e2 = equilibrium_energy(q2);
  const auto bm = brunn_minkowski_potential(q1, q2, a, grid);
  const double e3 = equilibrium_energy(bm.q3);
  const double tol = bm.degraded ? 1e-5 : slack_tolerance;
  auto r = InequalityReport::make(InequalityReport::Name::BrunnMinkowski, e3, a * e1 + (1.0 - a) * e2, 0.0,
                                  Digest().add(q1).add(q2).add(a).hex(), true, tol);
  if (bm.degraded) r.note = "inf-convolution smoothed with width " + std::to_string(bm.smoothing);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Scalar lemma and the improved transport constant

/// (a-b) cot b - log(sin a / sin b) - (a-b)^2 / 2 on (0, pi)^2.
inline double scalar_lemma_margin(double aa, double bb) {
  if (!(aa > 0.0 && aa < pi && bb > 0.0 && bb < pi)) throw DomainError("scalar lemma arguments must lie in (0, pi)");
  const double d = aa - bb;
  return d / std::tan(bb) - (std::log(std::sin(aa)) - std::log(std::sin(bb))) - 0.5 * d * d;
}

/// Integral of 2(1-s) / sin^2(b + s(a-b)) over s in [0, 1].
inline double remainder_integral(double aa, double bb) {
  auto f = [&](double s) {
    const double v = std::sin(bb + s * (aa - bb));
    return 2.0 * (1.0 - s) / (v * v);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, 1e-13);
}

/// Margin from the integral Taylor remainder: (a-b)^2 (integral of (1-s)/sin^2 - 1/2).
inline double scalar_lemma_margin_integral(double aa, double bb) {
  const double d = aa - bb;
  return d * d * 0.5 * (remainder_integral(aa, bb) - 1.0);
}

/// h(b) = min over a of the remainder integral.
inline double h_function(double bb) {
  if (!(bb > 0.0 && bb < pi)) throw DomainError("h is defined on (0, pi)");
  auto f = [&](double aa) { return remainder_integral(aa, bb); };
  const int scan = 64;
  double best_a = bb, best = f(bb);
  for (int i = 1; i < scan; ++i) {
    const double aa = pi * i / scan;
    const double v = f(aa);
    if (v < best) {
      best = v;
      best_a = aa;
    }
  }
  const double lo = std::max(1e-9, best_a - pi / scan), hi = std::min(pi - 1e-9, best_a + pi / scan);
  const auto m = golden_section_minimize(f, lo, hi, 1e-10);
  return std::min(best, m.value);
}

/// min(h, cap) on the grid -pi + 2 pi j / M; h is infinite at 0 and +-pi.
inline std::vector<double> default_delta_profile(int grid, double cap = 3.0) {
  std::vector<double> g(grid);
  for (int j = 0; j < grid; ++j) {
    const double x = std::abs(-pi + two_pi * j / grid);
    g[j] = (x <= 0.0 || x >= pi) ? cap : std::min(h_function(x), cap);
  }
  return g;
}

struct DeltaResult {
  double delta = 0.0;
  int argmin_n = 0;
  double ghat0 = 0.0;
  double tail_bound = 0.0;        ///< lower bound on ghat(0) - ghat(n) beyond the cutoff
  double improved_constant = 0.0; ///< (1 + delta) / 4
};

/**
 * \brief delta = min over n >= 1 of ghat(0) - ghat(n), minus 1, for an even profile g on [-pi, pi).
 *
 * Modes beyond the cutoff are bounded using |ghat(n)| <= TV(g) / (2 pi n).
 */
inline DeltaResult improved_delta(const std::vector<double>& g, int cutoff = 0, bool check_upper = true) {
  const int m = static_cast<int>(g.size());
  if (m < 8 || !detail::is_power_of_two(m)) throw InvalidInput("profile grid must be a power of two >= 8");
  for (double v : g)
    if (!std::isfinite(v)) throw InvalidInput("profile must be finite");
  for (int j = 1; j < m; ++j)
    if (std::abs(g[j] - g[m - j]) > 1e-9) throw InvalidInput("profile is not even");
  const int quarter = m / 4, three_quarter = 3 * m / 4;
  for (int j = 0; j < m; ++j) {
    if (g[j] < 1.0 - 1e-12) throw InvalidInput("profile drops below 1");
    const bool pinch = std::abs(j - quarter) <= 1 || std::abs(j - three_quarter) <= 1;
    if (!pinch && !(g[j] > 1.0)) throw InvalidInput("profile equals 1 away from +-pi/2");
  }
  if (check_upper)
    for (int j = 0; j < m; ++j) {
      const double x = std::abs(-pi + two_pi * j / m);
      if (x <= 0.0 || x >= pi) continue;
      if (g[j] > h_function(x) + 1e-9) throw InvalidInput("profile exceeds h");
    }
  if (cutoff <= 0) cutoff = m / 2 - 1;
  auto ghat = [&](int n) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += g[j] * std::cos(n * (-pi + two_pi * j / m));
    return acc / m;
  };
  DeltaResult r;
  r.ghat0 = ghat(0);
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= cutoff; ++n) {
    const double v = r.ghat0 - ghat(n);
    if (v < best) {
      best = v;
      r.argmin_n = n;
    }
  }
  double tv = 0.0;
  for (int j = 0; j < m; ++j) tv += std::abs(g[(j + 1) % m] - g[j]);
  r.tail_bound = r.ghat0 - tv / (two_pi * (cutoff + 1));
  if (r.tail_bound < best) {
    best = r.tail_bound;
    r.argmin_n = cutoff + 1;
  }
  r.delta = best - 1.0;
  r.improved_constant = (1.0 + r.delta) / 4.0;
  return r;
}

// ---------------------------------------------------------------------------------------------
// Sharpness exploration

enum class MeasureFamily { HarmonicPerturbations, RandomSmooth, BumpLike };

inline std::string to_string(MeasureFamily f) {
  switch (f) {
  case MeasureFamily::HarmonicPerturbations: return "harmonic-perturbations";
  case MeasureFamily::RandomSmooth: return "random-smooth";
  case MeasureFamily::BumpLike: return "bump-like";
  }
  return "?";
}

inline MeasureFamily measure_family_from_string(const std::string& s) {
  if (s == "harmonic-perturbations" || s == "harmonic") return MeasureFamily::HarmonicPerturbations;
  if (s == "random-smooth" || s == "random") return MeasureFamily::RandomSmooth;
  if (s == "bump-like" || s == "bump") return MeasureFamily::BumpLike;
  throw InvalidInput("unknown measure family '" + s + "'");
}

/// Member i of a measure family, with a short description.
inline std::pair<CircleMeasure, std::string> family_member(MeasureFamily family, std::uint64_t seed, int i,
                                                           int half_bandwidth) {
  Rng rng(instance_seed(seed, static_cast<std::uint64_t>(i)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (family) {
  case MeasureFamily::HarmonicPerturbations: {
    const int n = 1 + (i % std::min(8, std::max(1, half_bandwidth)));
    const double eps = 0.05 + 0.85 * unit(rng);
    const double phase = two_pi * unit(rng);
    const auto f = FourierSeries::from_modes(half_bandwidth, {{0, 1.0}, {n, std::polar(0.5 * eps, phase)}});
    return {CircleMeasure::from_density(f), "n=" + std::to_string(n) + " eps=" + std::to_string(eps)};
  }
  case MeasureFamily::RandomSmooth: {
    const int degree = std::min(half_bandwidth, 2 + static_cast<int>(unit(rng) * 10));
    return {random_density(rng, half_bandwidth, degree, 0.5 + unit(rng), 0.05), "degree=" + std::to_string(degree)};
  }
  case MeasureFamily::BumpLike: {
    const double kappa = 0.5 + 3.5 * unit(rng);
    const double weight = 0.2 + 0.7 * unit(rng);
    const double centre = two_pi * unit(rng);
    const int grid = grid_for(half_bandwidth);
    std::vector<double> v(grid);
    for (int j = 0; j < grid; ++j) v[j] = std::exp(kappa * std::cos(grid_angle(j, grid) - centre));
    const double mean = grid_mean(v);
    for (double& x : v) x = (1.0 - weight) + weight * x / mean;
    auto f = FourierSeries::from_grid(v).resized(half_bandwidth);
    return {CircleMeasure::from_density(f), "kappa=" + std::to_string(kappa) + " weight=" + std::to_string(weight)};
  }
  }
  throw InvalidInput("unknown family");
}

struct SharpnessSummary {
  std::string family;
  int count = 0;
  int evaluated = 0;
  int skipped = 0;
  double min_transport_ratio = std::numeric_limits<double>::infinity();          ///< (E_Q(mu)-E_Q) / W_2^2, modified
  double min_standard_transport_ratio = std::numeric_limits<double>::infinity(); ///< same with the geodesic W_2
  double min_lsi_ratio = std::numeric_limits<double>::infinity();                ///< I_Q / (4 (E_Q(mu)-E_Q))
  std::string transport_argmin;
  std::string lsi_argmin;
  bool transport_exceeds_half = false;
};

struct SharpnessSample {
  int index = 0;
  std::string label;
  bool skipped = false;
  double transport_ratio = 0.0;
  double standard_transport_ratio = 0.0;
  double lsi_ratio = 0.0;
};

/// Ratios for member i of a family against mu_Q; skipped when the energy gap vanishes.
inline SharpnessSample sharpness_sample(const Potential& q, const EquilibriumResult& eq, MeasureFamily family,
                                        std::uint64_t seed, int i, int half_bandwidth) {
  const auto [mu, label] = family_member(family, seed, i, half_bandwidth);
  SharpnessSample s;
  s.index = i;
  s.label = "#" + std::to_string(i) + " " + label;
  const double gap = energy(q, mu) - eq.energy;
  if (!(gap > 1e-14)) {
    s.skipped = true;
    return s;
  }
  const double w2 = modified_wasserstein(mu, eq.measure, 2.0).value;
  const double w2s = circle_wasserstein(mu, eq.measure, 2.0);
  s.transport_ratio = w2 > 0 ? gap / (w2 * w2) : std::numeric_limits<double>::infinity();
  s.standard_transport_ratio = w2s > 0 ? gap / (w2s * w2s) : std::numeric_limits<double>::infinity();
  s.lsi_ratio = fisher_information_IQ(q, mu) / (4.0 * gap);
  return s;
}

inline SharpnessSummary summarize_sharpness(MeasureFamily family, const std::vector<SharpnessSample>& samples) {
  SharpnessSummary s;
  s.family = to_string(family);
  s.count = static_cast<int>(samples.size());
  for (const auto& x : samples) {
    if (x.skipped) {
      ++s.skipped;
      continue;
    }
    ++s.evaluated;
    if (x.transport_ratio < s.min_transport_ratio) {
      s.min_transport_ratio = x.transport_ratio;
      s.transport_argmin = x.label;
    }
    s.min_standard_transport_ratio = std::min(s.min_standard_transport_ratio, x.standard_transport_ratio);
    if (x.lsi_ratio < s.min_lsi_ratio) {
      s.min_lsi_ratio = x.lsi_ratio;
      s.lsi_argmin = x.label;
    }
  }
  s.transport_exceeds_half = s.min_transport_ratio > 0.5;
  return s;
}

/// Ratios probing the optimal transport and log-Sobolev constants over a measure family.
inline SharpnessSummary sharpness_scan(const Potential& q, MeasureFamily family, int count, std::uint64_t seed = 42,
                                       int half_bandwidth = 64) {
  const auto eq = solve_equilibrium(q);
  std::vector<SharpnessSample> samples;
  for (int i = 0; i < count; ++i) samples.push_back(sharpness_sample(q, eq, family, seed, i, half_bandwidth));
  return summarize_sharpness(family, samples);
}

// ---------------------------------------------------------------------------------------------
// Hierarchy experiments

struct LinearizationPoint {
  double t = 0.0;
  double lsi_slack = 0.0;       ///< I_Q/(2 rho) - (E_Q - E_Q(mu_Q)) at mu_{Q + t f}
  double scaled = 0.0;          ///< lsi_slack / t^2
  double poincare_target = 0.0; ///< Poincare slack of f at mu_Q with constant rho/2, divided by 2 rho
};

/// LSI slack along mu_t = mu_Q - t N f alpha against its predicted t^2 coefficient.
inline LinearizationPoint lsi_linearization(const Potential& q, const FourierSeries& f, double rho, double t) {
  const auto base = solve_equilibrium(q);
  FourierSeries moved = q.series();
  moved += t * f;
  const auto mt = solve_equilibrium(Potential(moved, q.grid())).measure;
  LinearizationPoint p;
  p.t = t;
  const double gap = energy(q, mt) - base.energy;
  p.lsi_slack = fisher_information_IQ(q, mt) / (2.0 * rho) - gap;
  p.scaled = p.lsi_slack / (t * t);
  const auto pr = verify_poincare(base.measure, 0.5 * rho, f);
  p.poincare_target = pr.slack / (2.0 * rho);
  return p;
}

/**
 * \brief Experimental: energy flow j_t / (a + rho t) along nu_t = mu_{Q - h_t}, h_t = (a + rho t) g_t - j_t,
 * with g_t the Hopf-Lax evolution of g. Returns the ratio at each time step.
 */
struct FlowSample {
  double t = 0.0;
  double j = 0.0;
  double ratio = 0.0;
};

inline std::vector<FlowSample> lsi_transport_flow(const Potential& q, const FourierSeries& g, double lambda, double rho,
                                                  double a, int steps, double t_end = 1.0) {
  if (!(a > 0.0)) throw DomainError("flow offset must be positive");
  const double eq = equilibrium_energy(q);
  const int grid = q.grid();
  std::vector<FlowSample> out;
  for (int k = 0; k <= steps; ++k) {
    const double t = t_end * k / steps;
    std::vector<double> gt;
    if (k == 0) gt = g.real_samples(grid);
    else gt = hopf_lax(g, lambda, t, grid);
    FourierSeries gs = FourierSeries::from_grid(gt).resized(q.half_bandwidth());
    const double scale = a + rho * t;
    // j solves j = E_Q - E_{Q - scale g_t + j}; constants shift energy one-for-one, so j = E_Q - E_{Q - scale g_t} - j.
    FourierSeries shifted = q.series();
    shifted -= scale * gs;
    const double e = equilibrium_energy(Potential(shifted, grid));
    const double j = 0.5 * (eq - e);
    out.push_back({t, j, j / scale});
  }
  return out;
}

} // namespace cfi
