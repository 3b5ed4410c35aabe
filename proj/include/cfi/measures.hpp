#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "cfi/errors.hpp"
#include "cfi/fourier_series.hpp"

namespace cfi {

inline constexpr double density_tolerance = 1e-10;

/// Circle derivative, a_n -> i n a_n.
inline FourierSeries circle_derivative(const FourierSeries& f) { return f.derivative(); }

/**
 * \brief Real external field Q on the circle together with the grid minimum of Q''.
 */
class Potential {
public:
  Potential() : Potential(FourierSeries::zero(0)) {}

  explicit Potential(FourierSeries series, int grid = 0) : series_(std::move(series)) {
    if (!series_.real_valued()) throw InvalidInput("potential must be real valued");
    grid_ = grid > 0 ? grid : grid_for(series_.half_bandwidth());
    const auto q2 = series_.derivative().derivative().real_samples(grid_);
    second_derivative_min_ = *std::min_element(q2.begin(), q2.end());
  }

  const FourierSeries& series() const { return series_; }
  int half_bandwidth() const { return series_.half_bandwidth(); }
  int grid() const { return grid_; }
  double second_derivative_min() const { return second_derivative_min_; }
  double value_at(double x) const { return series_.real_value_at(x); }
  double mean() const { return series_.mean().real(); }

private:
  FourierSeries series_;
  int grid_ = 0;
  double second_derivative_min_ = 0.0;
};

/**
 * \brief Probability measure on the circle: a density against Haar measure, or a unit atom.
 */
class CircleMeasure {
public:
  enum class Kind { density, dirac };

  /// Haar measure at bandwidth 0.
  CircleMeasure() : density_(FourierSeries::from_modes(0, {{0, 1.0}})), grid_(grid_for(0)) { samples_.assign(grid_, 1.0); }

  /// Density measure; small negative excursions within tol are clipped, mass is renormalised.
  static CircleMeasure from_density(FourierSeries density, int grid = 0, double tol = density_tolerance) {
    if (!density.real_valued()) throw InvalidMeasure("density must be real valued");
    const double mass = density.mean().real();
    if (!(mass > 0.0)) throw InvalidMeasure("density has non-positive total mass");
    density *= 1.0 / mass;
    CircleMeasure mu;
    mu.kind_ = Kind::density;
    mu.grid_ = grid > 0 ? grid : grid_for(density.half_bandwidth());
    auto samples = density.real_samples(mu.grid_);
    const double lowest = *std::min_element(samples.begin(), samples.end());
    if (lowest < -tol) throw InvalidMeasure("density is negative (min " + std::to_string(lowest) + ")");
    if (lowest < 0.0) {
      for (double& v : samples) v = std::max(v, 0.0);
      density = FourierSeries::from_grid(samples).resized(density.half_bandwidth());
      density *= 1.0 / density.mean().real();
      samples = density.real_samples(mu.grid_);
      for (double& v : samples) v = std::max(v, 0.0);
    }
    density.set(0, 1.0);
    mu.density_ = std::move(density);
    mu.samples_ = std::move(samples);
    return mu;
  }

  /// Density given by samples at 2 pi j / M.
  static CircleMeasure from_samples(const std::vector<double>& samples, double tol = density_tolerance) {
    const int grid = static_cast<int>(samples.size());
    return from_density(FourierSeries::from_grid(samples), grid, tol);
  }

  static CircleMeasure haar(int half_bandwidth) {
    CircleMeasure mu;
    mu.kind_ = Kind::density;
    mu.density_ = FourierSeries::zero(half_bandwidth);
    mu.density_.set(0, 1.0);
    mu.grid_ = grid_for(half_bandwidth);
    mu.samples_.assign(mu.grid_, 1.0);
    return mu;
  }

  static CircleMeasure dirac(double angle) {
    if (!std::isfinite(angle)) throw InvalidInput("non-finite atom angle");
    CircleMeasure mu;
    mu.kind_ = Kind::dirac;
    mu.atom_angle_ = std::fmod(angle, two_pi);
    if (mu.atom_angle_ < 0.0) mu.atom_angle_ += two_pi;
    mu.density_ = FourierSeries::zero(0);
    mu.grid_ = 0;
    mu.samples_.clear();
    return mu;
  }

  Kind kind() const { return kind_; }
  bool is_dirac() const { return kind_ == Kind::dirac; }
  double atom_angle() const { return atom_angle_; }
  double mass() const { return 1.0; }
  const FourierSeries& density() const { return density_; }
  const std::vector<double>& samples() const { return samples_; }
  int grid() const { return grid_; }
  int half_bandwidth() const { return density_.half_bandwidth(); }

  /// m_n = integral of z^n d mu.
  cplx moment(int n) const {
    if (is_dirac()) return std::polar(1.0, n * atom_angle_);
    return density_[-n];
  }

  double min_density() const {
    if (is_dirac()) return 0.0;
    return *std::min_element(samples_.begin(), samples_.end());
  }

  /// True for the Haar measure (constant density).
  bool is_haar(double tol = 1e-13) const {
    if (is_dirac()) return false;
    return density_.degree(tol) == 0;
  }

  /// Integral of a real function against the measure.
  double integrate(const FourierSeries& f) const {
    if (is_dirac()) return f.real_value_at(atom_angle_);
    return integral_of_product(f, density_).real();
  }

private:
  Kind kind_ = Kind::density;
  FourierSeries density_;
  std::vector<double> samples_;
  double atom_angle_ = 0.0;
  int grid_ = 0;
};

namespace detail {

/// Exact CDF of the density restricted to [base, x], normalised by 2 pi.
inline double exact_cdf(const FourierSeries& density, double base, double x) {
  double acc = density[0].real() * (x - base) / two_pi;
  const cplx sx = std::polar(1.0, x), sb = std::polar(1.0, base);
  cplx wx = 1.0, wb = 1.0;
  for (int n = 1; n <= density.half_bandwidth(); ++n) {
    if (n % 64 == 0) {
      wx = std::polar(1.0, n * x);
      wb = std::polar(1.0, n * base);
    } else {
      wx *= sx;
      wb *= sb;
    }
    const cplx a = density[n];
    if (a == cplx{}) continue;
    acc += 2.0 * (a * (wx - wb) / cplx{0.0, two_pi * n}).real();
  }
  return acc;
}

/// Mean of the lift at base: base + pi - i sum_{n != 0} a_n e^{i n base} / n.
inline double lift_mean(const FourierSeries& density, double base) {
  double acc = base + pi * density[0].real();
  for (int n = 1; n <= density.half_bandwidth(); ++n) {
    const cplx term = density[n] * std::polar(1.0, n * base) / double(n);
    acc += 2.0 * (cplx{0.0, -1.0} * term).real();
  }
  return acc;
}

} // namespace detail

/**
 * \brief Circle measure unrolled to [base, base + 2 pi): CDF and density on a uniform grid.
 *
 * Between grid points the CDF is the monotone cubic Hermite interpolant of the exact values;
 * quantile() can polish with Newton steps on the exact spectral CDF.
 */
class LiftedMeasure {
public:
  LiftedMeasure() = default;

  LiftedMeasure(const CircleMeasure& mu, double base, int grid = 0) {
    if (mu.is_dirac()) throw UnsupportedMeasure("Dirac measures cannot be lifted numerically");
    if (!std::isfinite(base)) throw InvalidInput("non-finite lift base");
    base_ = base;
    grid_ = grid > 0 ? grid : mu.grid();
    density_ = std::make_shared<const FourierSeries>(mu.density());
    const FourierSeries& a = *density_;
    const int nb = a.half_bandwidth();
    auto shifted = FourierSeries::zero(nb, false);
    auto anti = FourierSeries::zero(nb, false);
    for (int n = -nb; n <= nb; ++n) {
      const cplx c = a[n] * std::polar(1.0, n * base);
      shifted.set(n, c);
      if (n != 0) anti.set(n, c / cplx{0.0, two_pi * n});
    }
    const auto s = anti.samples(grid_);
    const auto d = shifted.samples(grid_);
    cdf_.resize(grid_ + 1);
    pdf_.resize(grid_ + 1);
    for (int j = 0; j < grid_; ++j) {
      cdf_[j] = static_cast<double>(j) / grid_ + (s[j] - s[0]).real();
      pdf_[j] = std::max(0.0, d[j].real()) / two_pi;
    }
    cdf_[grid_] = 1.0;
    pdf_[grid_] = pdf_[0];
    cdf_[0] = 0.0;
    for (int j = 1; j <= grid_; ++j) cdf_[j] = std::clamp(std::max(cdf_[j], cdf_[j - 1]), 0.0, 1.0);
    mean_ = detail::lift_mean(a, base);
  }

  double base() const { return base_; }
  int grid() const { return grid_; }
  double mean() const { return mean_; }
  double step() const { return two_pi / grid_; }
  double point(int j) const { return base_ + step() * j; }
  const std::vector<double>& cdf_grid() const { return cdf_; }
  const std::vector<double>& pdf_grid() const { return pdf_; }
  const FourierSeries& density() const { return *density_; }

  /// F(x) for x in [base, base + 2 pi], Hermite interpolated.
  double cdf(double x) const {
    const double h = step();
    double r = (x - base_) / h;
    if (r <= 0.0) return 0.0;
    if (r >= grid_) return 1.0;
    int j = std::min(static_cast<int>(r), grid_ - 1);
    return hermite(j, r - j);
  }

  /// F(x) from the spectral antiderivative, no interpolation.
  double cdf_exact(double x) const {
    if (x <= base_) return 0.0;
    if (x >= base_ + two_pi) return 1.0;
    return detail::exact_cdf(*density_, base_, x);
  }

  /// Generalised inverse inf{x : F(x) >= s}.
  double quantile(double s, bool exact = false) const {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("quantile level outside [0,1]");
    if (s <= 0.0) return base_;
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), s);
    int j = static_cast<int>(it - cdf_.begin());
    if (j <= 0) return base_;
    if (j > grid_) j = grid_;
    const int cell = j - 1;
    double lo = 0.0, hi = 1.0;
    double tau = (cdf_[j] > cdf_[cell]) ? (s - cdf_[cell]) / (cdf_[j] - cdf_[cell]) : 1.0;
    const double h = step();
    for (int it2 = 0; it2 < 60; ++it2) {
      const double val = hermite(cell, tau) - s;
      if (std::abs(val) < 1e-15) break;
      if (val > 0) hi = tau; else lo = tau;
      const double der = hermite_derivative(cell, tau);
      double next = der > 0 ? tau - val / der : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - tau) < 1e-15) {
        tau = next;
        break;
      }
      tau = next;
    }
    double x = base_ + h * (cell + tau);
    if (exact) {
      double xl = base_ + h * cell, xr = base_ + h * j;
      for (int k = 0; k < 8; ++k) {
        const double val = cdf_exact(x) - s;
        if (val > 0) xr = x; else xl = x;
        const double der = std::max(0.0, density_->real_value_at(x)) / two_pi;
        double next = der > 0 ? x - val / der : 0.5 * (xl + xr);
        if (!(next >= xl && next <= xr)) next = 0.5 * (xl + xr);
        if (std::abs(next - x) < 1e-15) {
          x = next;
          break;
        }
        x = next;
      }
    }
    return x;
  }

  /// Mean recomputed from the CDF grid by integration by parts.
  double mean_from_cdf() const {
    const double h = step();
    double acc = 0.0;
    for (int j = 0; j < grid_; ++j) acc += cdf_[j] - static_cast<double>(j) / grid_;
    return base_ + pi - h * acc;
  }

  /// m_n recovered by pushing the lift forward through exp.
  cplx moment_from_cdf(int n) const {
    const double h = step();
    cplx acc{};
    for (int j = 0; j < grid_; ++j) acc += std::polar(1.0, n * point(j)) * (cdf_[j] - static_cast<double>(j) / grid_);
    return cplx{0.0, -double(n)} * h * acc;
  }

private:
  /// Fritsch-Carlson limited Hermite cubic on cell j at fraction tau.
  void slopes(int j, double& d0, double& d1) const {
    const double h = step();
    const double secant = (cdf_[j + 1] - cdf_[j]) / h;
    d0 = pdf_[j];
    d1 = pdf_[j + 1];
    if (secant <= 0.0) {
      d0 = d1 = 0.0;
      return;
    }
    const double a = d0 / secant, b = d1 / secant;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      d0 = t * a * secant;
      d1 = t * b * secant;
    }
  }

  double hermite(int j, double tau) const {
    double d0, d1;
    slopes(j, d0, d1);
    const double h = step();
    const double t2 = tau * tau, t3 = t2 * tau;
    return (2 * t3 - 3 * t2 + 1) * cdf_[j] + (t3 - 2 * t2 + tau) * h * d0 + (-2 * t3 + 3 * t2) * cdf_[j + 1] +
           (t3 - t2) * h * d1;
  }

  double hermite_derivative(int j, double tau) const {
    double d0, d1;
    slopes(j, d0, d1);
    const double h = step();
    const double t2 = tau * tau;
    return (6 * t2 - 6 * tau) * cdf_[j] + (3 * t2 - 4 * tau + 1) * h * d0 + (-6 * t2 + 6 * tau) * cdf_[j + 1] +
           (3 * t2 - 2 * tau) * h * d1;
  }

  double base_ = 0.0;
  int grid_ = 0;
  std::vector<double> cdf_;
  std::vector<double> pdf_;
  double mean_ = 0.0;
  std::shared_ptr<const FourierSeries> density_;
};

inline LiftedMeasure lift(const CircleMeasure& mu, double base, int grid = 0) { return LiftedMeasure(mu, base, grid); }

inline double quantile(const LiftedMeasure& lm, double s, bool exact = false) { return lm.quantile(s, exact); }

} // namespace cfi
