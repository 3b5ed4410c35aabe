#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "cfi/errors.hpp"
#include "cfi/fft.hpp"

namespace cfi {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Default half-bandwidth and the oversampled grid used for pointwise work.
inline constexpr int default_half_bandwidth = 512;
inline constexpr int default_grid_size = 4 * default_half_bandwidth;

/// Smallest power-of-two grid that resolves products of three series of half-bandwidth n.
inline int grid_for(int half_bandwidth) {
  return static_cast<int>(detail::next_power_of_two(static_cast<std::size_t>(std::max(16, 4 * half_bandwidth))));
}

/**
 * \brief Truncated Fourier series on the unit circle.
 *
 * Coefficients follow a_n = integral of f(w) w^{-n} against normalised arc length,
 * stored for -N <= n <= N. Real-valued series keep a_{-n} = conj(a_n).
 */
class FourierSeries {
public:
  FourierSeries() : half_bandwidth_(0), coeffs_(1, cplx{0.0, 0.0}), real_valued_(true) {}

  FourierSeries(int half_bandwidth, std::vector<cplx> coeffs, bool real_valued)
      : half_bandwidth_(half_bandwidth), coeffs_(std::move(coeffs)), real_valued_(real_valued) {
    if (half_bandwidth_ < 0) throw InvalidInput("negative half-bandwidth");
    if (coeffs_.size() != static_cast<std::size_t>(2 * half_bandwidth_ + 1))
      throw InvalidInput("coefficient vector must have length 2N+1");
    double scale = 1.0;
    for (const auto& c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidInput("non-finite coefficient");
      scale = std::max(scale, std::abs(c));
    }
    if (real_valued_) {
      for (int n = 0; n <= half_bandwidth_; ++n) {
        const cplx a = coeffs_[index(n)];
        const cplx b = std::conj(coeffs_[index(-n)]);
        if (std::abs(a - b) > 1e-12 * scale) throw InvalidInput("coefficients are not Hermitian for a real series");
        const cplx avg = 0.5 * (a + b);
        coeffs_[index(n)] = avg;
        coeffs_[index(-n)] = std::conj(avg);
      }
    }
  }

  static FourierSeries zero(int half_bandwidth, bool real_valued = true) {
    return FourierSeries(half_bandwidth, std::vector<cplx>(2 * half_bandwidth + 1), real_valued);
  }

  /// Series with prescribed modes; for real series the conjugate partner is filled in.
  static FourierSeries from_modes(int half_bandwidth, const std::vector<std::pair<int, cplx>>& modes,
                                  bool real_valued = true) {
    FourierSeries f = zero(half_bandwidth, real_valued);
    for (const auto& [n, value] : modes) f.set(n, value);
    return f;
  }

  /// Discrete Fourier interpolant of real samples at 2 pi j / M, with N = M/2 - 1.
  static FourierSeries from_grid(const std::vector<double>& samples) {
    std::vector<cplx> values(samples.begin(), samples.end());
    return from_samples(values, true);
  }

  static FourierSeries from_complex_grid(const std::vector<cplx>& samples) { return from_samples(samples, false); }

  int half_bandwidth() const { return half_bandwidth_; }
  bool real_valued() const { return real_valued_; }
  const std::vector<cplx>& coefficients() const { return coeffs_; }

  cplx operator[](int n) const {
    if (n < -half_bandwidth_ || n > half_bandwidth_) return {0.0, 0.0};
    return coeffs_[index(n)];
  }

  void set(int n, cplx value) {
    if (n < -half_bandwidth_ || n > half_bandwidth_) throw InvalidInput("mode outside bandwidth");
    if (real_valued_) {
      if (n == 0) value = {value.real(), 0.0};
      coeffs_[index(-n)] = std::conj(value);
    }
    coeffs_[index(n)] = value;
  }

  /// Largest |n| carrying a coefficient above the threshold.
  int degree(double threshold = 0.0) const {
    for (int n = half_bandwidth_; n > 0; --n)
      if (std::abs((*this)[n]) > threshold || std::abs((*this)[-n]) > threshold) return n;
    return 0;
  }

  cplx mean() const { return coeffs_[index(0)]; }

  FourierSeries derivative() const {
    FourierSeries out = *this;
    for (int n = -half_bandwidth_; n <= half_bandwidth_; ++n) out.coeffs_[index(n)] *= cplx{0.0, double(n)};
    return out;
  }

  /// Zero-pads or truncates to a new half-bandwidth.
  FourierSeries resized(int half_bandwidth) const {
    FourierSeries out = zero(half_bandwidth, real_valued_);
    const int m = std::min(half_bandwidth, half_bandwidth_);
    for (int n = -m; n <= m; ++n) out.coeffs_[out.index(n)] = (*this)[n];
    return out;
  }

  FourierSeries conjugate() const {
    FourierSeries out = zero(half_bandwidth_, real_valued_);
    for (int n = -half_bandwidth_; n <= half_bandwidth_; ++n) out.coeffs_[index(n)] = std::conj((*this)[-n]);
    return out;
  }

  FourierSeries as_complex() const {
    FourierSeries out = *this;
    out.real_valued_ = false;
    return out;
  }

  /// Samples at 2 pi j / M, j = 0..M-1. Modes beyond the grid alias exactly as point samples do.
  std::vector<cplx> samples(int grid) const {
    if (grid <= 0) throw InvalidInput("grid size must be positive");
    std::vector<cplx> spec(grid);
    for (int n = -half_bandwidth_; n <= half_bandwidth_; ++n) {
      const int k = ((n % grid) + grid) % grid;
      spec[k] += coeffs_[index(n)];
    }
    return detail::backward_dft(spec);
  }

  std::vector<double> real_samples(int grid) const {
    const auto values = samples(grid);
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) out[j] = values[j].real();
    return out;
  }

  cplx value_at(double x) const { return value_and_derivatives_at(x)[0]; }

  /// f, f', f'' at angle x.
  std::array<cplx, 3> value_and_derivatives_at(double x) const {
    std::array<cplx, 3> acc{coeffs_[index(0)], cplx{}, cplx{}};
    const cplx step = std::polar(1.0, x);
    cplx wp = 1.0, wm = 1.0;
    for (int n = 1; n <= half_bandwidth_; ++n) {
      if (n % 64 == 0) {
        wp = std::polar(1.0, n * x);
        wm = std::conj(wp);
      } else {
        wp *= step;
        wm = std::conj(wp);
      }
      const cplx p = coeffs_[index(n)] * wp;
      const cplx m = coeffs_[index(-n)] * wm;
      const double dn = n;
      acc[0] += p + m;
      acc[1] += cplx{0.0, dn} * (p - m);
      acc[2] += -dn * dn * (p + m);
    }
    if (real_valued_)
      for (auto& v : acc) v = {v.real(), 0.0};
    return acc;
  }

  double real_value_at(double x) const { return value_at(x).real(); }

  FourierSeries& operator+=(const FourierSeries& other) { return combine(other, 1.0); }
  FourierSeries& operator-=(const FourierSeries& other) { return combine(other, -1.0); }
  FourierSeries& operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  FourierSeries& operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    if (s.imag() != 0.0) real_valued_ = false;
    return *this;
  }

  friend FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
  friend FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
  friend FourierSeries operator*(double s, FourierSeries a) { return a *= s; }
  friend FourierSeries operator*(cplx s, FourierSeries a) { return a *= s; }

  /// Maximum coefficient difference over the union of bandwidths.
  friend double max_coeff_diff(const FourierSeries& a, const FourierSeries& b) {
    const int m = std::max(a.half_bandwidth_, b.half_bandwidth_);
    double d = 0.0;
    for (int n = -m; n <= m; ++n) d = std::max(d, std::abs(a[n] - b[n]));
    return d;
  }

private:
  std::size_t index(int n) const { return static_cast<std::size_t>(n + half_bandwidth_); }

  FourierSeries& combine(const FourierSeries& other, double sign) {
    if (other.half_bandwidth_ > half_bandwidth_) *this = resized(other.half_bandwidth_);
    for (int n = -other.half_bandwidth_; n <= other.half_bandwidth_; ++n) coeffs_[index(n)] += sign * other[n];
    real_valued_ = real_valued_ && other.real_valued_;
    return *this;
  }

  static FourierSeries from_samples(const std::vector<cplx>& values, bool real_valued) {
    const std::size_t m = values.size();
    if (m < 4 || !detail::is_power_of_two(m)) throw InvalidInput("grid length must be a power of two >= 4");
    for (const auto& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidInput("non-finite grid sample");
    const auto spec = detail::forward_dft(values);
    const int half = static_cast<int>(m / 2) - 1;
    std::vector<cplx> coeffs(2 * half + 1);
    const double inv = 1.0 / static_cast<double>(m);
    for (int n = -half; n <= half; ++n) {
      const int k = ((n % int(m)) + int(m)) % int(m);
      coeffs[n + half] = spec[k] * inv;
    }
    if (real_valued)
      for (int n = 0; n <= half; ++n) {
        const cplx avg = 0.5 * (coeffs[n + half] + std::conj(coeffs[half - n]));
        coeffs[n + half] = avg;
        coeffs[half - n] = std::conj(avg);
      }
    return FourierSeries(half, std::move(coeffs), real_valued);
  }

  int half_bandwidth_;
  std::vector<cplx> coeffs_;
  bool real_valued_;
};

/// Inner product against normalised arc length: sum of f_n conj(g_n).
inline cplx inner(const FourierSeries& f, const FourierSeries& g) {
  const int m = std::min(f.half_bandwidth(), g.half_bandwidth());
  cplx s{};
  for (int n = -m; n <= m; ++n) s += f[n] * std::conj(g[n]);
  return s;
}

/// Integral of the pointwise product f g against normalised arc length.
inline cplx integral_of_product(const FourierSeries& f, const FourierSeries& g) {
  const int m = std::min(f.half_bandwidth(), g.half_bandwidth());
  cplx s{};
  for (int n = -m; n <= m; ++n) s += f[n] * g[-n];
  return s;
}

inline double l2_norm_sq(const FourierSeries& f) { return inner(f, f).real(); }

/// Grid point 2 pi j / M.
inline double grid_angle(int j, int grid) { return two_pi * static_cast<double>(j) / static_cast<double>(grid); }

/// Average of samples, the trapezoid rule for periodic integrands.
inline double grid_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

} // namespace cfi
