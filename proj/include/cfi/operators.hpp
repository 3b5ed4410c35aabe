#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>

#include "cfi/errors.hpp"
#include "cfi/fourier_series.hpp"

namespace cfi {

/**
 * \brief Fourier-diagonal and shift operators on the circle.
 *
 * E: a_n/|n|; N: |n| a_n; M: (|n|-1) a_n on zero-mean functions; L: n^2 a_n;
 * U and V are the shifts z^n -> z^{n+1}, z^0 -> z + 1/z, z^{-n} -> z^{-n-1} and their adjoint.
 */
enum class OperatorKind { E, N, M, L, U, V };

inline std::string to_string(OperatorKind k) {
  switch (k) {
  case OperatorKind::E: return "E";
  case OperatorKind::N: return "N";
  case OperatorKind::M: return "M";
  case OperatorKind::L: return "L";
  case OperatorKind::U: return "U";
  case OperatorKind::V: return "V";
  }
  return "?";
}

/// Eigenvalue of a diagonal operator on z^n.
inline double eigenvalue(OperatorKind kind, int n) {
  const double m = std::abs(n);
  switch (kind) {
  case OperatorKind::E: return n == 0 ? 0.0 : 1.0 / m;
  case OperatorKind::N: return m;
  case OperatorKind::M: return n == 0 ? 0.0 : m - 1.0;
  case OperatorKind::L: return m * m;
  default: throw DomainError("shift operators have no eigenvalue table");
  }
}

inline FourierSeries apply(OperatorKind kind, const FourierSeries& f) {
  const int nb = f.half_bandwidth();
  if (kind == OperatorKind::U) {
    auto out = FourierSeries::zero(nb + 1, f.real_valued());
    auto c = out.coefficients();
    for (int n = -nb; n <= nb; ++n) {
      const cplx a = f[n];
      if (n >= 1) c[n + 1 + nb + 1] += a;
      else if (n <= -1) c[n - 1 + nb + 1] += a;
      else {
        c[1 + nb + 1] += a;
        c[-1 + nb + 1] += a;
      }
    }
    return FourierSeries(nb + 1, std::move(c), f.real_valued());
  }
  if (kind == OperatorKind::V) {
    auto c = FourierSeries::zero(nb, f.real_valued()).coefficients();
    for (int n = -nb; n <= nb; ++n) {
      const cplx a = f[n];
      if (n >= 1) c[n - 1 + nb] += a;
      else if (n <= -1) c[n + 1 + nb] += a;
    }
    return FourierSeries(nb, std::move(c), f.real_valued());
  }
  auto c = f.coefficients();
  for (int n = -nb; n <= nb; ++n) c[n + nb] *= eigenvalue(kind, n);
  return FourierSeries(nb, std::move(c), f.real_valued());
}

/// Projection onto constants.
inline FourierSeries project_constants(const FourierSeries& f) {
  auto out = FourierSeries::zero(f.half_bandwidth(), f.real_valued());
  out.set(0, f[0]);
  return out;
}

/// <N phi, psi> from the diagonal action.
inline cplx n_form(const FourierSeries& phi, const FourierSeries& psi) { return inner(apply(OperatorKind::N, phi), psi); }

/**
 * \brief Double integral of (phi(z)-phi(w)) conj(psi(z)-psi(w)) / |z-w|^2 over the torus.
 *
 * Trapezoid rule on a grid x grid lattice; the diagonal takes the limit phi'(z) conj(psi'(z)).
 */
inline cplx kernel_form_N(const FourierSeries& phi, const FourierSeries& psi, int grid = 0) {
  const int nb = std::max(phi.half_bandwidth(), psi.half_bandwidth());
  const int m = grid > 0 ? grid : grid_for(nb);
  const auto a = phi.samples(m);
  const auto b = psi.samples(m);
  const auto da = phi.derivative().samples(m);
  const auto db = psi.derivative().samples(m);
  std::vector<double> inv_chord(m, 0.0);
  for (int d = 1; d < m; ++d) {
    const double s = std::sin(pi * d / m);
    inv_chord[d] = 1.0 / (4.0 * s * s);
  }
  cplx total{};
  for (int j = 0; j < m; ++j) {
    cplx row = da[j] * std::conj(db[j]);
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      const int d = j > k ? j - k : k - j;
      row += (a[j] - a[k]) * std::conj(b[j] - b[k]) * inv_chord[d];
    }
    total += row;
  }
  return total / (static_cast<double>(m) * m);
}

inline double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(k));
}

/// Squared norm of the (k-1)-fold non-commutative derivative: sum |a_n|^2 C(|n|-1, k-1).
inline double dc_norm_sq(const FourierSeries& phi, int k) {
  if (k < 1) throw DomainError("derivative level must be >= 1");
  double acc = 0.0;
  for (int n = -phi.half_bandwidth(); n <= phi.half_bandwidth(); ++n) {
    if (n == 0) continue;
    const double w = binomial(std::abs(n) - 1, k - 1);
    if (w != 0.0) acc += std::norm(phi[n]) * w;
  }
  return acc;
}

/// Squared norms of the iterated non-commutative derivatives of a polynomial.
struct TensorDerivativeNorms {
  int degree = 0;
  std::vector<double> norms; ///< norms[k] = ||d_c^{(k)} phi||^2, k = 0..degree-1

  static TensorDerivativeNorms compute(const FourierSeries& phi) {
    TensorDerivativeNorms t;
    t.degree = phi.degree();
    for (int k = 0; k < t.degree; ++k) t.norms.push_back(dc_norm_sq(phi, k + 1));
    return t;
  }
};

struct HoudreKaganBounds {
  double lower = 0.0;
  double upper = 0.0;
  double exact = 0.0; ///< <N phi, phi>
};

/// Alternating bounds on <N phi, phi> from derivative norms of phi', truncated at 2k and 2k-1 terms.
inline HoudreKaganBounds houdre_kagan_bounds(const FourierSeries& phi, int k) {
  if (k < 1) throw DomainError("truncation order must be >= 1");
  const FourierSeries d = phi.derivative();
  HoudreKaganBounds b;
  double partial = 0.0;
  for (int l = 1; l <= 2 * k; ++l) {
    const double sign = (l % 2 == 1) ? 1.0 : -1.0;
    partial += sign * dc_norm_sq(d, l) / l;
    if (l == 2 * k - 1) b.upper = partial;
  }
  b.lower = partial;
  b.exact = n_form(phi, phi).real();
  return b;
}

} // namespace cfi
