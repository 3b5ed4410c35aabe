#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include "cfi/fourier_series.hpp"
#include "cfi/measures.hpp"

namespace cfi {

/// 64-bit FNV-1a accumulator over raw bytes.
class Digest {
public:
  Digest& bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  Digest& add(double x) {
    if (x == 0.0) x = 0.0;
    return bytes(&x, sizeof x);
  }

  Digest& add(std::int64_t x) { return bytes(&x, sizeof x); }

  Digest& add(const std::string& s) { return bytes(s.data(), s.size()); }

  Digest& add(const FourierSeries& f) {
    add(static_cast<std::int64_t>(f.half_bandwidth()));
    for (const auto& c : f.coefficients()) add(c.real()).add(c.imag());
    return *this;
  }

  Digest& add(const CircleMeasure& mu) {
    if (mu.is_dirac()) return add(std::string("dirac")).add(mu.atom_angle());
    return add(std::string("density")).add(mu.density());
  }

  Digest& add(const Potential& q) { return add(q.series()); }

  std::uint64_t value() const { return state_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

} // namespace cfi
