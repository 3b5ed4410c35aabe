#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "cfi/errors.hpp"

namespace cfi::detail {

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t m) {
  std::size_t p = 1;
  while (p < m) p <<= 1;
  return p;
}

/** \brief Plan cache for FFTW. Planning is serialised, execution is not. */
class FftPlans {
public:
  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  fftw_plan get(int size, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(size, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(size), out(size);
    fftw_plan plan = fftw_plan_dft_1d(size, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

private:
  FftPlans() = default;
  ~FftPlans() {
    for (auto& entry : plans_) fftw_destroy_plan(entry.second);
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

/// Unnormalised transform, out[k] = sum_j in[j] exp(sign * 2 pi i j k / m).
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in, int sign) {
  const int m = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.size());
  if (m == 0) return out;
  fftw_plan plan = FftPlans::instance().get(m, sign);
  auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

inline std::vector<std::complex<double>> forward_dft(const std::vector<std::complex<double>>& in) {
  return dft(in, FFTW_FORWARD);
}

inline std::vector<std::complex<double>> backward_dft(const std::vector<std::complex<double>>& in) {
  return dft(in, FFTW_BACKWARD);
}

} // namespace cfi::detail
