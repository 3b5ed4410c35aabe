#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cfi/errors.hpp"
#include "cfi/fft.hpp"
#include "cfi/fourier_series.hpp"
#include "cfi/measures.hpp"

namespace cfi::io {

using json = nlohmann::json;

/// Input error carrying the JSON path of the offending field.
class FieldError : public InvalidInput {
public:
  FieldError(const std::string& field, const std::string& what)
      : InvalidInput("field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

namespace detail {

inline double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) throw FieldError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FieldError(field, "non-finite value");
  return v;
}

inline std::string kind_of(const json& j, const std::string& where) {
  if (!j.is_object()) throw FieldError(where, "expected an object");
  if (!j.contains("kind")) throw FieldError(where + ".kind", "missing");
  if (!j["kind"].is_string()) throw FieldError(where + ".kind", "expected a string");
  return j["kind"].get<std::string>();
}

/// {"coeffs": [[n, re, im], ...]}; for real series one of each +-n pair suffices.
inline FourierSeries fourier_from_json(const json& j, const std::string& where, bool real_valued, int min_bandwidth) {
  const std::string field = where + ".coeffs";
  if (!j.contains("coeffs")) throw FieldError(field, "missing");
  const json& c = j["coeffs"];
  if (!c.is_array()) throw FieldError(field, "expected an array of [n, re, im]");
  int nmax = min_bandwidth;
  std::vector<std::pair<int, cplx>> modes;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const json& e = c[i];
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw FieldError(f, "expected [n, re] or [n, re, im]");
    if (!e[0].is_number_integer()) throw FieldError(f + "[0]", "mode index must be an integer");
    const int n = e[0].get<int>();
    const double re = number_at(e[1], f + "[1]");
    const double im = e.size() == 3 ? number_at(e[2], f + "[2]") : 0.0;
    if (real_valued && n == 0 && im != 0.0) throw FieldError(f, "mode 0 of a real series must be real");
    modes.emplace_back(n, cplx{re, im});
    nmax = std::max(nmax, std::abs(n));
  }
  if (j.contains("bandwidth")) {
    if (!j["bandwidth"].is_number_integer() || j["bandwidth"].get<int>() < 0)
      throw FieldError(where + ".bandwidth", "expected a non-negative integer");
    nmax = std::max(nmax, j["bandwidth"].get<int>());
  }
  auto f = FourierSeries::zero(nmax, real_valued);
  for (const auto& [n, v] : modes) f.set(n, v);
  return f;
}

inline std::vector<double> samples_from_json(const json& j, const std::string& where) {
  const std::string field = where + ".samples";
  if (!j.contains("samples")) throw FieldError(field, "missing");
  const json& s = j["samples"];
  if (!s.is_array()) throw FieldError(field, "expected an array");
  if (s.size() < 2 || !cfi::detail::is_power_of_two(s.size())) throw FieldError(field, "length must be a power of two");
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = number_at(s[i], field + "[" + std::to_string(i) + "]");
  return out;
}

} // namespace detail

/// Real series from {"kind":"fourier",...} or {"kind":"grid",...}.
inline FourierSeries series_from_json(const json& j, int min_bandwidth = 0, const std::string& where = "$") {
  const std::string kind = detail::kind_of(j, where);
  if (kind == "fourier") return detail::fourier_from_json(j, where, true, min_bandwidth);
  if (kind == "grid") {
    auto f = FourierSeries::from_grid(detail::samples_from_json(j, where));
    return f.half_bandwidth() < min_bandwidth ? f.resized(min_bandwidth) : f;
  }
  if (kind == "zero") return FourierSeries::zero(min_bandwidth);
  throw FieldError(where + ".kind", "unknown kind '" + kind + "'");
}

inline Potential potential_from_json(const json& j, int min_bandwidth = 0, int grid = 0, const std::string& where = "$") {
  return Potential(series_from_json(j, min_bandwidth, where), grid);
}

/// Measure from fourier/grid density, {"kind":"dirac","angle":x} or {"kind":"haar"}.
inline CircleMeasure measure_from_json(const json& j, int min_bandwidth = 0, int grid = 0, const std::string& where = "$") {
  const std::string kind = detail::kind_of(j, where);
  try {
    if (kind == "dirac") {
      if (!j.contains("angle")) throw FieldError(where + ".angle", "missing");
      return CircleMeasure::dirac(detail::number_at(j["angle"], where + ".angle"));
    }
    if (kind == "haar") return CircleMeasure::haar(min_bandwidth);
    if (kind == "grid") {
      const auto s = detail::samples_from_json(j, where);
      auto f = FourierSeries::from_grid(s);
      if (f.half_bandwidth() < min_bandwidth) f = f.resized(min_bandwidth);
      return CircleMeasure::from_density(f, grid);
    }
    if (kind == "fourier") return CircleMeasure::from_density(detail::fourier_from_json(j, where, true, min_bandwidth), grid);
  } catch (const InvalidMeasure& e) {
    throw FieldError(where, e.what());
  }
  throw FieldError(where + ".kind", "unknown kind '" + kind + "'");
}

inline Potential load_potential(const std::string& path, int min_bandwidth = 0, int grid = 0) {
  try {
    return potential_from_json(read_json_file(path), min_bandwidth, grid);
  } catch (const FieldError& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

inline CircleMeasure load_measure(const std::string& path, int min_bandwidth = 0, int grid = 0) {
  try {
    return measure_from_json(read_json_file(path), min_bandwidth, grid);
  } catch (const FieldError& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

/// [[n, re, im], ...] over all stored modes.
inline json coeffs_to_json(const FourierSeries& f) {
  json out = json::array();
  for (int n = -f.half_bandwidth(); n <= f.half_bandwidth(); ++n) {
    const cplx c = f[n];
    out.push_back({n, c.real(), c.imag()});
  }
  return out;
}

inline json series_to_json(const FourierSeries& f) { return {{"kind", "fourier"}, {"coeffs", coeffs_to_json(f)}}; }

} // namespace cfi::io
