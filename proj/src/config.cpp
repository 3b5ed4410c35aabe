#include "app.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace cfi::app {

namespace {

template <class T>
T field(const json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw io::FieldError(std::string("config.") + name, "wrong type");
  }
}

} // namespace

void RunConfig::validate() const {
  if (bandwidth < 1) throw io::FieldError("bandwidth", "must be >= 1");
  if (grid < 4 * bandwidth) throw io::FieldError("grid", "must be at least 4 * bandwidth");
  if (!cfi::detail::is_power_of_two(grid)) throw io::FieldError("grid", "must be a power of two");
  if (jobs < 1) throw io::FieldError("jobs", "must be >= 1");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw io::FieldError("rho", "must be positive");
  if (!(tolerance > 0.0)) throw io::FieldError("tolerance", "must be positive");
  if (!(p >= 1.0) || !std::isfinite(p)) throw io::FieldError("p", "must be a finite real >= 1");
  if (!(weight > 0.0 && weight < 1.0)) throw io::FieldError("weight", "must lie in (0,1)");
  if (!(mass > 0.0)) throw io::FieldError("mass", "must be positive");
}

void RunConfig::merge_json(const json& j) {
  if (!j.is_object()) throw io::FieldError("config", "expected an object");
  if (j.contains("bandwidth")) bandwidth = field<int>(j, "bandwidth");
  if (j.contains("grid")) grid = field<int>(j, "grid");
  if (j.contains("seed")) seed = field<std::uint64_t>(j, "seed");
  if (j.contains("count")) count = field<int>(j, "count");
  if (j.contains("rho")) rho = field<double>(j, "rho");
  if (j.contains("jobs")) jobs = field<int>(j, "jobs");
  if (j.contains("tolerance")) tolerance = field<double>(j, "tolerance");
  if (j.contains("suite")) suite = field<std::string>(j, "suite");
  if (j.contains("family")) family = field<std::string>(j, "family");
  if (j.contains("weight")) weight = field<double>(j, "weight");
  if (j.contains("p")) p = field<double>(j, "p");
  if (j.contains("mass")) mass = field<double>(j, "mass");
  if (j.contains("potential")) potentials = {field<std::string>(j, "potential")};
  if (j.contains("potentials")) potentials = field<std::vector<std::string>>(j, "potentials");
}

json RunConfig::constants() const {
  return {{"bandwidth", bandwidth},
          {"grid", grid},
          {"seed", seed},
          {"rho", rho},
          {"slack_tolerance", tolerance},
          {"density_tolerance", density_tolerance},
          {"support_tolerance", support_tolerance}};
}

int default_count(const std::string& suite) {
  if (suite == "poincare") return 1000;
  if (suite == "transport" || suite == "lsi" || suite == "hwi" || suite == "chain" || suite == "hk") return 200;
  if (suite == "bm") return 12;
  if (suite == "hierarchy") return 50;
  if (suite == "sharpness") return 500;
  return 100;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& f) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const int n = std::min(jobs, count);
  for (int w = 0; w < n; ++w)
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

json report_to_json(const InequalityReport& r) {
  return {{"name", to_string(r.name)},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"slack", r.slack},
          {"rho_used", r.rho_used},
          {"tolerance", r.tolerance},
          {"instance_digest", r.instance_digest},
          {"passed", r.passed},
          {"in_hypothesis", r.in_hypothesis},
          {"note", r.note}};
}

} // namespace cfi::app
