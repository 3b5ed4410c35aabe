#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cfi/cfi.hpp"

namespace cfi::app {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_pass = 0, exit_usage = 1, exit_failed = 2 };

struct RunConfig {
  int bandwidth = default_half_bandwidth;
  int grid = default_grid_size;
  std::uint64_t seed = 42;
  int count = -1; ///< suite default when negative
  double rho = 0.25;
  int jobs = 1;
  double tolerance = slack_tolerance;
  std::string suite;
  std::vector<std::string> potentials;
  std::string family = "random-smooth";
  double weight = 0.5;
  double p = 2.0;
  bool modified = true;
  double mass = 1.0;
  std::string functional = "energy";
  std::string mu, nu;
  std::string out, csv;

  /// Throws InvalidInput naming the first bad field.
  void validate() const;
  /// Overlay the fields present in a config JSON object.
  void merge_json(const json& j);
  json constants() const;
};

int default_count(const std::string& suite);

struct SuiteResult {
  std::vector<InequalityReport> reports;
  std::vector<int> instance_of; ///< instance index of each report
  json extras = json::object();
  int failures_outside_reports = 0;
};

/// Runs f(i) for i in [0, count) on `jobs` threads; results are kept in index order.
void parallel_for(int count, int jobs, const std::function<void(int)>& f);

SuiteResult run_suite(const RunConfig& cfg);

json report_to_json(const InequalityReport& r);

/// Entry point shared by the tool and the tests; returns an exit code.
int run(int argc, const char* const* argv);

} // namespace cfi::app
