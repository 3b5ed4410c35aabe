#include "app.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

namespace cfi::app {

namespace {

struct Flags {
  std::optional<std::string> config, potential, mu, nu, suite, out, csv, family, name;
  std::optional<double> p, rho, mass, weight, tolerance;
  std::optional<int> count, bandwidth, grid, jobs;
  std::optional<std::uint64_t> seed;
  bool modified = false, standard = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--bandwidth", f.bandwidth, "half bandwidth N");
  cmd->add_option("--grid", f.grid, "grid size M (power of two, >= 4N)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--out", f.out, "output JSON path (stdout when absent)");
  cmd->add_option("--jobs", f.jobs, "worker threads");
  cmd->add_option("--tolerance", f.tolerance, "relative slack tolerance");
}

RunConfig build_config(const Flags& f) {
  RunConfig cfg;
  std::optional<std::string> path = f.config;
  if (!path) {
    if (const char* env = std::getenv("CFI_DEFAULT_CONFIG"); env && *env) path = std::string(env);
  }
  if (path) {
    try {
      cfg.merge_json(io::read_json_file(*path));
    } catch (const io::FieldError& e) {
      throw InvalidInput(*path + ": " + e.what());
    }
  }
  if (f.bandwidth) cfg.bandwidth = *f.bandwidth;
  if (f.grid) cfg.grid = *f.grid;
  else if (f.bandwidth && !path) cfg.grid = grid_for(cfg.bandwidth);
  if (f.seed) cfg.seed = *f.seed;
  if (f.count) cfg.count = *f.count;
  if (f.rho) cfg.rho = *f.rho;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.tolerance) cfg.tolerance = *f.tolerance;
  if (f.suite) cfg.suite = *f.suite;
  if (f.family) cfg.family = *f.family;
  if (f.weight) cfg.weight = *f.weight;
  if (f.p) cfg.p = *f.p;
  if (f.mass) cfg.mass = *f.mass;
  if (f.name) cfg.functional = *f.name;
  if (f.potential) cfg.potentials = {*f.potential};
  if (f.mu) cfg.mu = *f.mu;
  if (f.nu) cfg.nu = *f.nu;
  if (f.out) cfg.out = *f.out;
  if (f.csv) cfg.csv = *f.csv;
  if (f.standard) cfg.modified = false;
  cfg.validate();
  return cfg;
}

void emit(const RunConfig& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out);
  if (!os) throw InvalidInput("cannot write '" + cfg.out + "'");
  os << text;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write '" + path + "'");
  return os;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json header(const std::string& command, const RunConfig& cfg, const std::string& digest) {
  return {{"schema_version", schema_version}, {"command", command}, {"constants", cfg.constants()}, {"inputs_digest", digest}};
}

const std::string& need(const std::string& value, const char* flag) {
  if (value.empty()) throw InvalidInput(std::string("missing required option ") + flag);
  return value;
}

int cmd_equilibrium(const RunConfig& cfg) {
  if (cfg.potentials.empty()) throw InvalidInput("missing required option --potential");
  const auto loaded = io::load_potential(cfg.potentials.front());
  const int grid = std::max(cfg.grid, grid_for(loaded.half_bandwidth()));
  const Potential q(loaded.series(), grid);
  const auto eq = solve_equilibrium(q, cfg.mass);
  json j = header("equilibrium", cfg, Digest().add(q).add(cfg.mass).hex());
  j["mass"] = eq.mass;
  j["constant_C"] = eq.constant_C;
  j["energy"] = eq.energy;
  j["min_density"] = eq.min_density;
  j["second_derivative_min"] = q.second_derivative_min();
  j["density_grid"] = grid;
  j["density_samples"] = eq.density.real_samples(grid);
  j["coefficients"] = io::coeffs_to_json(eq.density);
  emit(cfg, j);
  return exit_pass;
}

int cmd_distance(const RunConfig& cfg) {
  const auto mu = io::load_measure(need(cfg.mu, "--mu"));
  const auto nu = io::load_measure(need(cfg.nu, "--nu"));
  json j = header("distance", cfg, Digest().add(mu).add(nu).add(cfg.p).add(std::int64_t(cfg.modified)).hex());
  j["p"] = cfg.p;
  j["kind"] = cfg.modified ? "modified" : "standard";
  if (cfg.modified) {
    const auto r = modified_wasserstein(mu, nu, cfg.p, !cfg.csv.empty());
    j["value"] = r.value;
    j["finite"] = r.finite();
    j["cut_u"] = r.cut_u;
    j["cut_v"] = r.cut_v;
    if (!cfg.csv.empty() && r.map) {
      auto os = open_csv(cfg.csv);
      os << "x,theta,weight\n";
      for (std::size_t k = 0; k < r.map->points.size(); ++k)
        os << fmt(r.map->points[k]) << ',' << fmt(r.map->image[k]) << ',' << fmt(r.map->weights[k]) << '\n';
    }
  } else {
    j["value"] = circle_wasserstein(mu, nu, cfg.p);
  }
  emit(cfg, j);
  return exit_pass;
}

int cmd_functional(const RunConfig& cfg) {
  FunctionalValue v;
  const std::string& name = cfg.functional;
  Digest d;
  d.add(name);
  if (name == "energy" || name == "IQ") {
    if (cfg.potentials.empty()) throw InvalidInput("missing required option --potential");
    const auto q = io::load_potential(cfg.potentials.front());
    const auto mu = io::load_measure(need(cfg.mu, "--mu"));
    d.add(q).add(mu);
    v.name = name == "energy" ? FunctionalValue::Name::Energy : FunctionalValue::Name::FisherIQ;
    v.value = name == "energy" ? energy(q, mu) : fisher_information_IQ(q, mu);
  } else if (name == "H" || name == "I") {
    const auto mu = io::load_measure(need(cfg.mu, "--mu"));
    const auto nu = io::load_measure(need(cfg.nu, "--nu"));
    d.add(mu).add(nu);
    v.name = name == "H" ? FunctionalValue::Name::RelEntropyH : FunctionalValue::Name::PotentialFreeI;
    v.value = name == "H" ? relative_entropy_H(mu, nu) : potential_free_I(mu, nu);
  } else {
    throw InvalidInput("unknown functional '" + name + "' (expected energy, IQ, H or I)");
  }
  v.inputs_digest = d.hex();
  json j = header("functional", cfg, v.inputs_digest);
  j["name"] = to_string(v.name);
  j["value"] = v.value;
  emit(cfg, j);
  return exit_pass;
}

int cmd_verify(const RunConfig& cfg, const std::string& command) {
  if (cfg.suite.empty()) throw InvalidInput("missing required option --suite");
  const auto start = std::chrono::steady_clock::now();
  const auto result = run_suite(cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Digest d;
  d.add(cfg.suite).add(cfg.constants().dump()).add(cfg.family).add(static_cast<std::int64_t>(cfg.count));
  for (const auto& path : cfg.potentials) d.add(io::load_potential(path));

  int passed = 0, failed = 0, outside = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  json reports = json::array();
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    const auto& r = result.reports[k];
    if (!r.in_hypothesis) ++outside;
    if (r.passed) ++passed;
    else if (r.in_hypothesis) ++failed;
    min_slack = std::min(min_slack, r.slack);
    json rj = report_to_json(r);
    rj["instance"] = result.instance_of[k];
    reports.push_back(std::move(rj));
  }
  json j = header(command, cfg, d.hex());
  j["suite"] = cfg.suite;
  j["summary"] = {{"reports", result.reports.size()},
                  {"passed", passed},
                  {"failed", failed},
                  {"out_of_hypothesis", outside},
                  {"other_failures", result.failures_outside_reports},
                  {"min_slack", result.reports.empty() ? json(nullptr) : json(min_slack)}};
  j["extras"] = result.extras;
  j["reports"] = std::move(reports);
  j["timing"] = {{"seconds", seconds}};
  emit(cfg, j);
  if (!cfg.csv.empty()) {
    auto os = open_csv(cfg.csv);
    os << "instance,name,lhs,rhs,slack,rho_used,passed,in_hypothesis,instance_digest\n";
    for (std::size_t k = 0; k < result.reports.size(); ++k) {
      const auto& r = result.reports[k];
      os << result.instance_of[k] << ',' << to_string(r.name) << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ','
         << fmt(r.slack) << ',' << fmt(r.rho_used) << ',' << (r.passed ? 1 : 0) << ',' << (r.in_hypothesis ? 1 : 0)
         << ',' << r.instance_digest << '\n';
    }
  }
  if (!cfg.out.empty())
    std::cout << cfg.suite << ": " << passed << " passed, " << failed << " failed, " << result.failures_outside_reports
              << " other failures\n";
  return (failed > 0 || result.failures_outside_reports > 0) ? exit_failed : exit_pass;
}

} // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Free functional inequalities on the circle: equilibrium measures, distances, functionals and "
               "inequality verification."};
  app.require_subcommand(1);
  Flags f;

  auto* eq = app.add_subcommand("equilibrium", "equilibrium measure of a potential");
  add_common(eq, f);
  eq->add_option("--potential", f.potential, "potential JSON")->required();
  eq->add_option("--mass", f.mass, "total mass");

  auto* dist = app.add_subcommand("distance", "modified or geodesic Wasserstein distance");
  add_common(dist, f);
  dist->add_option("--mu", f.mu, "first measure JSON")->required();
  dist->add_option("--nu", f.nu, "second measure JSON")->required();
  dist->add_option("--p", f.p, "order p >= 1");
  dist->add_option("--csv", f.csv, "transport map samples");
  auto* mod = dist->add_flag("--modified", f.modified, "modified distance (default)");
  dist->add_flag("--standard", f.standard, "geodesic distance")->excludes(mod);

  auto* fun = app.add_subcommand("functional", "energy, relative entropy or Fisher information");
  add_common(fun, f);
  fun->add_option("--name", f.name, "energy | IQ | H | I")->required();
  fun->add_option("--potential", f.potential, "potential JSON");
  fun->add_option("--mu", f.mu, "measure JSON");
  fun->add_option("--nu", f.nu, "second measure JSON");

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  add_common(ver, f);
  ver->add_option("--suite", f.suite, "poincare | transport | lsi | hwi | bm | chain | hk | hierarchy | sharpness");
  ver->add_option("--potential", f.potential, "fixed potential JSON");
  ver->add_option("--rho", f.rho, "curvature constant");
  ver->add_option("--count", f.count, "number of instances");
  ver->add_option("--csv", f.csv, "margins CSV");
  ver->add_option("--family", f.family, "measure family for the sharpness suite");

  auto* scan = app.add_subcommand("scan", "sharpness scan of the transport and log-Sobolev ratios");
  add_common(scan, f);
  scan->add_option("--potential", f.potential, "potential JSON (zero when absent)");
  scan->add_option("--family", f.family, "harmonic-perturbations | random-smooth | bump-like");
  scan->add_option("--count", f.count, "number of instances");
  scan->add_option("--csv", f.csv, "unused, accepted for symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_usage;
  }

  try {
    RunConfig cfg = build_config(f);
    if (eq->parsed()) return cmd_equilibrium(cfg);
    if (dist->parsed()) return cmd_distance(cfg);
    if (fun->parsed()) return cmd_functional(cfg);
    if (scan->parsed()) {
      cfg.suite = "sharpness";
      return cmd_verify(cfg, "scan");
    }
    return cmd_verify(cfg, "verify");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

} // namespace cfi::app
