#include "app.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace cfi::app {

namespace {

constexpr std::uint64_t potential_stream = 0x100000;
constexpr std::uint64_t partner_stream = 0x200000;
constexpr int instance_degree = 8;

struct Instances {
  const RunConfig& cfg;
  std::vector<Potential> fixed;

  explicit Instances(const RunConfig& c) : cfg(c) {
    for (const auto& path : cfg.potentials) fixed.push_back(io::load_potential(path, 0, 0));
  }

  Rng rng(std::uint64_t stream, int i) const { return Rng(instance_seed(cfg.seed, stream + static_cast<std::uint64_t>(i))); }

  Potential potential(int i) const {
    if (!fixed.empty()) return fixed[static_cast<std::size_t>(i) % fixed.size()];
    auto r = rng(potential_stream, i);
    return random_convex_potential(r, cfg.bandwidth, std::min(instance_degree, cfg.bandwidth), 0.5, cfg.rho);
  }

  CircleMeasure density(int i, std::uint64_t stream = 0) const {
    auto r = rng(stream, i);
    return random_density(r, cfg.bandwidth, std::min(instance_degree, cfg.bandwidth), 0.5);
  }
};

struct Collected {
  std::vector<std::vector<InequalityReport>> per_instance;
  explicit Collected(int n) : per_instance(n) {}

  void into(SuiteResult& out) const {
    for (std::size_t i = 0; i < per_instance.size(); ++i)
      for (const auto& r : per_instance[i]) {
        out.reports.push_back(r);
        out.instance_of.push_back(static_cast<int>(i));
      }
  }
};

SuiteResult poincare_suite(const RunConfig& cfg, int count) {
  const Instances inst(cfg);
  const int pots = inst.fixed.empty() ? 10 : static_cast<int>(inst.fixed.size());
  std::vector<CircleMeasure> equilibria;
  for (int k = 0; k < pots; ++k) equilibria.push_back(solve_equilibrium(inst.potential(k)).measure);
  Collected c(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    auto r = inst.rng(0, i);
    const auto f = random_trig_polynomial(r, cfg.bandwidth, std::min(1 + i % 16, cfg.bandwidth), true);
    c.per_instance[i] = {verify_poincare(equilibria[i % pots], cfg.rho, f)};
  });
  SuiteResult out;
  c.into(out);
  const auto haar = CircleMeasure::haar(cfg.bandwidth);
  const auto az = FourierSeries::from_modes(cfg.bandwidth, {{1, cplx{0.7, -0.3}}}, false);
  out.extras["haar_equality_slack"] = verify_poincare(haar, 0.5, az).slack;
  std::vector<FourierSeries> probes;
  for (int k = 0; k < 20; ++k) {
    auto r = inst.rng(partner_stream, k);
    probes.push_back(random_trig_polynomial(r, cfg.bandwidth, std::min(1 + k, cfg.bandwidth), true));
  }
  out.extras["haar_max_passing_rho"] = max_passing_rho(haar, probes, 0.45, 0.55, 1e-3);
  return out;
}

SuiteResult transport_suite(const RunConfig& cfg, int count, int which) {
  const Instances inst(cfg);
  Collected c(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    const auto q = inst.potential(i);
    const auto mu = inst.density(i);
    switch (which) {
    case 0: c.per_instance[i] = {verify_transport(q, mu, cfg.rho)}; break;
    case 1: c.per_instance[i] = {verify_lsi(q, mu, cfg.rho)}; break;
    default: c.per_instance[i] = {verify_hwi(q, mu, cfg.rho)}; break;
    }
  });
  SuiteResult out;
  c.into(out);
  return out;
}

SuiteResult hierarchy_suite(const RunConfig& cfg, int count) {
  const Instances inst(cfg);
  Collected c(count);
  std::vector<int> violations(count, 0);
  std::vector<double> hwi_over_lsi(count, 0.0);
  parallel_for(count, cfg.jobs, [&](int i) {
    const auto q = inst.potential(i);
    const auto mu = inst.density(i);
    const auto rs = verify_transport_family(q, mu, cfg.rho);
    const auto& t = rs[0];
    const auto& l = rs[1];
    const auto& h = rs[2];
    if (l.passed && !t.passed) ++violations[i];
    if (h.passed && !l.passed) ++violations[i];
    if (!slack_passes(l.rhs - h.rhs, l.rhs, cfg.tolerance)) ++violations[i];
    hwi_over_lsi[i] = l.rhs > 0 ? h.rhs / l.rhs : 0.0;
    c.per_instance[i] = {t, l, h};
  });
  SuiteResult out;
  c.into(out);
  const int total = std::accumulate(violations.begin(), violations.end(), 0);
  out.extras["implication_violations"] = total;
  out.extras["max_hwi_rhs_over_lsi_rhs"] = count > 0 ? *std::max_element(hwi_over_lsi.begin(), hwi_over_lsi.end()) : 0.0;
  out.failures_outside_reports = total;

  json lin = json::array();
  const int probes = std::min(count, 3);
  for (int i = 0; i < probes; ++i) {
    const auto q = inst.potential(i);
    auto r = inst.rng(partner_stream, i);
    auto f = random_potential_series(r, cfg.bandwidth, std::min(4, cfg.bandwidth), 0.2);
    f.set(0, 0.0);
    const auto a = lsi_linearization(q, f, cfg.rho, 0.02);
    const auto b = lsi_linearization(q, f, cfg.rho, 0.01);
    lin.push_back({{"instance", i},
                   {"poincare_target", a.poincare_target},
                   {"scaled_slack_t", a.scaled},
                   {"scaled_slack_half_t", b.scaled},
                   {"error_ratio", std::abs(a.scaled - a.poincare_target) /
                                       std::max(1e-300, std::abs(b.scaled - b.poincare_target))}});
  }
  out.extras["linearization"] = lin;
  return out;
}

SuiteResult chain_suite(const RunConfig& cfg, int count) {
  const Instances inst(cfg);
  Collected c(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    const auto rs = verify_potential_free(inst.density(i), inst.density(i, partner_stream));
    c.per_instance[i] = {rs.begin(), rs.end()};
  });
  SuiteResult out;
  c.into(out);
  return out;
}

SuiteResult hk_suite(const RunConfig& cfg, int count) {
  const Instances inst(cfg);
  Collected c(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    auto r = inst.rng(0, i);
    const auto phi = random_trig_polynomial(r, std::min(cfg.bandwidth, 64), std::min(1 + i % 12, cfg.bandwidth), true);
    for (int k = 1; k <= 5; ++k) {
      const auto rs = verify_houdre_kagan(phi, k);
      c.per_instance[i].insert(c.per_instance[i].end(), rs.begin(), rs.end());
    }
  });
  SuiteResult out;
  c.into(out);
  return out;
}

SuiteResult bm_suite(const RunConfig& cfg, int count) {
  const Instances inst(cfg);
  constexpr std::array<double, 5> weights{0.5, 1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75};
  Collected c(count);
  std::vector<json> details(count);
  parallel_for(count, cfg.jobs, [&](int i) {
    auto r1 = inst.rng(potential_stream, 2 * i);
    auto r2 = inst.rng(potential_stream, 2 * i + 1);
    const auto q1 = inst.fixed.size() >= 2 ? inst.fixed[0] : random_convex_potential(r1, cfg.bandwidth, std::min(4, cfg.bandwidth), 0.5, cfg.rho);
    const auto q2 = inst.fixed.size() >= 2 ? inst.fixed[1] : random_convex_potential(r2, cfg.bandwidth, std::min(4, cfg.bandwidth), 0.5, cfg.rho);
    const double a = weights[i % weights.size()];
    c.per_instance[i] = {verify_brunn_minkowski(q1, q2, a)};
  });
  SuiteResult out;
  c.into(out);
  int degraded = 0;
  for (const auto& r : out.reports) degraded += r.note.empty() ? 0 : 1;
  out.extras["smoothed_instances"] = degraded;
  return out;
}

SuiteResult sharpness_suite(const RunConfig& cfg, int count) {
  const Instances inst(cfg);
  const Potential q = inst.fixed.empty() ? Potential(FourierSeries::zero(cfg.bandwidth)) : inst.fixed[0];
  const auto eq = solve_equilibrium(q);
  const auto family = measure_family_from_string(cfg.family);
  std::vector<SharpnessSample> samples(count);
  parallel_for(count, cfg.jobs,
               [&](int i) { samples[i] = sharpness_sample(q, eq, family, cfg.seed, i, cfg.bandwidth); });
  const auto s = summarize_sharpness(family, samples);
  SuiteResult out;
  out.extras = {{"family", s.family},
                {"count", s.count},
                {"evaluated", s.evaluated},
                {"skipped", s.skipped},
                {"min_transport_ratio", s.min_transport_ratio},
                {"min_standard_transport_ratio", s.min_standard_transport_ratio},
                {"min_lsi_ratio", s.min_lsi_ratio},
                {"transport_argmin", s.transport_argmin},
                {"lsi_argmin", s.lsi_argmin},
                {"transport_exceeds_half", s.transport_exceeds_half},
                {"theorem_floor", 0.25}};
  return out;
}

} // namespace

SuiteResult run_suite(const RunConfig& cfg) {
  const int count = cfg.count >= 0 ? cfg.count : default_count(cfg.suite);
  SuiteResult out;
  if (cfg.suite == "poincare") out = poincare_suite(cfg, count);
  else if (cfg.suite == "transport") out = transport_suite(cfg, count, 0);
  else if (cfg.suite == "lsi") out = transport_suite(cfg, count, 1);
  else if (cfg.suite == "hwi") out = transport_suite(cfg, count, 2);
  else if (cfg.suite == "hierarchy") out = hierarchy_suite(cfg, count);
  else if (cfg.suite == "chain") out = chain_suite(cfg, count);
  else if (cfg.suite == "hk") out = hk_suite(cfg, count);
  else if (cfg.suite == "bm") out = bm_suite(cfg, count);
  else if (cfg.suite == "sharpness") out = sharpness_suite(cfg, count);
  else throw io::FieldError("suite", "unknown suite '" + cfg.suite + "'");

  for (auto& r : out.reports) {
    r.tolerance = std::max(r.tolerance, cfg.tolerance);
    r.passed = slack_passes(r.slack, r.rhs, r.tolerance);
  }
  std::vector<std::size_t> order(out.reports.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.reports[a].instance_digest < out.reports[b].instance_digest;
  });
  SuiteResult sorted;
  sorted.extras = std::move(out.extras);
  sorted.failures_outside_reports = out.failures_outside_reports;
  for (auto k : order) {
    sorted.reports.push_back(out.reports[k]);
    sorted.instance_of.push_back(out.instance_of[k]);
  }
  sorted.extras["count"] = count;
  return sorted;
}

} // namespace cfi::app
