#include "jumpcompare/runner.hpp"

#include "jumpcompare/gallery.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace jumpcompare {

namespace {

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json verdict_json(const Verdict& v) {
  Json out;
  out["status"] = std::string(to_string(v.status));
  out["samples_used"] = v.samples_used;
  out["min_margin"] = optional_json(v.min_margin);
  Json witnesses = Json::array();
  for (const auto& w : v.witnesses) {
    Json j;
    j["t"] = w.t;
    j["x"] = vec_json(w.x);
    j["x_prime"] = vec_json(w.x_prime);
    j["atom"] = w.atom ? Json(*w.atom) : Json(nullptr);
    j["margin"] = w.margin;
    witnesses.push_back(j);
  }
  out["witnesses"] = witnesses;
  return out;
}

Json verdict_list(const std::vector<Verdict>& list) {
  Json out = Json::array();
  for (const auto& v : list) out.push_back(verdict_json(v));
  return out;
}

Json mc_json(const McReport& r) {
  Json out;
  out["paths"] = r.paths;
  out["violating"] = r.violating;
  out["failed"] = r.failed;
  out["violation_fraction"] = r.violation_fraction;
  out["max_violation"] = r.max_violation;
  out["wilson_95"] = {r.wilson_low, r.wilson_high};
  out["seed"] = r.seed;
  out["h"] = r.h;
  out["eps_path"] = r.eps_path;
  return out;
}

template <class F>
RunReport timed(const RunOptions& options, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report = body();
  if (options.timing) {
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

void fill_check(RunReport& report) {
  const auto& c = report.config;
  if (c.kind == ScenarioKind::Vector) {
    report.theorem31 = check_theorem31(c.vector_problem());
  } else {
    report.theorem37 = check_theorem37(c.matrix_problem());
  }
}

void fill_simulate(RunReport& report, const RunOptions& options) {
  const auto& c = report.config;
  const McOptions mc_options{options.threads};
  if (c.kind == ScenarioKind::Vector) {
    report.mc = mc_comparison(c.vector_problem(), c.mc.paths, c.mc.step, c.mc.seed, mc_options);
  } else {
    report.mc = mc_matrix_comparison(c.matrix_problem(), c.mc.paths, c.mc.step, c.mc.seed, mc_options);
  }
  report.low_power = c.mc.paths < kLowPowerPaths;
}

void settle(RunReport& report) {
  if (report.mc && (report.theorem31 || report.theorem37)) {
    const bool violated = report.verdict() == Status::Violated;
    report.agreement = violated == (report.mc->violating > 0);
  }
  const bool disagrees = report.agreement.has_value() && !*report.agreement && !report.low_power;
  const bool unexpected = report.expect_pass.has_value() && (report.theorem31 || report.theorem37) &&
                          *report.expect_pass == (report.verdict() == Status::Violated);
  report.attention_needed = disagrees || unexpected;
}

}  // namespace

Status RunReport::verdict() const {
  if (theorem31) return theorem31->overall;
  if (theorem37) return theorem37->verdict.status;
  throw std::logic_error("report has no checker result");
}

ScenarioConfig apply_options(ScenarioConfig config, const RunOptions& options) {
  if (options.seed) {
    config.mc.seed = *options.seed;
    config.check.seed = *options.seed;
  }
  if (options.paths) config.mc.paths = *options.paths;
  if (options.step) config.mc.step = *options.step;
  if (config.mc.paths < 1) throw std::invalid_argument("path count must be at least 1");
  if (!(config.mc.step > 0.0) || config.mc.step > config.horizon - config.t0) {
    throw InvalidStep("step h must satisfy 0 < h <= T - t0");
  }
  return config;
}

RunReport run_check(const ScenarioConfig& config, const RunOptions& options) {
  return timed(options, [&] {
    RunReport report;
    report.config = apply_options(config, options);
    report.scenario_id = report.config.id;
    fill_check(report);
    settle(report);
    return report;
  });
}

RunReport run_simulate(const ScenarioConfig& config, const RunOptions& options) {
  return timed(options, [&] {
    RunReport report;
    report.config = apply_options(config, options);
    report.scenario_id = report.config.id;
    fill_simulate(report, options);
    settle(report);
    return report;
  });
}

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  return timed(options, [&] {
    RunReport report;
    report.config = apply_options(config, options);
    report.scenario_id = report.config.id;
    fill_check(report);
    fill_simulate(report, options);
    settle(report);
    return report;
  });
}

std::vector<RunReport> run_gallery(const RunOptions& options, bool smoke) {
  RunOptions effective = options;
  if (smoke && !effective.paths) effective.paths = kSmokePaths;
  std::vector<RunReport> reports;
  for (const auto& entry : gallery()) {
    RunReport report = timed(effective, [&] {
      RunReport r;
      r.config = apply_options(entry.config, effective);
      r.scenario_id = r.config.id;
      r.expect_pass = entry.expect_pass;
      fill_check(r);
      fill_simulate(r, effective);
      settle(r);
      return r;
    });
    reports.push_back(std::move(report));
  }
  return reports;
}

SpotCheckRun run_pide_spotcheck(const ScenarioConfig& config, const RunOptions& options) {
  SpotCheckRun run;
  run.config = apply_options(config, options);
  run.report = pide_spotcheck(run.config.vector_problem(), run.config.check.samples);
  return run;
}

Json to_json(const RunReport& r) {
  Json out;
  out["scenario"] = r.scenario_id;
  out["tool_version"] = std::string(kToolVersion);
  out["kind"] = std::string(to_string(r.config.kind));

  Json tol;
  if (r.config.kind == ScenarioKind::Vector) {
    const auto p = r.config.vector_problem();
    tol["eps_check"] = p.tolerances.check_slack(p.both_affine());
    tol["cstar"] = problem_cstar(p);
    tol["eps_lin"] = p.tolerances.eps_lin;
  } else {
    const auto p = r.config.matrix_problem();
    tol["eps_check"] = p.tolerances.check_slack(false);
    tol["cstar"] = matrix_cstar(p);
    tol["eps_lin"] = p.tolerances.eps_lin;
  }
  if (r.mc) tol["eps_path"] = r.mc->eps_path;
  out["tolerances"] = tol;
  out["seeds"] = {{"mc", r.config.mc.seed}, {"check", r.config.check.seed}};

  if (r.theorem31) {
    const auto& t = *r.theorem31;
    Json j;
    j["overall"] = std::string(to_string(t.overall));
    j["battery"] = std::string(to_string(t.battery));
    j["battery_agrees"] = t.battery_agrees;
    j["sigma_equal"] = verdict_json(t.sigma_equal);
    j["condition_a"] = verdict_list(t.cond_a);
    j["condition_b"] = verdict_list(t.cond_b);
    j["condition_c"] = verdict_list(t.cond_c);
    j["difference_inequality"] = verdict_json(t.ii_prime);
    out["check"] = j;
  } else if (r.theorem37) {
    Json j = verdict_json(r.theorem37->verdict);
    j["degenerate_samples"] = r.theorem37->degenerate_samples;
    j["witness_coordinates"] = "svec";
    out["check"] = j;
  }
  if (r.mc) out["simulation"] = mc_json(*r.mc);

  if (r.expect_pass) out["expected"] = *r.expect_pass ? "pass" : "fail";
  out["agreement"] = r.agreement ? Json(*r.agreement) : Json(nullptr);
  out["low_power"] = r.low_power;
  out["attention_needed"] = r.attention_needed;
  if (r.wall_seconds) out["wall_seconds"] = *r.wall_seconds;
  out["config"] = to_json(r.config);
  return out;
}

Json to_json(const SpotCheckRun& run) {
  const auto& s = run.report;
  Json out;
  out["scenario"] = run.config.id;
  out["tool_version"] = std::string(kToolVersion);
  out["interior_points"] = s.interior_points;
  out["exterior_points"] = s.exterior_points;
  out["max_interior_residual"] = s.max_interior_residual;
  out["max_exterior_residual"] = s.max_exterior_residual;
  out["interior_exceeding"] = s.interior_exceeding;
  out["C"] = s.C;
  out["eta"] = s.eta;
  out["eps"] = s.eps;
  out["config"] = to_json(run.config);
  return out;
}

Json gallery_summary(const std::vector<RunReport>& reports) {
  Json out;
  out["tool_version"] = std::string(kToolVersion);
  Json rows = Json::array();
  bool attention = false;
  for (const auto& r : reports) {
    Json row;
    row["scenario"] = r.scenario_id;
    row["verdict"] = std::string(to_string(r.verdict()));
    row["violation_fraction"] = r.mc ? Json(r.mc->violation_fraction) : Json(nullptr);
    row["agreement"] = r.agreement ? Json(*r.agreement) : Json(nullptr);
    row["low_power"] = r.low_power;
    row["attention_needed"] = r.attention_needed;
    rows.push_back(row);
    attention = attention || r.attention_needed;
  }
  out["scenarios"] = rows;
  out["attention_needed"] = attention;
  return out;
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

std::string paths_csv(const McReport& report) {
  std::string out = "path_id,violation_max,first_violation_time,failed\n";
  char buf[64];
  for (const auto& r : report.records) {
    out += std::to_string(r.path_id);
    std::snprintf(buf, sizeof buf, ",%.17g,", r.violation_max);
    out += buf;
    if (r.first_violation_time) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.first_violation_time);
      out += buf;
    }
    out += r.failed ? ",1\n" : ",0\n";
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

int check_exit_code(const RunReport& report) { return report.verdict() == Status::Violated ? 1 : 0; }

int simulate_exit_code(const RunReport& report) { return report.mc && report.mc->violating > 0 ? 1 : 0; }

}  // namespace jumpcompare
