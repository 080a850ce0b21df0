#include "jumpcompare/gallery.hpp"
#include "jumpcompare/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace jumpcompare;

namespace {

constexpr int kConfigError = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> paths;
  std::optional<double> step;
  std::string out;
  std::string format = "json";
  bool timing = false;

  RunOptions options() const {
    RunOptions o;
    o.seed = seed;
    o.paths = paths;
    o.step = step;
    o.timing = timing;
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c, bool simulation) {
  cmd->add_option("--seed", c.seed, "Seed for the simulation and the checker sampler");
  if (simulation) {
    cmd->add_option("--paths", c.paths, "Number of Monte Carlo paths");
    cmd->add_option("--step", c.step, "Euler grid step h");
  }
  cmd->add_option("--out", c.out, "Directory for report files");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--timing", c.timing, "Record wall-clock time in reports");
}

// A path, or gallery:<id> for a built-in scenario.
ScenarioConfig load(const std::string& source) {
  constexpr std::string_view prefix = "gallery:";
  if (source.rfind(prefix, 0) == 0) {
    const auto entry = find_gallery(std::string_view(source).substr(prefix.size()));
    if (!entry) throw std::runtime_error("no built-in scenario named '" + source.substr(prefix.size()) + "'");
    return entry->config;
  }
  ScenarioConfig config = parse_config(source);
  if (config.id.empty()) config.id = fs::path(source).stem().string();
  return config;
}

void emit(const Common& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(c.out);
  write_file_atomic(fs::path(c.out) / name, text);
}

int run_report(const Common& c, const RunReport& report, const std::string& suffix) {
  if (c.format == "csv") {
    if (!report.mc) throw std::runtime_error("csv output needs a simulation");
    emit(c, report.scenario_id + "-paths.csv", paths_csv(*report.mc));
    if (!c.out.empty()) emit(c, report.scenario_id + suffix + ".json", render(to_json(report)));
  } else {
    emit(c, report.scenario_id + suffix + ".json", render(to_json(report)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparison checks and coupled simulation for jump SDEs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Common common;
  std::string config_path;
  bool smoke = false;

  auto* check = app.add_subcommand("check", "Run the analytic condition checker");
  check->add_option("config", config_path, "Scenario file or gallery:<id>")->required();
  add_common(check, common, false);

  auto* simulate = app.add_subcommand("simulate", "Run the coupled Monte Carlo comparison");
  simulate->add_option("config", config_path, "Scenario file or gallery:<id>")->required();
  add_common(simulate, common, true);

  auto* matrix = app.add_subcommand("matrix-check", "Run the checker on a matrix scenario");
  matrix->add_option("config", config_path, "Scenario file or gallery:<id>")->required();
  add_common(matrix, common, false);

  auto* spot = app.add_subcommand("pide-spotcheck", "Residual diagnostics for the stacked generator");
  spot->add_option("config", config_path, "Scenario file or gallery:<id>")->required();
  add_common(spot, common, false);

  auto* gal = app.add_subcommand("gallery", "Run every built-in scenario");
  gal->add_flag("--smoke", smoke, "Use a handful of paths per scenario");
  add_common(gal, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  ScenarioConfig config;
  if (!gal->parsed()) {
    try {
      config = load(config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    }
  }

  try {
    const RunOptions options = common.options();
    if (check->parsed()) {
      const auto report = run_check(config, options);
      run_report(common, report, "-check");
      return check_exit_code(report);
    }
    if (matrix->parsed()) {
      if (config.kind != ScenarioKind::Matrix) {
        std::cerr << "error: scenario '" << config.id << "' is not a matrix scenario\n";
        return kConfigError;
      }
      const auto report = run_check(config, options);
      run_report(common, report, "-check");
      return check_exit_code(report);
    }
    if (simulate->parsed()) {
      const auto report = run_simulate(config, options);
      run_report(common, report, "-simulate");
      return simulate_exit_code(report);
    }
    if (spot->parsed()) {
      if (config.kind != ScenarioKind::Vector) {
        std::cerr << "error: pide-spotcheck needs a vector scenario\n";
        return kConfigError;
      }
      const auto run = run_pide_spotcheck(config, options);
      emit(common, run.config.id + "-spotcheck.json", render(to_json(run)));
      return run.report.interior_exceeding == 0 ? 0 : 1;
    }

    const auto reports = run_gallery(options, smoke);
    if (!common.out.empty()) {
      for (const auto& r : reports) emit(common, r.scenario_id + ".json", render(to_json(r)));
    }
    const Json summary = gallery_summary(reports);
    if (common.out.empty()) {
      std::cout << render(summary);
    } else {
      emit(common, "gallery.json", render(summary));
    }
    return summary["attention_needed"].get<bool>() ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
