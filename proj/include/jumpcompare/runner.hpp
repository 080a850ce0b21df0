#pragma once

// Batch execution of scenarios and machine-readable reports.

#include "jumpcompare/conditions.hpp"
#include "jumpcompare/engine.hpp"
#include "jumpcompare/generator.hpp"
#include "jumpcompare/psdcone.hpp"
#include "jumpcompare/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jumpcompare {

inline constexpr std::string_view kToolVersion = "0.1.0";
// Below this many paths a clean simulation says little about a failing checker.
inline constexpr std::uint64_t kLowPowerPaths = 1000;
inline constexpr std::uint64_t kSmokePaths = 10;

struct RunOptions {
  std::optional<std::uint64_t> seed;  // replaces both the mc and the checker seed
  std::optional<std::uint64_t> paths;
  std::optional<double> step;
  std::optional<int> threads;
  bool timing = false;  // adds wall-clock seconds, which makes reports non-reproducible
};

struct RunReport {
  std::string scenario_id;
  ScenarioConfig config;  // with every override applied
  std::optional<Theorem31Report> theorem31;
  std::optional<Theorem37Check> theorem37;
  std::optional<McReport> mc;
  std::optional<bool> expect_pass;  // gallery scenarios only
  std::optional<bool> agreement;    // set when both the checker and the simulation ran
  bool low_power = false;
  bool attention_needed = false;
  std::optional<double> wall_seconds;

  //! Overall checker status; requires a checker result.
  Status verdict() const;
};

ScenarioConfig apply_options(ScenarioConfig config, const RunOptions& options);

RunReport run_check(const ScenarioConfig& config, const RunOptions& options = {});
RunReport run_simulate(const ScenarioConfig& config, const RunOptions& options = {});
//! Checker and simulation, with the agreement flag.
RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

//! Every gallery scenario through run_scenario. Smoke mode uses kSmokePaths
//! paths unless options.paths says otherwise.
std::vector<RunReport> run_gallery(const RunOptions& options = {}, bool smoke = false);

struct SpotCheckRun {
  ScenarioConfig config;
  SpotCheckReport report;
};
SpotCheckRun run_pide_spotcheck(const ScenarioConfig& config, const RunOptions& options = {});

Json to_json(const RunReport& report);
Json to_json(const SpotCheckRun& run);
Json gallery_summary(const std::vector<RunReport>& reports);

//! Pretty-printed JSON followed by a newline.
std::string render(const Json& doc);

//! Header plus one row per path: path_id,violation_max,first_violation_time,failed.
std::string paths_csv(const McReport& report);

//! Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

//! 0 for Holds or NoViolationFound, 1 for Violated.
int check_exit_code(const RunReport& report);
//! 0 when no path violates, 1 otherwise.
int simulate_exit_code(const RunReport& report);

}  // namespace jumpcompare
