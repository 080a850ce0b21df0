#pragma once

// Jump-adapted Euler-Maruyama simulation of coupled jump SDEs. Both models of
// a comparison problem are driven by one DriverRealization, so X1 - X2 is a
// pathwise quantity.

#include "jumpcompare/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace jumpcompare {

class InvalidStep : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(double time, const std::string& what) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct JumpEvent {
  double time = 0.0;
  std::size_t atom = 0;
};

/// Shared noise for one path: Brownian increments on the merged grid and the
/// jump events of the Poisson random measure.
struct DriverRealization {
  double t0 = 0.0;
  double horizon = 1.0;
  double h = 0.0;
  int noise_dim = 1;
  std::vector<double> times;       // segment endpoints, times.front() == t0, times.back() == T
  std::vector<double> increments;  // segment-major, noise_dim per segment
  std::vector<int> jump_atom;      // per segment: atom jumping at its right endpoint, or -1
  std::vector<JumpEvent> jumps;

  std::size_t segments() const { return jump_atom.size(); }
  Eigen::Map<const Vec> increment(std::size_t segment) const {
    return {increments.data() + segment * static_cast<std::size_t>(noise_dim), noise_dim};
  }
};

/// Sampled path. states(:, i) is the post-event value at times[i] and
/// left_limits(:, i) the value just before any jump at times[i].
struct Trajectory {
  std::vector<double> times;
  Mat states;
  Mat left_limits;
};

struct PathRecord {
  std::uint64_t path_id = 0;
  double violation_max = 0.0;
  std::optional<double> first_violation_time;
  bool failed = false;
};

struct McReport {
  std::uint64_t paths = 0;
  std::uint64_t violating = 0;
  std::uint64_t failed = 0;
  double violation_fraction = 0.0;
  double max_violation = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 1.0;
  std::uint64_t seed = 0;
  double h = 0.0;
  double eps_path = 0.0;
  std::vector<PathRecord> records;
};

DriverRealization sample_drivers(const MarkMeasure& marks, int noise_dim, double t0, double horizon, double h,
                                 std::uint64_t seed, std::uint64_t path_index);

Trajectory simulate_path(const SdeModel& model, const Vec& x0, const DriverRealization& drivers);

std::pair<Trajectory, Trajectory> simulate_coupled(const ComparisonProblem& problem,
                                                   const DriverRealization& drivers);

struct PathViolation {
  double max = 0.0;
  std::optional<double> first_time;  // first time the violation exceeds the threshold
};

//! Largest ((X2 - X1)_k)^+ over times (both post-event and left-limit values).
double violation_stat(const std::pair<Trajectory, Trajectory>& pair);
PathViolation path_violation(const Trajectory& first, const Trajectory& second, double threshold);

double default_eps_path(double h, const Vec& x1, const Vec& x2);

//! Wilson score 95% interval for k successes out of n.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n);

//! Worker count: explicit request, else JUMPCOMPARE_THREADS, else hardware.
int worker_count(std::optional<int> requested = std::nullopt);

//! Evaluates fn(path) for path in [0, n) on the given workers; the output
//! vector is indexed by path, so the result is independent of the schedule.
std::vector<PathRecord> run_paths(std::uint64_t n, int workers,
                                  const std::function<PathRecord(std::uint64_t)>& fn);

//! Counts and interval over per-path records (order-independent reduction).
McReport summarize_paths(std::vector<PathRecord> records, std::uint64_t seed, double h, double eps_path);

struct McOptions {
  std::optional<int> threads;
};

McReport mc_comparison(const ComparisonProblem& problem, std::uint64_t paths, double h, std::uint64_t seed,
                       const McOptions& options = {});

}  // namespace jumpcompare
