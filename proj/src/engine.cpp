#include "jumpcompare/engine.hpp"

#include "jumpcompare/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>

namespace jumpcompare {

namespace {

std::size_t uniform_step_count(double span, double h) {
  const double ratio = span / h;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace

DriverRealization sample_drivers(const MarkMeasure& marks, int noise_dim, double t0, double horizon, double h,
                                 std::uint64_t seed, std::uint64_t path_index) {
  if (!(horizon > t0)) throw InvalidStep("horizon must satisfy T > t0");
  if (!(h > 0.0) || h > horizon - t0) throw InvalidStep("step h must satisfy 0 < h <= T - t0");
  if (noise_dim < 1) throw InvalidStep("Brownian dimension must be at least 1");

  DriverRealization drivers;
  drivers.t0 = t0;
  drivers.horizon = horizon;
  drivers.h = h;
  drivers.noise_dim = noise_dim;

  // Jump times: exponential interarrivals at rate n(E), categorical marks.
  const double rate = marks.total_mass();
  if (rate > 0.0) {
    CounterStream stream(seed, path_index, kJumpLane);
    double t = t0;
    for (;;) {
      t += stream.exponential(rate);
      if (!(t <= horizon)) break;
      const double target = stream.uniform() * rate;
      // Falls back to the last positive atom if rounding leaves target >= sum.
      std::size_t atom = 0;
      double cumulative = 0.0;
      for (std::size_t j = 0; j < marks.atoms.size(); ++j) {
        const double w = marks.atoms[j].weight;
        if (w <= 0.0) continue;
        atom = j;
        cumulative += w;
        if (target < cumulative) break;
      }
      drivers.jumps.push_back({t, atom});
    }
  }

  // Merge the uniform grid with the jump times.
  const std::size_t steps = uniform_step_count(horizon - t0, h);
  drivers.times.reserve(steps + drivers.jumps.size() + 1);
  drivers.times.push_back(t0);
  std::size_t next_jump = 0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double grid_t = (i == steps) ? horizon : std::min(horizon, t0 + static_cast<double>(i) * h);
    while (next_jump < drivers.jumps.size() && drivers.jumps[next_jump].time < grid_t) {
      if (drivers.jumps[next_jump].time > drivers.times.back()) {
        drivers.times.push_back(drivers.jumps[next_jump].time);
        drivers.jump_atom.push_back(static_cast<int>(drivers.jumps[next_jump].atom));
      }
      ++next_jump;
    }
    if (grid_t <= drivers.times.back()) continue;
    drivers.times.push_back(grid_t);
    int atom = -1;
    if (next_jump < drivers.jumps.size() && drivers.jumps[next_jump].time == grid_t) {
      atom = static_cast<int>(drivers.jumps[next_jump].atom);
      ++next_jump;
    }
    drivers.jump_atom.push_back(atom);
  }

  // Brownian increments, one stream per merged segment.
  const std::size_t segments = drivers.jump_atom.size();
  const auto d = static_cast<std::size_t>(noise_dim);
  drivers.increments.resize(segments * d);
  for (std::size_t s = 0; s < segments; ++s) {
    CounterStream stream(seed, path_index, static_cast<std::uint32_t>(s));
    const double scale = std::sqrt(drivers.times[s + 1] - drivers.times[s]);
    for (std::size_t a = 0; a < d; ++a) drivers.increments[s * d + a] = scale * stream.normal();
  }
  return drivers;
}

Trajectory simulate_path(const SdeModel& model, const Vec& x0, const DriverRealization& drivers) {
  const auto& coeff = model.coefficients;
  const int m = coeff.state_dim();
  if (x0.size() != m) throw DimensionMismatch("initial state has the wrong dimension");
  if (drivers.noise_dim != coeff.noise_dim()) throw DimensionMismatch("drivers carry the wrong Brownian dimension");
  for (const auto& jump : drivers.jumps) {
    if (jump.atom >= model.marks.atoms.size()) throw DimensionMismatch("jump event refers to an unknown atom");
  }

  const std::size_t segments = drivers.segments();
  Trajectory path;
  path.times = drivers.times;
  path.states.resize(m, static_cast<Eigen::Index>(segments + 1));
  path.left_limits.resize(m, static_cast<Eigen::Index>(segments + 1));
  path.states.col(0) = x0;
  path.left_limits.col(0) = x0;

  const auto& atoms = model.marks.atoms;
  Vec x = x0;
  Vec drift(m);
  Vec jump(m);
  Mat sigma(m, coeff.noise_dim());
  for (std::size_t s = 0; s < segments; ++s) {
    const double t = drivers.times[s];
    const double dt = drivers.times[s + 1] - t;
    // Uncompensated form: drift b - sum_j w_j gamma_j, jumps added at events.
    coeff.drift(t, x, drift);
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (atoms[j].weight == 0.0) continue;
      coeff.jump(t, x, j, jump);
      drift.noalias() -= atoms[j].weight * jump;
    }
    coeff.diffusion(t, x, sigma);
    x.noalias() += dt * drift;
    x.noalias() += sigma * drivers.increment(s);
    const auto col = static_cast<Eigen::Index>(s + 1);
    path.left_limits.col(col) = x;
    if (const int atom = drivers.jump_atom[s]; atom >= 0) {
      coeff.jump(drivers.times[s + 1], x, static_cast<std::size_t>(atom), jump);
      x += jump;
    }
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "non-finite state at t = " << drivers.times[s + 1];
      throw NonFiniteState(drivers.times[s + 1], os.str());
    }
    path.states.col(col) = x;
  }
  return path;
}

std::pair<Trajectory, Trajectory> simulate_coupled(const ComparisonProblem& problem,
                                                   const DriverRealization& drivers) {
  return {simulate_path(problem.model1, problem.x1, drivers), simulate_path(problem.model2, problem.x2, drivers)};
}

PathViolation path_violation(const Trajectory& first, const Trajectory& second, double threshold) {
  if (first.times != second.times) throw DimensionMismatch("coupled trajectories must share their time list");
  PathViolation out;
  for (std::size_t i = 0; i < first.times.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    const double before = (second.left_limits.col(col) - first.left_limits.col(col)).maxCoeff();
    const double after = (second.states.col(col) - first.states.col(col)).maxCoeff();
    const double v = std::max({0.0, before, after});
    if (v > out.max) out.max = v;
    if (!out.first_time && v > threshold) out.first_time = first.times[i];
  }
  return out;
}

double violation_stat(const std::pair<Trajectory, Trajectory>& pair) {
  return path_violation(pair.first, pair.second, 0.0).max;
}

double default_eps_path(double h, const Vec& x1, const Vec& x2) {
  return 5.0 * std::sqrt(h) * (1.0 + x1.norm() + x2.norm());
}

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n) {
  if (n == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  double low = std::max(0.0, center - half);
  double high = std::min(1.0, center + half);
  if (k == 0) low = 0.0;
  if (k == n) high = 1.0;
  return {low, high};
}

int worker_count(std::optional<int> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("JUMPCOMPARE_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<PathRecord> run_paths(std::uint64_t n, int workers,
                                  const std::function<PathRecord(std::uint64_t)>& fn) {
  std::vector<PathRecord> records(n);
  if (workers <= 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) records[i] = fn(i);
    return records;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> has_error{false};
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n || has_error.load()) return;
      try {
        records[i] = fn(i);
      } catch (...) {
        if (!has_error.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto count = static_cast<std::uint64_t>(workers) < n ? workers : static_cast<int>(n);
    for (int w = 0; w < count; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return records;
}

McReport summarize_paths(std::vector<PathRecord> records, std::uint64_t seed, double h, double eps_path) {
  McReport report;
  report.paths = records.size();
  report.seed = seed;
  report.h = h;
  report.eps_path = eps_path;
  for (const auto& r : records) {
    if (r.failed) {
      ++report.failed;
      continue;
    }
    if (r.violation_max > eps_path) ++report.violating;
    report.max_violation = std::max(report.max_violation, r.violation_max);
  }
  report.violation_fraction =
      report.paths == 0 ? 0.0 : static_cast<double>(report.violating) / static_cast<double>(report.paths);
  std::tie(report.wilson_low, report.wilson_high) = wilson_interval(report.violating, report.paths);
  report.records = std::move(records);
  return report;
}

McReport mc_comparison(const ComparisonProblem& problem, std::uint64_t paths, double h, std::uint64_t seed,
                       const McOptions& options) {
  validate_problem(problem);
  if (paths < 1) throw std::invalid_argument("path count must be at least 1");
  if (!(h > 0.0) || h > problem.horizon - problem.t0) throw InvalidStep("step h must satisfy 0 < h <= T - t0");
  const double eps_path = problem.tolerances.eps_path.value_or(default_eps_path(h, problem.x1, problem.x2));

  auto one_path = [&](std::uint64_t path) {
    PathRecord record;
    record.path_id = path;
    const auto drivers = sample_drivers(problem.model1.marks, problem.model1.noise_dim(), problem.t0,
                                        problem.horizon, h, seed, path);
    try {
      const auto [first, second] = simulate_coupled(problem, drivers);
      const auto v = path_violation(first, second, eps_path);
      record.violation_max = v.max;
      record.first_violation_time = v.first_time;
    } catch (const NonFiniteState&) {
      record.failed = true;
    }
    return record;
  };
  return summarize_paths(run_paths(paths, worker_count(options.threads), one_path), seed, h, eps_path);
}

}  // namespace jumpcompare
