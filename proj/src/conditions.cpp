#include "jumpcompare/conditions.hpp"

#include "jumpcompare/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace jumpcompare {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Holds:
      return "holds";
    case Status::NoViolationFound:
      return "no_violation_found";
    case Status::Violated:
      return "violated";
  }
  return "unknown";
}

Status combine(const std::vector<const Verdict*>& verdicts) {
  bool all_hold = true;
  for (const auto* v : verdicts) {
    if (v->status == Status::Violated) return Status::Violated;
    if (v->status != Status::Holds) all_hold = false;
  }
  return all_hold ? Status::Holds : Status::NoViolationFound;
}

namespace {

constexpr std::size_t kMaxWitnesses = 5;
constexpr std::size_t kStructuredCap = 4096;

/// Collects margins; keeps the most negative ones below -slack as witnesses.
class VerdictBuilder {
 public:
  explicit VerdictBuilder(double slack) : slack_(slack) {}

  void observe(double t, const Vec& x, const Vec& x_prime, std::optional<std::size_t> atom, double margin) {
    ++samples_;
    if (!min_ || margin < *min_) min_ = margin;
    if (!(margin < -slack_)) return;
    Witness w{t, x, x_prime, atom, margin};
    auto pos = std::upper_bound(witnesses_.begin(), witnesses_.end(), margin,
                                [](double value, const Witness& other) { return value < other.margin; });
    witnesses_.insert(pos, std::move(w));
    if (witnesses_.size() > kMaxWitnesses) witnesses_.pop_back();
  }

  Verdict sampled() const {
    Verdict v;
    v.status = witnesses_.empty() ? Status::NoViolationFound : Status::Violated;
    v.witnesses = witnesses_;
    v.samples_used = samples_;
    v.min_margin = min_;
    return v;
  }

  //! Affine-exact result: Holds unless a structural failure produced a witness.
  Verdict exact() const {
    Verdict v = sampled();
    if (v.status != Status::Violated) v.status = Status::Holds;
    return v;
  }

 private:
  double slack_;
  std::size_t samples_ = 0;
  std::optional<double> min_;
  std::vector<Witness> witnesses_;
};

Vec unit(Eigen::Index m, Eigen::Index i, double scale) {
  Vec v = Vec::Zero(m);
  v[i] = scale;
  return v;
}

double sigma_gap(const ComparisonProblem& p, double t, const Vec& x) {
  return (p.model1.coefficients.diffusion(t, x) - p.model2.coefficients.diffusion(t, x)).norm();
}

double a_margin(const ComparisonProblem& p, Eigen::Index k, double t, const Vec& base, const Vec& moved) {
  const auto& c = p.model1.coefficients;
  return -(c.diffusion(t, moved).row(k) - c.diffusion(t, base).row(k)).norm();
}

double b_margin(const ComparisonProblem& p, Eigen::Index k, double t, const Vec& x, const Vec& xp, std::size_t atom) {
  const Vec shifted = x + xp;
  return x[k] + p.model1.coefficients.jump(t, shifted, atom)[k] - p.model2.coefficients.jump(t, xp, atom)[k];
}

double compensated_drift(const SdeModel& model, Eigen::Index k, double t, const Vec& x) {
  double value = model.coefficients.drift(t, x)[k];
  const auto& atoms = model.marks.atoms;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].weight == 0.0) continue;
    value -= atoms[j].weight * model.coefficients.jump(t, x, j)[k];
  }
  return value;
}

double c_margin(const ComparisonProblem& p, Eigen::Index k, double t, const Vec& delta, const Vec& xp) {
  return compensated_drift(p.model1, k, t, delta + xp) - compensated_drift(p.model2, k, t, xp);
}

//! Grows a witness scale until the margin clears the slack (affine margins
//! are monotone in the scale along the constructed direction).
template <typename MarginAt>
std::pair<double, double> scaled_witness(double start, double slack, MarginAt margin_at) {
  double s = start;
  double margin = margin_at(s);
  for (int i = 0; i < 12 && !(margin < -slack); ++i) {
    s *= 10.0;
    margin = margin_at(s);
  }
  return {s, margin};
}

}  // namespace

namespace detail {

std::vector<SamplePoint> sample_points(const ComparisonProblem& p, SampleShape shape, int pinned,
                                       std::uint64_t purpose) {
  const auto m = static_cast<Eigen::Index>(p.state_dim());
  const double box = p.sampling.box;
  std::vector<double> levels{0.0};
  for (double s : p.sampling.ladder) {
    levels.push_back(s);
    if (shape == SampleShape::Signed) levels.push_back(-s);
  }

  CounterStream stream(p.sampling.seed, purpose, kSamplingLane);
  auto uniform_in = [&](double lo, double hi) { return lo + (hi - lo) * stream.uniform(); };
  auto random_x_prime = [&] {
    Vec v(m);
    for (Eigen::Index i = 0; i < m; ++i) v[i] = uniform_in(-box, box);
    return v;
  };
  auto random_time = [&] { return uniform_in(p.t0, p.horizon); };

  std::vector<SamplePoint> points;
  const Eigen::Index free_coords = (shape == SampleShape::NonnegativeZeroAt) ? m - 1 : m;
  double structured = 1.0;
  for (Eigen::Index i = 0; i < free_coords; ++i) structured *= static_cast<double>(levels.size());
  if (structured <= static_cast<double>(kStructuredCap)) {
    const auto total = static_cast<std::size_t>(structured);
    points.reserve(total + p.sampling.count);
    for (std::size_t code = 0; code < total; ++code) {
      Vec x = Vec::Zero(m);
      std::size_t rest = code;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (i == pinned) continue;
        x[i] = levels[rest % levels.size()];
        rest /= levels.size();
      }
      points.push_back({random_time(), std::move(x), random_x_prime()});
    }
  }
  for (std::size_t n = 0; n < p.sampling.count; ++n) {
    Vec x(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == pinned) {
        x[i] = 0.0;
        continue;
      }
      if (stream.uniform() < 0.5) {
        const auto idx = std::min(levels.size() - 1, static_cast<std::size_t>(stream.uniform() * levels.size()));
        x[i] = levels[idx] * uniform_in(0.5, 1.0);
      } else {
        x[i] = shape == SampleShape::Signed ? uniform_in(-box, box) : uniform_in(0.0, box);
      }
    }
    points.push_back({random_time(), std::move(x), random_x_prime()});
  }
  return points;
}

}  // namespace detail

using detail::sample_points;
using detail::SampleShape;

Verdict check_sigma_equal(const ComparisonProblem& p) {
  validate_problem(p);
  const auto m = static_cast<Eigen::Index>(p.state_dim());
  if (p.both_affine()) {
    const auto& a1 = *p.model1.coefficients.affine();
    const auto& a2 = *p.model2.coefficients.affine();
    const double slack = p.tolerances.check_slack(true);
    double gap = (a1.U - a2.U).cwiseAbs().maxCoeff();
    for (std::size_t a = 0; a < a1.V.size(); ++a) gap = std::max(gap, (a1.V[a] - a2.V[a]).cwiseAbs().maxCoeff());
    VerdictBuilder builder(slack);
    if (gap > slack) {
      // The gap is affine in x, so one of {0, s e_j} exposes it.
      std::vector<Vec> probes{Vec::Zero(m)};
      for (Eigen::Index j = 0; j < m; ++j) probes.push_back(unit(m, j, p.sampling.box));
      for (const auto& x : probes) {
        const auto [s, margin] = scaled_witness(1.0, slack, [&](double scale) { return -sigma_gap(p, p.t0, x * scale); });
        builder.observe(p.t0, x * s, Vec::Zero(m), std::nullopt, margin);
      }
    }
    return builder.exact();
  }
  VerdictBuilder builder(p.tolerances.check_slack(false));
  for (const auto& pt : sample_points(p, SampleShape::Signed, -1, 1)) {
    builder.observe(pt.t, pt.x, Vec::Zero(m), std::nullopt, -sigma_gap(p, pt.t, pt.x));
  }
  return builder.sampled();
}

std::vector<Verdict> check_condition_a(const ComparisonProblem& p) {
  validate_problem(p);
  const auto m = static_cast<Eigen::Index>(p.state_dim());
  std::vector<Verdict> out;
  out.reserve(static_cast<std::size_t>(m));
  if (p.model1.coefficients.affine()) {
    const auto& a1 = *p.model1.coefficients.affine();
    const double slack = p.tolerances.check_slack(true);
    for (Eigen::Index k = 0; k < m; ++k) {
      VerdictBuilder builder(slack);
      for (Eigen::Index j = 0; j < m; ++j) {
        if (j == k) continue;
        double coupling = 0.0;
        for (const auto& slice : a1.V) coupling = std::max(coupling, std::abs(slice(k, j)));
        if (coupling <= slack) continue;
        const Vec base = Vec::Zero(m);
        const auto [s, margin] = scaled_witness(p.sampling.box, slack,
                                                [&](double scale) { return a_margin(p, k, p.t0, base, unit(m, j, scale)); });
        builder.observe(p.t0, base, unit(m, j, s), std::nullopt, margin);
      }
      out.push_back(builder.exact());
    }
    return out;
  }
  const double slack = p.tolerances.check_slack(false);
  const auto points = sample_points(p, SampleShape::Signed, -1, 2);
  for (Eigen::Index k = 0; k < m; ++k) {
    VerdictBuilder builder(slack);
    for (const auto& pt : points) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (j == k) continue;
        for (double step : p.sampling.ladder) {
          for (double sign : {1.0, -1.0}) {
            Vec moved = pt.x;
            moved[j] += sign * step;
            builder.observe(pt.t, pt.x, moved, std::nullopt, a_margin(p, k, pt.t, pt.x, moved));
          }
        }
      }
    }
    out.push_back(builder.sampled());
  }
  return out;
}

std::vector<Verdict> check_condition_b(const ComparisonProblem& p) {
  validate_problem(p);
  const auto m = static_cast<Eigen::Index>(p.state_dim());
  const auto& atoms = p.model1.marks.atoms;
  std::vector<Verdict> out;
  out.reserve(static_cast<std::size_t>(m));
  if (p.both_affine()) {
    const auto& a1 = *p.model1.coefficients.affine();
    const auto& a2 = *p.model2.coefficients.affine();
    const double slack = p.tolerances.check_slack(true);
    const double box = p.sampling.box;
    for (Eigen::Index k = 0; k < m; ++k) {
      VerdictBuilder builder(slack);
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (atoms[j].weight <= 0.0) continue;
        const double dg = a1.g[j][k] - a2.g[j][k];
        const double start = std::max(box, (std::abs(dg) + 1.0));
        const Vec zero = Vec::Zero(m);
        for (Eigen::Index i = 0; i < m; ++i) {
          // x' enters only through G1_j - G2_j: the rows must agree.
          const double row_gap = a1.G[j](k, i) - a2.G[j](k, i);
          if (std::abs(row_gap) > slack) {
            const double dir = row_gap > 0.0 ? -1.0 : 1.0;
            const auto [s, margin] = scaled_witness(start / std::abs(row_gap), slack, [&](double scale) {
              return b_margin(p, k, p.t0, zero, unit(m, i, dir * scale), j);
            });
            builder.observe(p.t0, zero, unit(m, i, dir * s), j, margin);
          }
          // x >= 0 enters through e_k + row k of G1_j: entries must be >= 0.
          const double coef = (i == k ? 1.0 : 0.0) + a1.G[j](k, i);
          if (coef < -slack) {
            const auto [s, margin] = scaled_witness(start / std::abs(coef), slack, [&](double scale) {
              return b_margin(p, k, p.t0, unit(m, i, scale), zero, j);
            });
            builder.observe(p.t0, unit(m, i, s), zero, j, margin);
          }
        }
        if (dg < -slack) builder.observe(p.t0, zero, zero, j, b_margin(p, k, p.t0, zero, zero, j));
      }
      out.push_back(builder.exact());
    }
    return out;
  }
  const double slack = p.tolerances.check_slack(false);
  const auto points = sample_points(p, SampleShape::Nonnegative, -1, 3);
  for (Eigen::Index k = 0; k < m; ++k) {
    VerdictBuilder builder(slack);
    for (const auto& pt : points) {
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (atoms[j].weight <= 0.0) continue;
        builder.observe(pt.t, pt.x, pt.x_prime, j, b_margin(p, k, pt.t, pt.x, pt.x_prime, j));
      }
    }
    out.push_back(builder.sampled());
  }
  return out;
}

std::vector<Verdict> check_condition_c(const ComparisonProblem& p) {
  validate_problem(p);
  const auto m = static_cast<Eigen::Index>(p.state_dim());
  std::vector<Verdict> out;
  out.reserve(static_cast<std::size_t>(m));
  if (p.both_affine()) {
    const auto& a1 = *p.model1.coefficients.affine();
    const auto& a2 = *p.model2.coefficients.affine();
    const Mat m1 = a1.compensated_linear(p.model1.marks);
    const Mat m2 = a2.compensated_linear(p.model2.marks);
    const Vec d1 = a1.compensated_constant(p.model1.marks);
    const Vec d2 = a2.compensated_constant(p.model2.marks);
    const double slack = p.tolerances.check_slack(true);
    const double box = p.sampling.box;
    for (Eigen::Index k = 0; k < m; ++k) {
      VerdictBuilder builder(slack);
      const double dd = d1[k] - d2[k];
      const double start = std::max(box, std::abs(dd) + 1.0);
      const Vec zero = Vec::Zero(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const double row_gap = m1(k, i) - m2(k, i);
        if (std::abs(row_gap) > slack) {
          const double dir = row_gap > 0.0 ? -1.0 : 1.0;
          const auto [s, margin] = scaled_witness(start / std::abs(row_gap), slack, [&](double scale) {
            return c_margin(p, k, p.t0, zero, unit(m, i, dir * scale));
          });
          builder.observe(p.t0, zero, unit(m, i, dir * s), std::nullopt, margin);
        }
        // Quasimonotonicity: off-diagonal entries of the compensated drift.
        if (i != k && m1(k, i) < -slack) {
          const auto [s, margin] = scaled_witness(start / std::abs(m1(k, i)), slack, [&](double scale) {
            return c_margin(p, k, p.t0, unit(m, i, scale), zero);
          });
          builder.observe(p.t0, unit(m, i, s), zero, std::nullopt, margin);
        }
      }
      if (dd < -slack) builder.observe(p.t0, zero, zero, std::nullopt, c_margin(p, k, p.t0, zero, zero));
      out.push_back(builder.exact());
    }
    return out;
  }
  const double slack = p.tolerances.check_slack(false);
  for (Eigen::Index k = 0; k < m; ++k) {
    VerdictBuilder builder(slack);
    for (const auto& pt : sample_points(p, SampleShape::NonnegativeZeroAt, static_cast<int>(k),
                                        4 + static_cast<std::uint64_t>(k))) {
      builder.observe(pt.t, pt.x, pt.x_prime, std::nullopt, c_margin(p, k, pt.t, pt.x, pt.x_prime));
    }
    out.push_back(builder.sampled());
  }
  return out;
}

IiPrimeValue eval_ii_prime(const ComparisonProblem& p, double t, const Vec& x, const Vec& x_prime) {
  const auto m = x.size();
  if (m != p.state_dim() || x_prime.size() != m) throw DimensionMismatch("ii' evaluation point has the wrong size");
  const auto& c1 = p.model1.coefficients;
  const auto& c2 = p.model2.coefficients;
  const Vec x_plus = x.cwiseMax(0.0);
  const Vec x_minus = (-x).cwiseMax(0.0);
  const Vec shifted = x + x_prime;

  double lhs = -2.0 * x_minus.dot(c1.drift(t, x_plus + x_prime) - c2.drift(t, x_prime));

  const Mat sigma_gap = c1.diffusion(t, shifted) - c2.diffusion(t, x_prime);
  for (Eigen::Index k = 0; k < m; ++k) {
    if (x[k] < 0.0) lhs += sigma_gap.row(k).squaredNorm();
  }

  const auto& atoms = p.model1.marks.atoms;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const double w = atoms[j].weight;
    if (w == 0.0) continue;
    const Vec gap = c1.jump(t, shifted, j) - c2.jump(t, x_prime, j);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double after = std::max(0.0, -(x[k] + gap[k]));
      if (x[k] < 0.0) {
        lhs += w * (after * after - x[k] * x[k] - 2.0 * x[k] * gap[k]);
      } else {
        lhs += w * after * after;
      }
    }
  }
  return {lhs, problem_cstar(p) * x_minus.squaredNorm()};
}

Verdict check_ii_prime(const ComparisonProblem& p) {
  validate_problem(p);
  VerdictBuilder builder(p.tolerances.check_slack(false));
  for (const auto& pt : sample_points(p, SampleShape::Signed, -1, 100)) {
    const auto v = eval_ii_prime(p, pt.t, pt.x, pt.x_prime);
    builder.observe(pt.t, pt.x, pt.x_prime, std::nullopt, v.rhs - v.lhs);
  }
  return builder.sampled();
}

Theorem31Report check_theorem31(const ComparisonProblem& p) {
  Theorem31Report report;
  report.sigma_equal = check_sigma_equal(p);
  report.cond_a = check_condition_a(p);
  report.cond_b = check_condition_b(p);
  report.cond_c = check_condition_c(p);
  report.ii_prime = check_ii_prime(p);

  std::vector<const Verdict*> battery{&report.sigma_equal};
  for (const auto* group : {&report.cond_a, &report.cond_b, &report.cond_c}) {
    for (const auto& v : *group) battery.push_back(&v);
  }
  report.battery = combine(battery);
  const bool battery_violated = report.battery == Status::Violated;
  report.battery_agrees = battery_violated == report.ii_prime.violated();
  if (battery_violated || report.ii_prime.violated()) {
    report.overall = Status::Violated;
  } else {
    report.overall = report.battery;
  }
  return report;
}

namespace {

bool affine_jumps_equal(const AffineCoefficients& a1, const AffineCoefficients& a2, double slack) {
  for (std::size_t j = 0; j < a1.G.size(); ++j) {
    if ((a1.G[j] - a2.G[j]).cwiseAbs().maxCoeff() > slack) return false;
    if ((a1.g[j] - a2.g[j]).cwiseAbs().maxCoeff() > slack) return false;
  }
  return true;
}

bool affine_jumps_zero(const AffineCoefficients& a, double slack) {
  for (std::size_t j = 0; j < a.G.size(); ++j) {
    if (a.G[j].cwiseAbs().maxCoeff() > slack || a.g[j].cwiseAbs().maxCoeff() > slack) return false;
  }
  return true;
}

void require_jump_structure(const ComparisonProblem& p, CorollaryVariant variant) {
  if (variant == CorollaryVariant::JumpsGeneral) return;
  const auto& atoms = p.model1.marks.atoms;
  const bool equal_only = variant == CorollaryVariant::JumpsEqual;
  if (p.both_affine()) {
    const double slack = p.tolerances.check_slack(true);
    const auto& a1 = *p.model1.coefficients.affine();
    const auto& a2 = *p.model2.coefficients.affine();
    const bool ok = equal_only ? affine_jumps_equal(a1, a2, slack)
                               : affine_jumps_zero(a1, slack) && affine_jumps_zero(a2, slack);
    if (!ok) {
      throw VariantPreconditionError(equal_only ? "variant requires gamma1 == gamma2" : "variant requires gamma == 0");
    }
    return;
  }
  const double slack = p.tolerances.check_slack(false);
  for (const auto& pt : sample_points(p, SampleShape::Signed, -1, 50)) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (atoms[j].weight <= 0.0) continue;
      const Vec g1 = p.model1.coefficients.jump(pt.t, pt.x, j);
      const Vec g2 = p.model2.coefficients.jump(pt.t, pt.x, j);
      const double gap = equal_only ? (g1 - g2).norm() : std::max(g1.norm(), g2.norm());
      if (gap > slack) {
        throw VariantPreconditionError(equal_only ? "variant requires gamma1 == gamma2"
                                                  : "variant requires gamma == 0");
      }
    }
  }
}

}  // namespace

Verdict check_corollary_1d(const ComparisonProblem& p, CorollaryVariant variant) {
  validate_problem(p);
  if (p.state_dim() != 1) throw DimensionError("scalar corollaries require m = 1");
  require_jump_structure(p, variant);

  const bool compensate = variant == CorollaryVariant::JumpsGeneral;
  const bool jumps = variant != CorollaryVariant::NoJumps;
  const auto& atoms = p.model1.marks.atoms;
  const Vec zero = Vec::Zero(1);

  const Verdict sigma = check_sigma_equal(p);
  auto drift_margin = [&](double t, const Vec& x) {
    if (compensate) return compensated_drift(p.model1, 0, t, x) - compensated_drift(p.model2, 0, t, x);
    return p.model1.coefficients.drift(t, x)[0] - p.model2.coefficients.drift(t, x)[0];
  };
  // x1 + gamma1(x1) - x2 - gamma2(x2) for x1 = x2 + gap, gap >= 0.
  auto jump_margin = [&](double t, const Vec& x2, double gap, std::size_t j) {
    const Vec x1 = x2 + Vec::Constant(1, gap);
    return x1[0] + p.model1.coefficients.jump(t, x1, j)[0] - x2[0] - p.model2.coefficients.jump(t, x2, j)[0];
  };

  Verdict drift;
  Verdict jump;
  if (p.both_affine()) {
    const double slack = p.tolerances.check_slack(true);
    const auto& a1 = *p.model1.coefficients.affine();
    const auto& a2 = *p.model2.coefficients.affine();
    const double box = p.sampling.box;

    VerdictBuilder db(slack);
    const double slope_gap = compensate ? (a1.compensated_linear(p.model1.marks) - a2.compensated_linear(p.model2.marks))(0, 0)
                                        : a1.B(0, 0) - a2.B(0, 0);
    const double const_gap = compensate ? (a1.compensated_constant(p.model1.marks) - a2.compensated_constant(p.model2.marks))[0]
                                        : a1.c[0] - a2.c[0];
    if (std::abs(slope_gap) > slack) {
      const double dir = slope_gap > 0.0 ? -1.0 : 1.0;
      const auto [s, margin] = scaled_witness(std::max(box, std::abs(const_gap) + 1.0) / std::abs(slope_gap), slack,
                                              [&](double scale) { return drift_margin(p.t0, Vec::Constant(1, dir * scale)); });
      db.observe(p.t0, Vec::Constant(1, dir * s), zero, std::nullopt, margin);
    }
    if (const_gap < -slack) db.observe(p.t0, zero, zero, std::nullopt, drift_margin(p.t0, zero));
    drift = db.exact();

    VerdictBuilder jb(slack);
    if (jumps) {
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (atoms[j].weight <= 0.0) continue;
        const double dg = a1.g[j][0] - a2.g[j][0];
        const double start = std::max(box, std::abs(dg) + 1.0);
        const double level_gap = a1.G[j](0, 0) - a2.G[j](0, 0);
        if (std::abs(level_gap) > slack) {
          const double dir = level_gap > 0.0 ? -1.0 : 1.0;
          const auto [s, margin] = scaled_witness(start / std::abs(level_gap), slack, [&](double scale) {
            return jump_margin(p.t0, Vec::Constant(1, dir * scale), 0.0, j);
          });
          jb.observe(p.t0, Vec::Constant(1, dir * s), Vec::Constant(1, dir * s), j, margin);
        }
        const double slope = 1.0 + a1.G[j](0, 0);
        if (slope < -slack) {
          const auto [s, margin] = scaled_witness(start / std::abs(slope), slack,
                                                  [&](double scale) { return jump_margin(p.t0, zero, scale, j); });
          jb.observe(p.t0, Vec::Constant(1, s), zero, j, margin);
        }
        if (dg < -slack) jb.observe(p.t0, zero, zero, j, jump_margin(p.t0, zero, 0.0, j));
      }
    }
    jump = jb.exact();
  } else {
    const double slack = p.tolerances.check_slack(false);
    const auto points = sample_points(p, SampleShape::Signed, -1, 60);
    VerdictBuilder db(slack);
    for (const auto& pt : points) db.observe(pt.t, pt.x, zero, std::nullopt, drift_margin(pt.t, pt.x));
    drift = db.sampled();

    VerdictBuilder jb(slack);
    if (jumps) {
      for (const auto& pt : points) {
        const double gap = std::abs(pt.x_prime[0]);
        for (std::size_t j = 0; j < atoms.size(); ++j) {
          if (atoms[j].weight <= 0.0) continue;
          for (double step : {0.0, gap, std::abs(pt.x[0])}) {
            jb.observe(pt.t, pt.x + Vec::Constant(1, step), pt.x, j, jump_margin(pt.t, pt.x, step, j));
          }
        }
      }
    }
    jump = jb.sampled();
  }

  Verdict out;
  out.status = combine({&sigma, &drift, &jump});
  for (const Verdict* v : {&sigma, static_cast<const Verdict*>(&drift), static_cast<const Verdict*>(&jump)}) {
    out.samples_used += v->samples_used;
    if (v->min_margin && (!out.min_margin || *v->min_margin < *out.min_margin)) out.min_margin = v->min_margin;
    out.witnesses.insert(out.witnesses.end(), v->witnesses.begin(), v->witnesses.end());
  }
  std::stable_sort(out.witnesses.begin(), out.witnesses.end(),
                   [](const Witness& a, const Witness& b) { return a.margin < b.margin; });
  if (out.witnesses.size() > kMaxWitnesses) out.witnesses.resize(kMaxWitnesses);
  return out;
}

}  // namespace jumpcompare
