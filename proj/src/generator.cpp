#include "jumpcompare/generator.hpp"

#include "jumpcompare/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jumpcompare {

TestFunction::TestFunction(Value value, double fd_step) : value_(std::move(value)), fd_step_(fd_step) {
  if (!(fd_step > 0.0)) throw TestFunctionError("fd_step must be positive");
}

TestFunction& TestFunction::with_time_derivative(TimeDerivative f) {
  dt_ = std::move(f);
  return *this;
}

TestFunction& TestFunction::with_gradient(Gradient f) {
  grad_ = std::move(f);
  return *this;
}

TestFunction& TestFunction::with_hessian(Hessian f) {
  hess_ = std::move(f);
  return *this;
}

TestFunction TestFunction::finite_difference_only() const { return TestFunction(value_, fd_step_); }

double TestFunction::fd_time_derivative(double t, const Vec& x) const {
  const double step = fd_step_ * (1.0 + std::abs(t));
  return (value_(t + step, x) - value_(t - step, x)) / (2.0 * step);
}

Vec TestFunction::fd_gradient(double t, const Vec& x) const {
  const double step = 1e-5 * (1.0 + x.norm());
  Vec out(x.size());
  Vec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = value_(t, probe);
    probe[i] = x[i] - step;
    const double down = value_(t, probe);
    probe[i] = x[i];
    out[i] = (up - down) / (2.0 * step);
  }
  return out;
}

Mat TestFunction::fd_hessian(double t, const Vec& x) const {
  const double step = 1e-3 * (1.0 + x.norm());
  const auto n = x.size();
  Mat out(n, n);
  const double center = value_(t, x);
  Vec probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = x[i] + step;
    const double up = value_(t, probe);
    probe[i] = x[i] - step;
    const double down = value_(t, probe);
    probe[i] = x[i];
    out(i, i) = (up - 2.0 * center + down) / (step * step);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        probe[i] = x[i] + si * step;
        probe[j] = x[j] + sj * step;
        const double v = value_(t, probe);
        probe[i] = x[i];
        probe[j] = x[j];
        return v;
      };
      const double mixed = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * step * step);
      out(i, j) = mixed;
      out(j, i) = mixed;
    }
  }
  return out;
}

double TestFunction::time_derivative(double t, const Vec& x) const {
  return dt_ ? dt_(t, x) : fd_time_derivative(t, x);
}

Vec TestFunction::gradient(double t, const Vec& x) const { return grad_ ? grad_(t, x) : fd_gradient(t, x); }

Mat TestFunction::hessian(double t, const Vec& x) const { return hess_ ? hess_(t, x) : fd_hessian(t, x); }

void TestFunction::validate(const std::vector<std::pair<double, Vec>>& points) const {
  auto close = [](double analytic, double reference) {
    return std::abs(analytic - reference) <= 1e-5 * (1.0 + std::abs(reference));
  };
  for (const auto& [t, x] : points) {
    std::ostringstream where;
    where << " at t = " << t << ", x = (" << x.transpose() << ")";
    if (dt_ && !close(dt_(t, x), fd_time_derivative(t, x))) {
      throw TestFunctionError("time derivative disagrees with finite differences" + where.str());
    }
    if (grad_) {
      const Vec a = grad_(t, x);
      const Vec r = fd_gradient(t, x);
      if (a.size() != x.size()) throw TestFunctionError("gradient has the wrong size");
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!close(a[i], r[i])) throw TestFunctionError("gradient disagrees with finite differences" + where.str());
      }
    }
    if (hess_) {
      const Mat a = hess_(t, x);
      const Mat r = fd_hessian(t, x);
      if (a.rows() != x.size() || a.cols() != x.size()) throw TestFunctionError("Hessian has the wrong size");
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (Eigen::Index j = 0; j < x.size(); ++j) {
          if (!close(a(i, j), r(i, j))) throw TestFunctionError("Hessian disagrees with finite differences" + where.str());
        }
      }
    }
  }
}

double eval_L(const TestFunction& phi, const SdeModel& model, double t, const Vec& x) {
  const auto& c = model.coefficients;
  const Mat sigma = c.diffusion(t, x);
  const Mat hess = phi.hessian(t, x);
  return phi.time_derivative(t, x) + phi.gradient(t, x).dot(c.drift(t, x)) +
         0.5 * (hess * sigma * sigma.transpose()).trace();
}

double eval_B(const TestFunction& phi, const SdeModel& model, double t, const Vec& x) {
  const auto& atoms = model.marks.atoms;
  if (atoms.empty()) return 0.0;
  const double base = phi.value(t, x);
  const Vec grad = phi.gradient(t, x);
  double sum = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].weight == 0.0) continue;
    const Vec jump = model.coefficients.jump(t, x, j);
    sum += atoms[j].weight * (phi.value(t, x + jump) - base - grad.dot(jump));
  }
  return sum;
}

double supersolution_residual(const TestFunction& phi, const SdeModel& model_bar, double t, const ConePoint& x_bar,
                              double C) {
  const Vec packed = x_bar.packed();
  if (packed.size() != model_bar.state_dim()) throw DimensionMismatch("stacked model and cone point disagree");
  return eval_L(phi, model_bar, t, packed) + eval_B(phi, model_bar, t, packed) - C * phi.value(t, packed) +
         dist2_K(x_bar);
}

namespace {

Mat upper_block(const Mat& a1, const Mat& a2) {
  const auto m = a1.rows();
  Mat out = Mat::Zero(2 * m, 2 * m);
  out.topLeftCorner(m, m) = a1;
  out.topRightCorner(m, m) = a1 - a2;
  out.bottomRightCorner(m, m) = a2;
  return out;
}

Vec stacked_vector(const Vec& v1, const Vec& v2) {
  Vec out(v1.size() * 2);
  out << v1 - v2, v2;
  return out;
}

}  // namespace

SdeModel stack_models(const SdeModel& model1, const SdeModel& model2) {
  const int m = model1.state_dim();
  const int d = model1.noise_dim();
  if (model2.state_dim() != m || model2.noise_dim() != d) throw DimensionMismatch("models must share (m, d)");
  if (!model1.marks.same_atoms(model2.marks)) throw DimensionMismatch("models must share their mark atoms");

  const auto& c1 = model1.coefficients;
  const auto& c2 = model2.coefficients;
  if (c1.affine() && c2.affine()) {
    const auto& a1 = *c1.affine();
    const auto& a2 = *c2.affine();
    AffineCoefficients bar;
    bar.B = upper_block(a1.B, a2.B);
    bar.c = stacked_vector(a1.c, a2.c);
    for (std::size_t a = 0; a < a1.V.size(); ++a) bar.V.push_back(upper_block(a1.V[a], a2.V[a]));
    bar.U.resize(2 * m, d);
    bar.U << a1.U - a2.U, a2.U;
    for (std::size_t j = 0; j < a1.G.size(); ++j) {
      bar.G.push_back(upper_block(a1.G[j], a2.G[j]));
      bar.g.push_back(stacked_vector(a1.g[j], a2.g[j]));
    }
    return make_affine_model(std::move(bar), model1.marks);
  }

  const auto mi = static_cast<Eigen::Index>(m);
  auto drift = [c1, c2, mi](double t, const Vec& x, Vec& out) {
    const Vec sum = x.head(mi) + x.tail(mi);
    const Vec second = x.tail(mi);
    const Vec b2 = c2.drift(t, second);
    out.head(mi) = c1.drift(t, sum) - b2;
    out.tail(mi) = b2;
  };
  auto diffusion = [c1, c2, mi](double t, const Vec& x, Mat& out) {
    const Vec sum = x.head(mi) + x.tail(mi);
    const Vec second = x.tail(mi);
    const Mat s2 = c2.diffusion(t, second);
    out.topRows(mi) = c1.diffusion(t, sum) - s2;
    out.bottomRows(mi) = s2;
  };
  auto jump = [c1, c2, mi](double t, const Vec& x, std::size_t atom, Vec& out) {
    const Vec sum = x.head(mi) + x.tail(mi);
    const Vec second = x.tail(mi);
    const Vec g2 = c2.jump(t, second, atom);
    out.head(mi) = c1.jump(t, sum, atom) - g2;
    out.tail(mi) = g2;
  };
  SdeModel bar;
  bar.coefficients = CoefficientTriple(2 * m, d, c1.mark_dim(), drift, diffusion, jump);
  bar.marks = model1.marks;
  bar.budget.mu = 2.0 * (model1.budget.mu + model2.budget.mu);
  for (std::size_t j = 0; j < model1.budget.rho.size(); ++j) {
    bar.budget.rho.push_back(2.0 * (model1.budget.rho[j] + model2.budget.rho[j]));
  }
  return bar;
}

HingeSquare smoothed_hinge_square(double s, double eta) {
  if (s <= -eta) return {s * s, 2.0 * s, 2.0};
  if (s >= eta) return {0.0, 0.0, 0.0};
  // P(v) = -v^3 (v - 1)(v - 4) / 16 with v = 1 - s/eta matches s^2 to second
  // order at s = -eta and vanishes to second order at s = eta.
  const double v = 1.0 - s / eta;
  const double v2 = v * v;
  const double v3 = v2 * v;
  const double p = (-v3 * v2 + 5.0 * v2 * v2 - 4.0 * v3) / 16.0;
  const double dp = (-5.0 * v2 * v2 + 20.0 * v3 - 12.0 * v2) / 16.0;
  const double ddp = (-20.0 * v3 + 60.0 * v2 - 24.0 * v) / 16.0;
  return {eta * eta * p, -eta * dp, ddp};
}

SmoothedDist2 smoothed_dist2(const ConePoint& x_bar, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const auto m = x_bar.x1.size();
  SmoothedDist2 out;
  out.gradient = Vec::Zero(2 * m);
  out.hessian_diag = Vec::Zero(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto q = smoothed_hinge_square(x_bar.x1[k], eta);
    out.value += q.value;
    out.gradient[k] = q.first;
    out.hessian_diag[k] = q.second;
  }
  return out;
}

TestFunction smoothed_dist2_function(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  TestFunction phi([eta](double, const Vec& x) { return smoothed_dist2(ConePoint::unpack(x), eta).value; });
  phi.with_time_derivative([](double, const Vec&) { return 0.0; })
      .with_gradient([eta](double, const Vec& x) { return smoothed_dist2(ConePoint::unpack(x), eta).gradient; })
      .with_hessian([eta](double, const Vec& x) {
        return Mat(smoothed_dist2(ConePoint::unpack(x), eta).hessian_diag.asDiagonal());
      });
  return phi;
}

SpotCheckReport pide_spotcheck(const ComparisonProblem& problem, std::size_t points, double eta) {
  validate_problem(problem);
  const SdeModel bar = stack_models(problem.model1, problem.model2);
  const auto phi = smoothed_dist2_function(eta);
  const auto m = static_cast<Eigen::Index>(problem.state_dim());
  const double box = problem.sampling.box;

  SpotCheckReport report;
  report.C = constant_C(bar.budget, bar.marks);
  report.eta = eta;
  report.eps = problem.tolerances.check_slack(false);

  CounterStream stream(problem.sampling.seed, 200, kSamplingLane);
  auto uniform_in = [&](double lo, double hi) { return lo + (hi - lo) * stream.uniform(); };
  for (std::size_t n = 0; n < points; ++n) {
    const double t = uniform_in(problem.t0, problem.horizon);
    ConePoint inside{Vec(m), Vec(m)};
    ConePoint outside{Vec(m), Vec(m)};
    for (Eigen::Index k = 0; k < m; ++k) {
      inside.x1[k] = uniform_in(2.0 * eta, std::max(box, 4.0 * eta));
      inside.x2[k] = uniform_in(-box, box);
      outside.x1[k] = uniform_in(-box, box);
      outside.x2[k] = uniform_in(-box, box);
    }
    outside.x1[static_cast<Eigen::Index>(n % static_cast<std::size_t>(m))] = -uniform_in(2.0 * eta, box);

    const double r_in = supersolution_residual(phi, bar, t, inside, report.C);
    const double r_out = supersolution_residual(phi, bar, t, outside, report.C);
    if (report.interior_points == 0 || r_in > report.max_interior_residual) report.max_interior_residual = r_in;
    if (report.exterior_points == 0 || r_out > report.max_exterior_residual) report.max_exterior_residual = r_out;
    ++report.interior_points;
    ++report.exterior_points;
    if (r_in > report.eps) ++report.interior_exceeding;
  }
  return report;
}

}  // namespace jumpcompare
