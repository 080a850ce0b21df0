#pragma once

// Integro-differential generator of a jump SDE and the residual of the
// viability PDE  L u + B u - C u + d_K^2 = 0,  used for spot diagnostics.

#include "jumpcompare/geometry.hpp"
#include "jumpcompare/model.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace jumpcompare {

class TestFunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// phi(t, x) with optional analytic derivatives. Missing derivatives fall
/// back to central differences: gradient step 1e-5 (1+|x|), Hessian step
/// 1e-3 (1+|x|), time step fd_step (1+|t|).
class TestFunction {
 public:
  using Value = std::function<double(double t, const Vec& x)>;
  using TimeDerivative = std::function<double(double t, const Vec& x)>;
  using Gradient = std::function<Vec(double t, const Vec& x)>;
  using Hessian = std::function<Mat(double t, const Vec& x)>;

  explicit TestFunction(Value value, double fd_step = 1e-5);

  TestFunction& with_time_derivative(TimeDerivative f);
  TestFunction& with_gradient(Gradient f);
  TestFunction& with_hessian(Hessian f);

  //! Checks every analytic derivative against finite differences at the given
  //! points (tolerance 1e-5 (1 + |reference|)); throws TestFunctionError.
  void validate(const std::vector<std::pair<double, Vec>>& points) const;

  double value(double t, const Vec& x) const { return value_(t, x); }
  double time_derivative(double t, const Vec& x) const;
  Vec gradient(double t, const Vec& x) const;
  Mat hessian(double t, const Vec& x) const;

  double fd_time_derivative(double t, const Vec& x) const;
  Vec fd_gradient(double t, const Vec& x) const;
  Mat fd_hessian(double t, const Vec& x) const;

  bool has_analytic_derivatives() const { return dt_ && grad_ && hess_; }
  //! Same function with every analytic derivative removed.
  TestFunction finite_difference_only() const;

 private:
  Value value_;
  double fd_step_;
  TimeDerivative dt_;
  Gradient grad_;
  Hessian hess_;
};

double eval_L(const TestFunction& phi, const SdeModel& model, double t, const Vec& x);
double eval_B(const TestFunction& phi, const SdeModel& model, double t, const Vec& x);

//! L phi + B phi - C phi + d_K^2 at the packed point x_bar.
double supersolution_residual(const TestFunction& phi, const SdeModel& model_bar, double t, const ConePoint& x_bar,
                              double C);

//! The 2m-dimensional system of (X1 - X2, X2). Affine pairs stay affine (with
//! a certified budget); otherwise the budget is the triangle-inequality bound.
SdeModel stack_models(const SdeModel& model1, const SdeModel& model2);

/// C^2 surrogate of the hinge square (s^-)^2: exact for |s| >= eta, quintic
/// blend on [-eta, eta].
struct HingeSquare {
  double value;
  double first;
  double second;
};
HingeSquare smoothed_hinge_square(double s, double eta);

struct SmoothedDist2 {
  double value = 0.0;
  Vec gradient;
  Vec hessian_diag;
};
SmoothedDist2 smoothed_dist2(const ConePoint& x_bar, double eta);

//! smoothed_dist2 packaged as a time-independent test function on R^{2m}.
TestFunction smoothed_dist2_function(double eta);

struct SpotCheckReport {
  std::size_t interior_points = 0;
  std::size_t exterior_points = 0;
  double max_interior_residual = 0.0;
  double max_exterior_residual = 0.0;
  std::size_t interior_exceeding = 0;  // residual > eps
  double C = 0.0;
  double eta = 0.0;
  double eps = 0.0;
};

//! Residual diagnostics for the stacked system of a comparison problem:
//! interior points of K (x1_k >= 2 eta) and points outside K.
SpotCheckReport pide_spotcheck(const ComparisonProblem& problem, std::size_t points, double eta = 1e-3);

}  // namespace jumpcompare
