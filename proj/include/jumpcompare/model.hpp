#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumpcompare {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

//! Base class for well-posedness failures of a model or problem.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ModelError {
 public:
  using ModelError::ModelError;
};

class NegativeWeight : public ModelError {
 public:
  using ModelError::ModelError;
};

class ZeroMark : public ModelError {
 public:
  using ModelError::ModelError;
};

class OrderError : public ModelError {
 public:
  using ModelError::ModelError;
};

struct MarkAtom {
  Vec mark;
  double weight = 0.0;
};

/// Finite jump-mark measure n(de) = sum_j w_j delta_{e_j} on E = R^l \ {0}.
struct MarkMeasure {
  int dimension = 1;
  std::vector<MarkAtom> atoms;

  std::size_t size() const { return atoms.size(); }
  double total_mass() const;
  bool same_atoms(const MarkMeasure& other) const;
};

/// Lipschitz/growth constant mu and per-atom rho(e_j).
struct RegularityBudget {
  double mu = 0.0;
  std::vector<double> rho;
};

/// b(x) = B x + c, sigma_{k,alpha}(x) = sum_j V[alpha](k,j) x_j + U(k,alpha),
/// gamma(x, e_j) = G[j] x + g[j].
struct AffineCoefficients {
  Mat B;
  Vec c;
  std::vector<Mat> V;  // one m x m slice per Brownian direction alpha
  Mat U;               // m x d
  std::vector<Mat> G;  // one m x m matrix per atom
  std::vector<Vec> g;

  int state_dim() const { return static_cast<int>(c.size()); }
  int noise_dim() const { return static_cast<int>(U.cols()); }
  std::size_t atom_count() const { return G.size(); }

  //! Throws DimensionMismatch when the blocks disagree on (m, d, atoms).
  void check_dimensions() const;

  //! Drift minus the exact jump compensator: B - sum_j w_j G_j, c - sum_j w_j g_j.
  Mat compensated_linear(const MarkMeasure& marks) const;
  Vec compensated_constant(const MarkMeasure& marks) const;

  static AffineCoefficients zeros(int m, int d, std::size_t atoms);
};

using DriftFn = std::function<void(double t, const Vec& x, Vec& out)>;
using DiffusionFn = std::function<void(double t, const Vec& x, Mat& out)>;
using JumpFn = std::function<void(double t, const Vec& x, std::size_t atom, Vec& out)>;

/// Coefficients (b, sigma, gamma) of one jump SDE. Evaluators write into
/// caller-sized outputs so the simulation loop does not allocate.
class CoefficientTriple {
 public:
  CoefficientTriple() = default;
  CoefficientTriple(int m, int d, int mark_dim, DriftFn drift, DiffusionFn diffusion, JumpFn jump);

  static CoefficientTriple from_affine(AffineCoefficients affine, int mark_dim = 1);

  int state_dim() const { return m_; }
  int noise_dim() const { return d_; }
  int mark_dim() const { return mark_dim_; }
  const std::optional<AffineCoefficients>& affine() const { return affine_; }

  //! Same evaluators with the affine parameterization dropped, so checkers
  //! treat the coefficients as a black box.
  CoefficientTriple without_affine() const;

  void drift(double t, const Vec& x, Vec& out) const { drift_(t, x, out); }
  void diffusion(double t, const Vec& x, Mat& out) const { diffusion_(t, x, out); }
  void jump(double t, const Vec& x, std::size_t atom, Vec& out) const { jump_(t, x, atom, out); }

  Vec drift(double t, const Vec& x) const;
  Mat diffusion(double t, const Vec& x) const;
  Vec jump(double t, const Vec& x, std::size_t atom) const;

 private:
  int m_ = 0;
  int d_ = 0;
  int mark_dim_ = 1;
  DriftFn drift_;
  DiffusionFn diffusion_;
  JumpFn jump_;
  std::optional<AffineCoefficients> affine_;
};

struct SdeModel {
  CoefficientTriple coefficients;
  MarkMeasure marks;
  RegularityBudget budget;

  int state_dim() const { return coefficients.state_dim(); }
  int noise_dim() const { return coefficients.noise_dim(); }
};

/// Default near-boundary probing magnitudes; the box half-width R is appended.
std::vector<double> default_ladder(double box);

struct SampleDomain {
  double box = 2.0;
  std::size_t count = 2000;
  std::vector<double> ladder = default_ladder(2.0);
  std::uint64_t seed = 7;
};

struct Tolerances {
  // Unset: 1e-9 for affine-exact comparisons, 1e-6 for sampled checks.
  std::optional<double> eps_check;
  // Unset: 5 sqrt(h) (1 + |x1| + |x2|).
  std::optional<double> eps_path;
  double eps_lin = 1e-12;

  double check_slack(bool exact) const { return eps_check.value_or(exact ? 1e-9 : 1e-6); }
};

struct ComparisonProblem {
  SdeModel model1;
  SdeModel model2;
  double t0 = 0.0;
  double horizon = 1.0;  // terminal time T
  Vec x1;
  Vec x2;
  SampleDomain sampling;
  Tolerances tolerances;
  // Larger C* than the minimal admissible value; weakens Violated verdicts.
  std::optional<double> cstar_override;

  int state_dim() const { return model1.state_dim(); }
  bool both_affine() const {
    return model1.coefficients.affine().has_value() && model2.coefficients.affine().has_value();
  }
};

void validate_model(const SdeModel& model);
void validate_problem(const ComparisonProblem& problem);

//! Spectral norm by power iteration on A^T A (relative tolerance 1e-10).
double operator_norm(const Mat& a);

RegularityBudget lipschitz_certificate(const AffineCoefficients& affine, const MarkMeasure& marks);

double constant_C(const RegularityBudget& budget, const MarkMeasure& marks);
double constant_Cstar(const RegularityBudget& budget, const MarkMeasure& marks);

//! Budget valid for both models at once (componentwise max of mu and rho).
RegularityBudget joint_budget(const RegularityBudget& a, const RegularityBudget& b);

//! Minimal C* admissible for the pair, or the problem's override.
double problem_cstar(const ComparisonProblem& problem);

SdeModel make_affine_model(AffineCoefficients affine, MarkMeasure marks);

}  // namespace jumpcompare
