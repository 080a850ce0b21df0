#pragma once

// Symmetric-matrix geometry for the PSD order X1 >= X2 (X1 - X2 in S^m_+)
// and the comparison check for matrix-valued jump SDEs with d = 1.

#include "jumpcompare/conditions.hpp"
#include "jumpcompare/engine.hpp"
#include "jumpcompare/model.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace jumpcompare {

/// Symmetric m x m matrix stored as its upper triangle, row by row.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int order);

  //! Throws DimensionMismatch if `a` is not square or not symmetric within tol.
  static SymMatrix from_dense(const Mat& a, double tol = 1e-12);
  static SymMatrix identity(int order);
  static SymMatrix diagonal(const Vec& diag);

  int order() const { return order_; }
  const std::vector<double>& packed() const { return packed_; }

  double operator()(int i, int j) const { return packed_[index(i, j)]; }
  double& at(int i, int j) { return packed_[index(i, j)]; }

  Mat dense() const;
  double frobenius_norm() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  bool operator==(const SymMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const;

  int order_ = 0;
  std::vector<double> packed_;
};

//! tr(a b).
double trace_inner(const SymMatrix& a, const SymMatrix& b);

//! Coordinates on the orthonormal basis {E_ii} u {(E_ij + E_ji)/sqrt 2}; an
//! isometry from (S^m, Frobenius) onto R^{m(m+1)/2}.
Vec svec(const SymMatrix& y);
SymMatrix smat(const Vec& v, int order);
int svec_size(int order);

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(double residual, const std::string& what) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct EigDecomp {
  Mat Q;       // orthogonal, columns are eigenvectors
  Vec lambda;  // ascending
};

//! Cyclic Jacobi until the off-diagonal Frobenius mass is <= 1e-13 |y|_F
//! (at most 50 sweeps).
EigDecomp eig_sym(const SymMatrix& y);

struct PsdSplit {
  SymMatrix plus;
  SymMatrix minus;
};

PsdSplit psd_split(const SymMatrix& y);
double dist2_psd(const SymMatrix& y);
SymMatrix grad_dist2_psd(const SymMatrix& y);
double lambda_min(const SymMatrix& y);

struct HessQuadForm {
  double value = 0.0;
  bool degenerate = false;  // some |lambda_i| <= eta_sep; value is a finite difference
};

//! Second derivative of s -> dist2_psd(y + s H) at s = 0, via the spectral
//! divided-difference formula for phi(l) = (l^-)^2.
HessQuadForm hess_quadform_psd(const SymMatrix& y, const SymMatrix& H, double eta_sep = 1e-8);

using MatrixFn = std::function<SymMatrix(double t, const SymMatrix& x)>;
using MatrixJumpFn = std::function<SymMatrix(double t, const SymMatrix& x, std::size_t atom)>;

/// Affine coefficients acting on svec coordinates:
/// b(x) = smat(drift_linear svec(x)) + drift_constant, and likewise for sigma
/// and each jump atom.
struct MatrixAffine {
  Mat drift_linear;
  SymMatrix drift_constant;
  Mat diffusion_linear;
  SymMatrix diffusion_constant;
  std::vector<Mat> jump_linear;
  std::vector<SymMatrix> jump_constant;

  static MatrixAffine zeros(int order, std::size_t atoms);
};

/// Matrix SDE with d = 1, held as its svec-coordinate vector model so the
/// engine and the regularity budget carry over unchanged.
class MatrixModel {
 public:
  MatrixModel() = default;
  static MatrixModel from_affine(const MatrixAffine& affine, MarkMeasure marks);
  static MatrixModel from_functions(int order, MatrixFn drift, MatrixFn diffusion, MatrixJumpFn jump,
                                    MarkMeasure marks, RegularityBudget budget);

  int order() const { return order_; }
  const SdeModel& vector_model() const { return vector_; }
  const MarkMeasure& marks() const { return vector_.marks; }
  const RegularityBudget& budget() const { return vector_.budget; }

  SymMatrix drift(double t, const SymMatrix& x) const;
  SymMatrix diffusion(double t, const SymMatrix& x) const;
  SymMatrix jump(double t, const SymMatrix& x, std::size_t atom) const;

 private:
  int order_ = 0;
  SdeModel vector_;
};

struct MatrixComparisonProblem {
  MatrixModel model1;
  MatrixModel model2;
  double t0 = 0.0;
  double horizon = 1.0;
  SymMatrix x1;
  SymMatrix x2;
  SampleDomain sampling;
  Tolerances tolerances;
  std::optional<double> cstar_override;
};

void validate_matrix_problem(const MatrixComparisonProblem& p);

//! Minimal C* of the pair (joint budget), or the override.
double matrix_cstar(const MatrixComparisonProblem& p);

struct Theorem37Value {
  double lhs = 0.0;
  double rhs = 0.0;
  bool degenerate = false;
};

//! Evaluates the matrix comparison inequality, with the Hessian taken at x.
Theorem37Value eval_theorem37(const MatrixComparisonProblem& p, double t, const SymMatrix& x,
                              const SymMatrix& x_prime);

//! Sampled check; degenerate samples are counted in Verdict::samples_used
//! but never produce a Violated verdict.
struct Theorem37Check {
  Verdict verdict;
  std::size_t degenerate_samples = 0;
};
Theorem37Check check_theorem37(const MatrixComparisonProblem& p);

McReport mc_matrix_comparison(const MatrixComparisonProblem& p, std::uint64_t paths, double h, std::uint64_t seed,
                              const McOptions& options = {});

}  // namespace jumpcompare
