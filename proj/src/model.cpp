#include "jumpcompare/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <utility>

namespace jumpcompare {

double MarkMeasure::total_mass() const {
  double total = 0.0;
  for (const auto& atom : atoms) total += atom.weight;
  return total;
}

bool MarkMeasure::same_atoms(const MarkMeasure& other) const {
  if (dimension != other.dimension || atoms.size() != other.atoms.size()) return false;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].weight != other.atoms[j].weight) return false;
    if (atoms[j].mark.size() != other.atoms[j].mark.size()) return false;
    if (atoms[j].mark != other.atoms[j].mark) return false;
  }
  return true;
}

void AffineCoefficients::check_dimensions() const {
  const auto m = c.size();
  const auto d = U.cols();
  auto fail = [](const std::string& what) { throw DimensionMismatch("affine coefficients: " + what); };
  if (m == 0) fail("state dimension must be positive");
  if (B.rows() != m || B.cols() != m) fail("B must be m x m");
  if (U.rows() != m) fail("U must be m x d");
  if (static_cast<Eigen::Index>(V.size()) != d) fail("V must have one m x m slice per Brownian direction");
  for (const auto& slice : V) {
    if (slice.rows() != m || slice.cols() != m) fail("V slices must be m x m");
  }
  if (G.size() != g.size()) fail("G and g must have one entry per atom");
  for (std::size_t j = 0; j < G.size(); ++j) {
    if (G[j].rows() != m || G[j].cols() != m) fail("G_j must be m x m");
    if (g[j].size() != m) fail("g_j must have length m");
  }
}

Mat AffineCoefficients::compensated_linear(const MarkMeasure& marks) const {
  Mat out = B;
  for (std::size_t j = 0; j < G.size(); ++j) out -= marks.atoms[j].weight * G[j];
  return out;
}

Vec AffineCoefficients::compensated_constant(const MarkMeasure& marks) const {
  Vec out = c;
  for (std::size_t j = 0; j < g.size(); ++j) out -= marks.atoms[j].weight * g[j];
  return out;
}

AffineCoefficients AffineCoefficients::zeros(int m, int d, std::size_t atoms) {
  AffineCoefficients a;
  a.B = Mat::Zero(m, m);
  a.c = Vec::Zero(m);
  a.V.assign(static_cast<std::size_t>(d), Mat::Zero(m, m));
  a.U = Mat::Zero(m, d);
  a.G.assign(atoms, Mat::Zero(m, m));
  a.g.assign(atoms, Vec::Zero(m));
  return a;
}

CoefficientTriple::CoefficientTriple(int m, int d, int mark_dim, DriftFn drift, DiffusionFn diffusion,
                                     JumpFn jump)
    : m_(m),
      d_(d),
      mark_dim_(mark_dim),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      jump_(std::move(jump)) {}

CoefficientTriple CoefficientTriple::from_affine(AffineCoefficients affine, int mark_dim) {
  affine.check_dimensions();
  const int m = affine.state_dim();
  const int d = affine.noise_dim();
  // Evaluators share one immutable copy of the parameters.
  auto p = std::make_shared<const AffineCoefficients>(affine);
  CoefficientTriple triple(
      m, d, mark_dim, [p](double, const Vec& x, Vec& out) { out.noalias() = p->B * x + p->c; },
      [p](double, const Vec& x, Mat& out) {
        out = p->U;
        for (std::size_t a = 0; a < p->V.size(); ++a) out.col(static_cast<Eigen::Index>(a)).noalias() += p->V[a] * x;
      },
      [p](double, const Vec& x, std::size_t atom, Vec& out) { out.noalias() = p->G[atom] * x + p->g[atom]; });
  triple.affine_ = std::move(affine);
  return triple;
}

CoefficientTriple CoefficientTriple::without_affine() const {
  CoefficientTriple copy = *this;
  copy.affine_.reset();
  return copy;
}

Vec CoefficientTriple::drift(double t, const Vec& x) const {
  Vec out(m_);
  drift_(t, x, out);
  return out;
}

Mat CoefficientTriple::diffusion(double t, const Vec& x) const {
  Mat out(m_, d_);
  diffusion_(t, x, out);
  return out;
}

Vec CoefficientTriple::jump(double t, const Vec& x, std::size_t atom) const {
  Vec out(m_);
  jump_(t, x, atom, out);
  return out;
}

std::vector<double> default_ladder(double box) { return {1e-6, 1e-4, 1e-2, 1e-1, 1.0, box}; }

void validate_model(const SdeModel& model) {
  const auto& coeff = model.coefficients;
  const auto& marks = model.marks;
  if (coeff.state_dim() < 1) throw DimensionMismatch("state dimension m must be at least 1");
  if (coeff.noise_dim() < 1) throw DimensionMismatch("Brownian dimension d must be at least 1");
  if (marks.dimension < 1) throw DimensionMismatch("mark dimension l must be at least 1");
  if (coeff.mark_dim() != marks.dimension) {
    std::ostringstream os;
    os << "jump coefficient expects marks in R^" << coeff.mark_dim() << " but the mark measure lives in R^"
       << marks.dimension;
    throw DimensionMismatch(os.str());
  }
  for (std::size_t j = 0; j < marks.atoms.size(); ++j) {
    const auto& atom = marks.atoms[j];
    if (atom.mark.size() != marks.dimension) {
      throw DimensionMismatch("atom " + std::to_string(j) + " has the wrong mark dimension");
    }
    if (!std::isfinite(atom.weight)) throw NegativeWeight("atom " + std::to_string(j) + " has a non-finite weight");
    if (atom.weight < 0.0) throw NegativeWeight("atom " + std::to_string(j) + " has a negative weight");
    if (!atom.mark.allFinite()) throw DimensionMismatch("atom " + std::to_string(j) + " has a non-finite mark");
    if ((atom.mark.array() == 0.0).all()) throw ZeroMark("atom " + std::to_string(j) + " is the zero mark");
  }
  const auto& budget = model.budget;
  if (!(budget.mu >= 0.0) || !std::isfinite(budget.mu)) throw ModelError("budget mu must be finite and >= 0");
  if (budget.rho.size() != marks.atoms.size()) {
    throw DimensionMismatch("budget rho needs one entry per mark atom");
  }
  double integral = 0.0;
  for (std::size_t j = 0; j < budget.rho.size(); ++j) {
    if (!(budget.rho[j] >= 0.0) || !std::isfinite(budget.rho[j])) {
      throw ModelError("budget rho must be finite and >= 0");
    }
    integral += marks.atoms[j].weight * budget.rho[j] * budget.rho[j];
  }
  if (!std::isfinite(integral)) throw ModelError("integral of rho^2 against n(de) is not finite");
  if (const auto& affine = coeff.affine()) {
    affine->check_dimensions();
    if (affine->state_dim() != coeff.state_dim() || affine->noise_dim() != coeff.noise_dim()) {
      throw DimensionMismatch("affine parameters disagree with the coefficient dimensions");
    }
    if (affine->atom_count() != marks.atoms.size()) {
      throw DimensionMismatch("affine jump blocks need one (G, g) pair per mark atom");
    }
  }
}

void validate_problem(const ComparisonProblem& p) {
  validate_model(p.model1);
  validate_model(p.model2);
  if (p.model1.state_dim() != p.model2.state_dim() || p.model1.noise_dim() != p.model2.noise_dim()) {
    throw DimensionMismatch("both models must share (m, d)");
  }
  if (!p.model1.marks.same_atoms(p.model2.marks)) {
    throw DimensionMismatch("both models must share the same mark atoms and weights");
  }
  if (!(p.t0 >= 0.0) || !(p.horizon > p.t0)) throw ModelError("horizon must satisfy 0 <= t0 < T");
  const auto m = p.state_dim();
  if (p.x1.size() != m || p.x2.size() != m) throw DimensionMismatch("initial states must have length m");
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(p.x1[k] >= p.x2[k])) throw OrderError("initial states must satisfy x1 >= x2 componentwise");
  }
  if (!(p.sampling.box > 0.0)) throw ModelError("sampling box half-width must be positive");
  if (p.sampling.count < 1) throw ModelError("sampling count must be at least 1");
  const auto& tol = p.tolerances;
  if ((tol.eps_check && !(*tol.eps_check > 0.0)) || (tol.eps_path && !(*tol.eps_path > 0.0)) ||
      !(tol.eps_lin > 0.0)) {
    throw ModelError("tolerances must be strictly positive");
  }
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  const Mat gram = a.transpose() * a;
  const auto n = gram.cols();
  if (gram.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  auto iterate = [&](Vec v) {
    double estimate = 0.0;
    for (int it = 0; it < 20000; ++it) {
      const double norm = v.norm();
      if (norm == 0.0) return estimate;
      v /= norm;
      Vec w = gram * v;
      const double next = v.dot(w);
      if (std::abs(next - estimate) <= 1e-10 * std::abs(next)) return std::max(next, estimate);
      estimate = next;
      v = std::move(w);
    }
    return estimate;
  };

  // Several starts so that no start vector orthogonal to the top singular
  // direction can hide it.
  double best = iterate(Vec::Ones(n));
  for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, iterate(Vec::Unit(n, i)));
  Vec skew(n);
  for (Eigen::Index i = 0; i < n; ++i) skew[i] = 1.0 + 0.37 * static_cast<double>(i) * (i % 2 == 0 ? 1.0 : -1.0);
  best = std::max(best, iterate(skew));
  return std::sqrt(std::max(best, 0.0));
}

RegularityBudget lipschitz_certificate(const AffineCoefficients& affine, const MarkMeasure& marks) {
  affine.check_dimensions();
  if (affine.atom_count() != marks.atoms.size()) {
    throw DimensionMismatch("affine jump blocks need one (G, g) pair per mark atom");
  }
  const auto m = affine.state_dim();
  const auto d = affine.noise_dim();
  // x -> sigma(x) - U as a linear map R^m -> R^{m d} with Frobenius output norm.
  Mat stacked(m * d, m);
  for (Eigen::Index a = 0; a < d; ++a) stacked.middleRows(a * m, m) = affine.V[static_cast<std::size_t>(a)];

  const double lipschitz = operator_norm(affine.B) + operator_norm(stacked);
  const double growth = affine.c.norm() + affine.U.norm();

  RegularityBudget budget;
  budget.mu = std::max(lipschitz, growth);
  budget.rho.reserve(affine.atom_count());
  for (std::size_t j = 0; j < affine.atom_count(); ++j) {
    budget.rho.push_back(std::max(operator_norm(affine.G[j]), affine.g[j].norm()));
  }
  return budget;
}

namespace {

double rho_integral(const RegularityBudget& budget, const MarkMeasure& marks) {
  if (budget.rho.size() != marks.atoms.size()) throw DimensionMismatch("budget rho needs one entry per mark atom");
  double sum = 0.0;
  for (std::size_t j = 0; j < budget.rho.size(); ++j) sum += marks.atoms[j].weight * budget.rho[j] * budget.rho[j];
  return sum;
}

}  // namespace

double constant_C(const RegularityBudget& budget, const MarkMeasure& marks) {
  const double mu = budget.mu;
  return 1.0 + 2.0 * mu + mu * mu + rho_integral(budget, marks);
}

double constant_Cstar(const RegularityBudget& budget, const MarkMeasure& marks) {
  const double mu = budget.mu;
  return 4.0 * mu + mu * mu + rho_integral(budget, marks);
}

RegularityBudget joint_budget(const RegularityBudget& a, const RegularityBudget& b) {
  if (a.rho.size() != b.rho.size()) throw DimensionMismatch("budgets cover different atom counts");
  RegularityBudget out;
  out.mu = std::max(a.mu, b.mu);
  out.rho.resize(a.rho.size());
  for (std::size_t j = 0; j < a.rho.size(); ++j) out.rho[j] = std::max(a.rho[j], b.rho[j]);
  return out;
}

double problem_cstar(const ComparisonProblem& problem) {
  if (problem.cstar_override) return *problem.cstar_override;
  return constant_Cstar(joint_budget(problem.model1.budget, problem.model2.budget), problem.model1.marks);
}

SdeModel make_affine_model(AffineCoefficients affine, MarkMeasure marks) {
  SdeModel model;
  model.budget = lipschitz_certificate(affine, marks);
  model.coefficients = CoefficientTriple::from_affine(std::move(affine), marks.dimension);
  model.marks = std::move(marks);
  return model;
}

}  // namespace jumpcompare
