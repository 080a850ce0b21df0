#include "jumpcompare/psdcone.hpp"

#include "jumpcompare/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace jumpcompare {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

SymMatrix::SymMatrix(int order) : order_(order), packed_(static_cast<std::size_t>(svec_size(order)), 0.0) {
  if (order < 1) throw DimensionMismatch("matrix order must be positive");
}

std::size_t SymMatrix::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Row i of the upper triangle starts after sum_{r<i} (order - r) entries.
  const auto ii = static_cast<std::size_t>(i);
  const auto n = static_cast<std::size_t>(order_);
  return ii * n - ii * (ii - 1) / 2 + static_cast<std::size_t>(j - i);
}

SymMatrix SymMatrix::from_dense(const Mat& a, double tol) {
  if (a.rows() != a.cols() || a.rows() < 1) throw DimensionMismatch("symmetric matrix must be square");
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol * scale) throw DimensionMismatch("matrix is not symmetric");
  const int m = static_cast<int>(a.rows());
  SymMatrix out(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) out.at(i, j) = 0.5 * (a(i, j) + a(j, i));
  }
  return out;
}

SymMatrix SymMatrix::identity(int order) {
  SymMatrix out(order);
  for (int i = 0; i < order; ++i) out.at(i, i) = 1.0;
  return out;
}

SymMatrix SymMatrix::diagonal(const Vec& diag) {
  SymMatrix out(static_cast<int>(diag.size()));
  for (int i = 0; i < out.order(); ++i) out.at(i, i) = diag[i];
  return out;
}

Mat SymMatrix::dense() const {
  Mat out(order_, order_);
  for (int i = 0; i < order_; ++i) {
    for (int j = i; j < order_; ++j) {
      out(i, j) = (*this)(i, j);
      out(j, i) = out(i, j);
    }
  }
  return out;
}

double SymMatrix::frobenius_norm() const { return svec(*this).norm(); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (order_ != other.order_) throw DimensionMismatch("matrix orders differ");
  for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] += other.packed_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (order_ != other.order_) throw DimensionMismatch("matrix orders differ");
  for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] -= other.packed_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (auto& v : packed_) v *= s;
  return *this;
}

double trace_inner(const SymMatrix& a, const SymMatrix& b) { return svec(a).dot(svec(b)); }

int svec_size(int order) { return order * (order + 1) / 2; }

Vec svec(const SymMatrix& y) {
  const int m = y.order();
  Vec out(svec_size(m));
  Eigen::Index n = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) out[n++] = (i == j) ? y(i, j) : kSqrt2 * y(i, j);
  }
  return out;
}

SymMatrix smat(const Vec& v, int order) {
  if (v.size() != svec_size(order)) throw DimensionMismatch("svec length does not match the matrix order");
  SymMatrix out(order);
  Eigen::Index n = 0;
  for (int i = 0; i < order; ++i) {
    for (int j = i; j < order; ++j) out.at(i, j) = (i == j) ? v[n++] : v[n++] / kSqrt2;
  }
  return out;
}

EigDecomp eig_sym(const SymMatrix& y) {
  const int m = y.order();
  Mat a = y.dense();
  Mat q = Mat::Identity(m, m);
  const double scale = a.norm();
  auto off_mass = [&] {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i != j) sum += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(sum);
  };

  constexpr int kMaxSweeps = 50;
  double off = off_mass();
  int sweep = 0;
  while (off > 1e-13 * scale) {
    if (sweep++ == kMaxSweeps) {
      std::ostringstream os;
      os << "Jacobi eigensolver did not converge after " << kMaxSweeps << " sweeps (off-diagonal mass " << off << ")";
      throw NoConvergence(off, os.str());
    }
    for (int p = 0; p < m - 1; ++p) {
      for (int r = p + 1; r < m; ++r) {
        const double apr = a(p, r);
        if (apr == 0.0) continue;
        const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double akp = a(k, p);
          const double akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (int k = 0; k < m; ++k) {
          const double apk = a(p, k);
          const double ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        for (int k = 0; k < m; ++k) {
          const double qkp = q(k, p);
          const double qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
    off = off_mass();
  }

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  EigDecomp out{Mat(m, m), Vec(m)};
  for (int i = 0; i < m; ++i) {
    out.lambda[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.Q.col(i) = q.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace {

SymMatrix spectral(const EigDecomp& e, const Vec& values) {
  const Mat dense = e.Q * values.asDiagonal() * e.Q.transpose();
  return SymMatrix::from_dense(0.5 * (dense + dense.transpose()), 1.0);
}

}  // namespace

PsdSplit psd_split(const SymMatrix& y) {
  const auto e = eig_sym(y);
  return {spectral(e, e.lambda.cwiseMax(0.0)), spectral(e, (-e.lambda).cwiseMax(0.0))};
}

double dist2_psd(const SymMatrix& y) {
  const auto e = eig_sym(y);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < e.lambda.size(); ++i) {
    if (e.lambda[i] < 0.0) sum += e.lambda[i] * e.lambda[i];
  }
  return sum;
}

SymMatrix grad_dist2_psd(const SymMatrix& y) { return -2.0 * psd_split(y).minus; }

double lambda_min(const SymMatrix& y) { return eig_sym(y).lambda[0]; }

HessQuadForm hess_quadform_psd(const SymMatrix& y, const SymMatrix& H, double eta_sep) {
  if (y.order() != H.order()) throw DimensionMismatch("matrix orders differ");
  const auto e = eig_sym(y);
  const auto& lam = e.lambda;
  const bool degenerate = (lam.array().abs() <= eta_sep).any();
  if (degenerate) {
    const double s = 1e-4 * (1.0 + y.frobenius_norm()) / std::max(1.0, H.frobenius_norm());
    const double value = (dist2_psd(y + s * H) - 2.0 * dist2_psd(y) + dist2_psd(y - s * H)) / (s * s);
    return {value, true};
  }

  auto first = [](double l) { return l < 0.0 ? 2.0 * l : 0.0; };  // phi'(l) = -2 l^-
  auto second = [](double l) { return l < 0.0 ? 2.0 : 0.0; };
  const Mat rotated = e.Q.transpose() * H.dense() * e.Q;
  const auto m = lam.size();
  double value = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double weight;
      if (i == j || lam[i] == lam[j] || (lam[i] < 0.0) == (lam[j] < 0.0)) {
        // phi' is affine on each side of 0, so same-sign pairs use phi''.
        weight = second(lam[i]);
      } else {
        weight = (first(lam[i]) - first(lam[j])) / (lam[i] - lam[j]);
      }
      value += weight * rotated(i, j) * rotated(i, j);
    }
  }
  return {value, false};
}

MatrixAffine MatrixAffine::zeros(int order, std::size_t atoms) {
  const int n = svec_size(order);
  MatrixAffine a;
  a.drift_linear = Mat::Zero(n, n);
  a.drift_constant = SymMatrix(order);
  a.diffusion_linear = Mat::Zero(n, n);
  a.diffusion_constant = SymMatrix(order);
  a.jump_linear.assign(atoms, Mat::Zero(n, n));
  a.jump_constant.assign(atoms, SymMatrix(order));
  return a;
}

MatrixModel MatrixModel::from_affine(const MatrixAffine& affine, MarkMeasure marks) {
  const int order = affine.drift_constant.order();
  const int n = svec_size(order);
  AffineCoefficients vec;
  vec.B = affine.drift_linear;
  vec.c = svec(affine.drift_constant);
  vec.V = {affine.diffusion_linear};
  vec.U = Mat(n, 1);
  vec.U.col(0) = svec(affine.diffusion_constant);
  if (affine.jump_linear.size() != affine.jump_constant.size()) {
    throw DimensionMismatch("matrix jump blocks need one (linear, constant) pair per atom");
  }
  for (std::size_t j = 0; j < affine.jump_linear.size(); ++j) {
    vec.G.push_back(affine.jump_linear[j]);
    vec.g.push_back(svec(affine.jump_constant[j]));
  }
  MatrixModel model;
  model.order_ = order;
  model.vector_ = make_affine_model(std::move(vec), std::move(marks));
  return model;
}

MatrixModel MatrixModel::from_functions(int order, MatrixFn drift, MatrixFn diffusion, MatrixJumpFn jump,
                                        MarkMeasure marks, RegularityBudget budget) {
  const int n = svec_size(order);
  MatrixModel model;
  model.order_ = order;
  model.vector_.coefficients = CoefficientTriple(
      n, 1, marks.dimension,
      [drift, order](double t, const Vec& x, Vec& out) { out = svec(drift(t, smat(x, order))); },
      [diffusion, order](double t, const Vec& x, Mat& out) { out.col(0) = svec(diffusion(t, smat(x, order))); },
      [jump, order](double t, const Vec& x, std::size_t atom, Vec& out) { out = svec(jump(t, smat(x, order), atom)); });
  model.vector_.marks = std::move(marks);
  model.vector_.budget = std::move(budget);
  return model;
}

SymMatrix MatrixModel::drift(double t, const SymMatrix& x) const {
  return smat(vector_.coefficients.drift(t, svec(x)), order_);
}

SymMatrix MatrixModel::diffusion(double t, const SymMatrix& x) const {
  return smat(vector_.coefficients.diffusion(t, svec(x)).col(0), order_);
}

SymMatrix MatrixModel::jump(double t, const SymMatrix& x, std::size_t atom) const {
  return smat(vector_.coefficients.jump(t, svec(x), atom), order_);
}

void validate_matrix_problem(const MatrixComparisonProblem& p) {
  validate_model(p.model1.vector_model());
  validate_model(p.model2.vector_model());
  const int m = p.model1.order();
  if (p.model2.order() != m) throw DimensionMismatch("both matrix models must share the order m");
  if (p.model1.vector_model().noise_dim() != 1 || p.model2.vector_model().noise_dim() != 1) {
    throw DimensionMismatch("matrix models use a single Brownian motion");
  }
  if (!p.model1.marks().same_atoms(p.model2.marks())) {
    throw DimensionMismatch("both models must share the same mark atoms and weights");
  }
  if (!(p.t0 >= 0.0) || !(p.horizon > p.t0)) throw ModelError("horizon must satisfy 0 <= t0 < T");
  if (p.x1.order() != m || p.x2.order() != m) throw DimensionMismatch("initial states must be m x m");
  const SymMatrix gap = p.x1 - p.x2;
  if (lambda_min(gap) < -1e-12 * (1.0 + gap.frobenius_norm())) {
    throw OrderError("initial states must satisfy x1 - x2 positive semidefinite");
  }
  if (!(p.sampling.box > 0.0)) throw ModelError("sampling box half-width must be positive");
  if (p.sampling.count < 1) throw ModelError("sampling count must be at least 1");
}

double matrix_cstar(const MatrixComparisonProblem& p) {
  if (p.cstar_override) return *p.cstar_override;
  return constant_Cstar(joint_budget(p.model1.budget(), p.model2.budget()), p.model1.marks());
}

Theorem37Value eval_theorem37(const MatrixComparisonProblem& p, double t, const SymMatrix& x,
                              const SymMatrix& x_prime) {
  const auto split = psd_split(x);
  const SymMatrix shifted = x + x_prime;

  double lhs = -4.0 * trace_inner(split.minus, p.model1.drift(t, split.plus + x_prime) - p.model2.drift(t, x_prime));
  const auto hess =
      hess_quadform_psd(x, p.model1.diffusion(t, shifted) - p.model2.diffusion(t, x_prime));
  lhs += hess.value;

  const double minus_sq = trace_inner(split.minus, split.minus);
  const auto& atoms = p.model1.marks().atoms;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const double w = atoms[j].weight;
    if (w == 0.0) continue;
    const SymMatrix gap = p.model1.jump(t, shifted, j) - p.model2.jump(t, x_prime, j);
    lhs += 2.0 * w * (dist2_psd(x + gap) - minus_sq + 2.0 * trace_inner(split.minus, gap));
  }
  return {lhs, matrix_cstar(p) * minus_sq, hess.degenerate};
}

Theorem37Check check_theorem37(const MatrixComparisonProblem& p) {
  validate_matrix_problem(p);
  const int m = p.model1.order();
  const double box = p.sampling.box;
  const double slack = p.tolerances.check_slack(false);
  CounterStream stream(p.sampling.seed, 300, kSamplingLane);
  auto uniform_in = [&](double lo, double hi) { return lo + (hi - lo) * stream.uniform(); };

  auto random_sym = [&](double half_width) {
    SymMatrix s(m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) s.at(i, j) = uniform_in(-half_width, half_width);
    }
    return s;
  };
  auto random_rotation = [&] { return eig_sym(random_sym(1.0)).Q; };
  auto with_spectrum = [&](const Vec& lam) {
    const Mat q = random_rotation();
    const Mat dense = q * lam.asDiagonal() * q.transpose();
    return SymMatrix::from_dense(0.5 * (dense + dense.transpose()), 1.0);
  };

  std::vector<Vec> spectra;
  // Every sign pattern at every ladder magnitude (capped for large m).
  const std::size_t patterns = m <= 8 ? (std::size_t{1} << m) : 256;
  for (double s : p.sampling.ladder) {
    for (std::size_t code = 0; code < patterns; ++code) {
      Vec lam(m);
      for (int i = 0; i < m; ++i) lam[i] = ((code >> (i % 63)) & 1U ? -s : s) * uniform_in(0.5, 1.0);
      spectra.push_back(lam);
    }
  }
  for (std::size_t n = 0; n < p.sampling.count; ++n) {
    Vec lam(m);
    for (int i = 0; i < m; ++i) {
      if (stream.uniform() < 0.5) {
        const auto& ladder = p.sampling.ladder;
        const auto idx = std::min(ladder.size() - 1, static_cast<std::size_t>(stream.uniform() * ladder.size()));
        lam[i] = (stream.uniform() < 0.5 ? -1.0 : 1.0) * ladder[idx] * uniform_in(0.5, 1.0);
      } else {
        lam[i] = uniform_in(-box, box);
      }
    }
    spectra.push_back(lam);
  }

  Theorem37Check out;
  std::vector<Witness> witnesses;
  std::optional<double> min_margin;
  for (const auto& lam : spectra) {
    const double t = uniform_in(p.t0, p.horizon);
    const SymMatrix x = with_spectrum(lam);
    const SymMatrix x_prime = random_sym(box / std::sqrt(static_cast<double>(m)));
    const auto v = eval_theorem37(p, t, x, x_prime);
    ++out.verdict.samples_used;
    if (v.degenerate) {
      ++out.degenerate_samples;
      continue;
    }
    const double margin = v.rhs - v.lhs;
    if (!min_margin || margin < *min_margin) min_margin = margin;
    if (margin < -slack) witnesses.push_back({t, svec(x), svec(x_prime), std::nullopt, margin});
  }
  std::stable_sort(witnesses.begin(), witnesses.end(),
                   [](const Witness& a, const Witness& b) { return a.margin < b.margin; });
  if (witnesses.size() > 5) witnesses.resize(5);
  out.verdict.status = witnesses.empty() ? Status::NoViolationFound : Status::Violated;
  out.verdict.witnesses = std::move(witnesses);
  out.verdict.min_margin = min_margin;
  return out;
}

McReport mc_matrix_comparison(const MatrixComparisonProblem& p, std::uint64_t paths, double h, std::uint64_t seed,
                              const McOptions& options) {
  validate_matrix_problem(p);
  if (paths < 1) throw std::invalid_argument("path count must be at least 1");
  if (!(h > 0.0) || h > p.horizon - p.t0) throw InvalidStep("step h must satisfy 0 < h <= T - t0");
  const int m = p.model1.order();
  const Vec x1 = svec(p.x1);
  const Vec x2 = svec(p.x2);
  const double eps_path = p.tolerances.eps_path.value_or(default_eps_path(h, x1, x2));
  const auto& v1 = p.model1.vector_model();
  const auto& v2 = p.model2.vector_model();

  auto one_path = [&](std::uint64_t path) {
    PathRecord record;
    record.path_id = path;
    const auto drivers = sample_drivers(v1.marks, 1, p.t0, p.horizon, h, seed, path);
    try {
      const auto first = simulate_path(v1, x1, drivers);
      const auto second = simulate_path(v2, x2, drivers);
      for (std::size_t i = 0; i < first.times.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const double before = lambda_min(smat(first.left_limits.col(col) - second.left_limits.col(col), m));
        const double after = lambda_min(smat(first.states.col(col) - second.states.col(col), m));
        const double v = std::max({0.0, -before, -after});
        record.violation_max = std::max(record.violation_max, v);
        if (!record.first_violation_time && v > eps_path) record.first_violation_time = first.times[i];
      }
    } catch (const NonFiniteState&) {
      record.failed = true;
    }
    return record;
  };
  return summarize_paths(run_paths(paths, worker_count(options.threads), one_path), seed, h, eps_path);
}

}  // namespace jumpcompare
