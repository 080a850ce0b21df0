#include "jumpcompare/psdcone.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace jc = jumpcompare;
using jc::Mat;
using jc::SymMatrix;
using jc::Vec;

namespace {

SymMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Mat a(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) a(i, j++) = x;
    ++i;
  }
  return SymMatrix::from_dense(a);
}

SymMatrix diag(std::initializer_list<double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v[i++] = x;
  return SymMatrix::diagonal(v);
}

SymMatrix random_sym(std::mt19937_64& rng, int m, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymMatrix s(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) s.at(i, j) = u(rng);
  }
  return s;
}

double frob(const Mat& a) { return a.norm(); }

// Symmetric matrix with prescribed spectrum and a random eigenbasis.
SymMatrix with_spectrum(std::mt19937_64& rng, const Vec& lambda) {
  const int m = static_cast<int>(lambda.size());
  Eigen::HouseholderQR<Mat> qr(Mat::NullaryExpr(m, m, [&] { return std::normal_distribution<double>()(rng); }));
  const Mat q = qr.householderQ();
  const Mat a = q * lambda.asDiagonal() * q.transpose();
  return SymMatrix::from_dense(0.5 * (a + a.transpose()), 1.0);
}

jc::MatrixComparisonProblem matrix_pair(const jc::MatrixAffine& a1, const jc::MatrixAffine& a2,
                                        const jc::MarkMeasure& marks, int m) {
  jc::MatrixComparisonProblem p;
  p.model1 = jc::MatrixModel::from_affine(a1, marks);
  p.model2 = jc::MatrixModel::from_affine(a2, marks);
  p.x1 = SymMatrix(m);
  p.x2 = SymMatrix(m);
  return p;
}

jc::MarkMeasure one_atom(double w) {
  jc::MarkMeasure marks;
  marks.atoms.push_back({Vec::Constant(1, 1.0), w});
  return marks;
}

}  // namespace

TEST(SymMatrix, PackedStorageAndDenseRoundTrip) {
  const auto y = sym({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}});
  EXPECT_EQ(y.packed(), (std::vector<double>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(y(2, 1), 5.0);
  EXPECT_EQ(SymMatrix::from_dense(y.dense()), y);
  EXPECT_THROW(SymMatrix::from_dense((Mat(2, 2) << 1, 2, 3, 4).finished()), jc::DimensionMismatch);
  EXPECT_THROW(SymMatrix::from_dense(Mat::Zero(2, 3)), jc::DimensionMismatch);
}

TEST(Svec, IsAnIsometryAndInvertsSmat) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 6;
    const auto a = random_sym(rng, m);
    const auto b = random_sym(rng, m);
    const Vec sa = jc::svec(a);
    ASSERT_EQ(sa.size(), jc::svec_size(m));
    EXPECT_NEAR(sa.dot(jc::svec(b)), (a.dense() * b.dense()).trace(), 1e-12);
    EXPECT_NEAR(jc::trace_inner(a, b), (a.dense() * b.dense()).trace(), 1e-12);
    EXPECT_NEAR(sa.norm(), a.frobenius_norm(), 1e-12);
    const auto back = jc::smat(sa, m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) EXPECT_NEAR(back(i, j), a(i, j), 1e-15);
    }
  }
}

TEST(EigSym, Examples) {
  const auto d = jc::eig_sym(diag({1.0, -2.0}));
  EXPECT_EQ(d.lambda, (Vec(2) << -2.0, 1.0).finished());
  EXPECT_EQ(d.Q.cwiseAbs(), (Mat(2, 2) << 0, 1, 1, 0).finished());

  const auto z = jc::eig_sym(SymMatrix(3));
  EXPECT_EQ(z.lambda, Vec::Zero(3));
  EXPECT_EQ(z.Q, Mat::Identity(3, 3));

  const auto s = jc::eig_sym(sym({{0, 1}, {1, 0}}));
  EXPECT_NEAR(s.lambda[0], -1.0, 1e-15);
  EXPECT_NEAR(s.lambda[1], 1.0, 1e-15);
}

TEST(EigSym, AgreesWithEigenAndKeepsItsInvariants) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 8;
    const auto y = random_sym(rng, m, 5.0);
    const auto e = jc::eig_sym(y);
    Eigen::SelfAdjointEigenSolver<Mat> oracle(y.dense());
    EXPECT_LT((e.lambda - oracle.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + y.frobenius_norm()));
    EXPECT_LE(frob(e.Q.transpose() * e.Q - Mat::Identity(m, m)), 1e-10 * m);
    EXPECT_LE(frob(e.Q * e.lambda.asDiagonal() * e.Q.transpose() - y.dense()), 1e-10 * (1.0 + y.frobenius_norm()));
    for (int i = 1; i < m; ++i) EXPECT_LE(e.lambda[i - 1], e.lambda[i]);
  }
}

TEST(EigSym, NoConvergenceCarriesTheResidual) {
  const jc::NoConvergence error(0.25, "off-diagonal mass did not vanish");
  EXPECT_EQ(error.residual(), 0.25);
  const std::runtime_error& base = error;
  EXPECT_STREQ(base.what(), "off-diagonal mass did not vanish");
}

TEST(PsdSplit, Examples) {
  const auto a = jc::psd_split(diag({1.0, -2.0}));
  EXPECT_EQ(a.plus, diag({1.0, 0.0}));
  EXPECT_EQ(a.minus, diag({0.0, 2.0}));

  const auto psd = sym({{2, 1}, {1, 2}});
  const auto b = jc::psd_split(psd);
  EXPECT_LT(frob(b.plus.dense() - psd.dense()), 1e-14);
  EXPECT_LT(frob(b.minus.dense()), 1e-14);

  const auto c = jc::psd_split(sym({{0, 1}, {1, 0}}));
  EXPECT_LT(frob(c.plus.dense() - 0.5 * (Mat(2, 2) << 1, 1, 1, 1).finished()), 1e-14);
  EXPECT_LT(frob(c.minus.dense() - 0.5 * (Mat(2, 2) << 1, -1, -1, 1).finished()), 1e-14);
}

TEST(PsdSplit, IdentitiesOnRandomMatrices) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + trial % 8;
    const auto y = random_sym(rng, m, 3.0);
    const auto s = jc::psd_split(y);
    const double tol = 1e-10 * (1.0 + y.frobenius_norm());
    EXPECT_LE(frob(s.plus.dense() - s.minus.dense() - y.dense()), tol);
    EXPECT_LE(std::abs(jc::trace_inner(s.plus, s.minus)), tol);
    EXPECT_GE(jc::lambda_min(s.plus), -1e-10);
    EXPECT_GE(jc::lambda_min(s.minus), -1e-10);
    EXPECT_NEAR(jc::dist2_psd(y), (y - s.plus).frobenius_norm() * (y - s.plus).frobenius_norm(), tol);
  }
}

TEST(Dist2Psd, Examples) {
  EXPECT_EQ(jc::dist2_psd(sym({{2, 1}, {1, 2}})), 0.0);
  EXPECT_DOUBLE_EQ(jc::dist2_psd(diag({1.0, -2.0})), 4.0);
}

TEST(Dist2Psd, MatchesGridProjectionAtOrderTwo) {
  // PSD 2x2 matrices [[a, b], [b, c]] with a, c >= 0 and b^2 <= a c.
  std::mt19937_64 rng(4);
  const double step = 0.02;
  for (int trial = 0; trial < 4; ++trial) {
    const auto y = random_sym(rng, 2, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (double a = 0.0; a <= 1.5; a += step) {
      for (double c = 0.0; c <= 1.5; c += step) {
        const double r = std::sqrt(a * c);
        for (double b = -r; b <= r; b += step) {
          const double d2 = (a - y(0, 0)) * (a - y(0, 0)) + 2.0 * (b - y(0, 1)) * (b - y(0, 1)) +
                            (c - y(1, 1)) * (c - y(1, 1));
          best = std::min(best, d2);
        }
      }
    }
    const double exact = jc::dist2_psd(y);
    EXPECT_GE(best, exact - 1e-12);
    EXPECT_LE(best - exact, 4.0 * step * (1.0 + y.frobenius_norm()));
  }
}

TEST(GradDist2Psd, ExamplesAndDirectionalDifferences) {
  EXPECT_EQ(jc::grad_dist2_psd(sym({{2, 1}, {1, 2}})).frobenius_norm(), 0.0);
  EXPECT_EQ(jc::grad_dist2_psd(diag({1.0, -2.0})), diag({0.0, -4.0}));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  const double s = 1e-5;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 5;
    Vec lam(m);
    for (int i = 0; i < m; ++i) lam[i] = (trial + i) % 2 ? u(rng) : -u(rng);
    const auto y = with_spectrum(rng, lam);
    const auto H = random_sym(rng, m, 1.0);
    const double fd = (jc::dist2_psd(y + s * H) - jc::dist2_psd(y - s * H)) / (2.0 * s);
    EXPECT_NEAR(jc::trace_inner(jc::grad_dist2_psd(y), H), fd, 1e-6);
  }
}

TEST(HessQuadformPsd, Examples) {
  const auto a = jc::hess_quadform_psd(diag({1.0, -2.0}), SymMatrix::identity(2));
  EXPECT_NEAR(a.value, 2.0, 1e-12);
  EXPECT_FALSE(a.degenerate);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 5;
    const auto H = random_sym(rng, m, 1.5);
    Vec neg(m), pos(m);
    for (int i = 0; i < m; ++i) {
      neg[i] = -0.1 - i;
      pos[i] = 0.1 + i;
    }
    EXPECT_NEAR(jc::hess_quadform_psd(with_spectrum(rng, neg), H).value,
                2.0 * H.frobenius_norm() * H.frobenius_norm(), 1e-10);
    EXPECT_NEAR(jc::hess_quadform_psd(with_spectrum(rng, pos), H).value, 0.0, 1e-10);
  }
}

TEST(HessQuadformPsd, MatchesSecondDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(1e-3, 2.0);
  const double s = 1e-4;
  int checked = 0;
  while (checked < 200) {
    const int m = 1 + checked % 5;
    Vec lam(m);
    for (int i = 0; i < m; ++i) lam[i] = (std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0 : -1.0) * mag(rng);
    const auto y = with_spectrum(rng, lam);
    const auto spectrum = jc::eig_sym(y).lambda;
    if (spectrum.cwiseAbs().minCoeff() <= 1e-3) continue;
    const auto H = random_sym(rng, m, 1.0);
    const double fd =
        (jc::dist2_psd(y + s * H) - 2.0 * jc::dist2_psd(y) + jc::dist2_psd(y - s * H)) / (s * s);
    const auto q = jc::hess_quadform_psd(y, H);
    EXPECT_FALSE(q.degenerate);
    EXPECT_NEAR(q.value, fd, std::max(1e-6, 1e3 * s * s)) << "m = " << m;
    ++checked;
  }
}

TEST(HessQuadformPsd, FlagsDegenerateSpectra) {
  const auto q = jc::hess_quadform_psd(diag({0.0, -1.0}), SymMatrix::identity(2));
  EXPECT_TRUE(q.degenerate);
  EXPECT_TRUE(std::isfinite(q.value));
}

TEST(PsdCone, OrderOneReducesToTheScalarCase) {
  for (double y : {-3.0, -0.5, 0.0, 0.25, 4.0}) {
    const auto s = SymMatrix::diagonal(Vec::Constant(1, y));
    const auto split = jc::psd_split(s);
    EXPECT_EQ(split.plus(0, 0), std::max(y, 0.0));
    EXPECT_EQ(split.minus(0, 0), std::max(-y, 0.0));
    EXPECT_EQ(jc::dist2_psd(s), y < 0 ? y * y : 0.0);
    EXPECT_EQ(jc::lambda_min(s), y);
    EXPECT_EQ(jc::svec(s), Vec::Constant(1, y));
  }
}

TEST(MatrixModel, AffineOutputsStaySymmetric) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  const int m = 3;
  const int n = jc::svec_size(m);
  auto a = jc::MatrixAffine::zeros(m, 1);
  a.drift_linear = Mat::NullaryExpr(n, n, [&] { return z(rng); });
  a.drift_constant = random_sym(rng, m);
  a.diffusion_linear = Mat::NullaryExpr(n, n, [&] { return z(rng); });
  a.jump_linear[0] = Mat::NullaryExpr(n, n, [&] { return z(rng); });
  const auto model = jc::MatrixModel::from_affine(a, one_atom(0.5));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_sym(rng, m);
    for (const auto& out : {model.drift(0.0, x), model.diffusion(0.0, x), model.jump(0.0, x, 0)}) {
      EXPECT_EQ(out.order(), m);
      EXPECT_LT(frob(out.dense() - out.dense().transpose()), 1e-15);
    }
    EXPECT_LT((jc::svec(model.drift(0.0, x)) - (a.drift_linear * jc::svec(x) + jc::svec(a.drift_constant))).norm(),
              1e-12);
  }
}

TEST(ValidateMatrixProblem, RejectsUnorderedStarts) {
  auto p = matrix_pair(jc::MatrixAffine::zeros(2, 0), jc::MatrixAffine::zeros(2, 0), {}, 2);
  p.x1 = diag({1.0, -0.1});
  EXPECT_THROW(jc::validate_matrix_problem(p), jc::OrderError);
  p.x1 = sym({{1.0, 0.5}, {0.5, 1.0}});
  EXPECT_NO_THROW(jc::validate_matrix_problem(p));
}

TEST(EvalTheorem37, VanishesOnThePsdConeForEqualNoiseAndJumps) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  const int m = 2;
  const int n = jc::svec_size(m);
  auto a1 = jc::MatrixAffine::zeros(m, 1);
  a1.drift_linear = -Mat::Identity(n, n);
  a1.diffusion_linear = 0.3 * Mat::Identity(n, n);
  a1.diffusion_constant = diag({0.1, 0.2});
  a1.jump_linear[0] = -0.3 * Mat::Identity(n, n);
  auto a2 = a1;
  a1.drift_constant = SymMatrix::identity(m);
  const auto p = matrix_pair(a1, a2, one_atom(1.0), m);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = with_spectrum(rng, (Vec(2) << u(rng), u(rng)).finished());
    const auto v = jc::eval_theorem37(p, 0.0, x, random_sym(rng, m));
    // Equal jump slopes keep the gap term at -0.3 x, and x - 0.3 x stays PSD.
    EXPECT_NEAR(v.lhs, 0.0, 1e-10);
    EXPECT_NEAR(v.rhs, 0.0, 1e-10);
  }
}

TEST(EvalTheorem37, NegativeDriftGapGrowsLinearly) {
  for (int m : {1, 2, 3}) {
    auto a1 = jc::MatrixAffine::zeros(m, 0);
    auto a2 = a1;
    a2.drift_constant = SymMatrix::identity(m);
    const auto p = matrix_pair(a1, a2, {}, m);
    const double cstar = jc::matrix_cstar(p);
    for (double eps : {1e-6, 1e-3, 0.1}) {
      const auto v = jc::eval_theorem37(p, 0.0, -eps * SymMatrix::identity(m), SymMatrix(m));
      EXPECT_NEAR(v.lhs, 4.0 * eps * m, 1e-12);
      EXPECT_NEAR(v.rhs, cstar * eps * eps * m, 1e-12);
    }
  }
}

TEST(EvalTheorem37, OrderOneIsTwiceTheScalarDifferenceInequality) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto a1 = jc::MatrixAffine::zeros(1, 2);
    auto a2 = a1;
    for (auto* a : {&a1, &a2}) {
      a->drift_linear(0, 0) = u(rng);
      a->drift_constant.at(0, 0) = u(rng);
      a->diffusion_linear(0, 0) = u(rng);
      a->diffusion_constant.at(0, 0) = u(rng);
      for (std::size_t j = 0; j < 2; ++j) {
        a->jump_linear[j](0, 0) = u(rng);
        a->jump_constant[j].at(0, 0) = u(rng);
      }
    }
    jc::MarkMeasure marks;
    marks.atoms = {{Vec::Constant(1, 1.0), 0.4}, {Vec::Constant(1, -1.0), 1.1}};
    const auto p = matrix_pair(a1, a2, marks, 1);
    jc::ComparisonProblem scalar;
    scalar.model1 = p.model1.vector_model();
    scalar.model2 = p.model2.vector_model();
    scalar.x1 = Vec::Zero(1);
    scalar.x2 = Vec::Zero(1);
    for (int k = 0; k < 10; ++k) {
      const double x = 2.0 * u(rng);
      const double xp = 2.0 * u(rng);
      const auto mv = jc::eval_theorem37(p, 0.0, SymMatrix::diagonal(Vec::Constant(1, x)),
                                         SymMatrix::diagonal(Vec::Constant(1, xp)));
      const auto sv = jc::eval_ii_prime(scalar, 0.0, Vec::Constant(1, x), Vec::Constant(1, xp));
      EXPECT_NEAR(mv.lhs, 2.0 * sv.lhs, 1e-10 * (1.0 + std::abs(sv.lhs)));
      EXPECT_NEAR(mv.rhs, sv.rhs, 1e-12 * (1.0 + sv.rhs));
    }
  }
}

TEST(CheckTheorem37, PositiveDriftGapFindsNothing) {
  const int m = 2;
  const int n = jc::svec_size(m);
  auto a2 = jc::MatrixAffine::zeros(m, 0);
  a2.drift_linear = -Mat::Identity(n, n);
  a2.diffusion_linear = 0.2 * Mat::Identity(n, n);
  auto a1 = a2;
  a1.drift_constant = SymMatrix::identity(m);
  const auto r = jc::check_theorem37(matrix_pair(a1, a2, {}, m));
  EXPECT_EQ(r.verdict.status, jc::Status::NoViolationFound);
  EXPECT_GT(r.verdict.samples_used, 2000u);
}

TEST(CheckTheorem37, NegativeDriftGapIsViolated) {
  const int m = 2;
  auto a1 = jc::MatrixAffine::zeros(m, 0);
  auto a2 = a1;
  a2.drift_constant = SymMatrix::identity(m);
  const auto r = jc::check_theorem37(matrix_pair(a1, a2, {}, m));
  ASSERT_EQ(r.verdict.status, jc::Status::Violated);
  ASSERT_FALSE(r.verdict.witnesses.empty());
  const auto& w = r.verdict.witnesses.front();
  EXPECT_EQ(w.x.size(), jc::svec_size(m));
  EXPECT_LT(jc::lambda_min(jc::smat(w.x, m)), 0.0);
  EXPECT_LE(r.verdict.witnesses.size(), 5u);
}

TEST(CheckTheorem37, ShiftedJumpWithCompensatedDriftFindsNothing) {
  const int m = 2;
  const double w = 0.8, c = 0.5;
  auto a2 = jc::MatrixAffine::zeros(m, 1);
  a2.diffusion_constant = diag({0.3, 0.1});
  auto a1 = a2;
  a1.jump_constant[0] = c * SymMatrix::identity(m);
  a1.drift_constant = (w * c) * SymMatrix::identity(m);
  const auto r = jc::check_theorem37(matrix_pair(a1, a2, one_atom(w), m));
  EXPECT_EQ(r.verdict.status, jc::Status::NoViolationFound);
}

TEST(McMatrixComparison, IdenticalModelsNeverSeparate) {
  const int m = 2;
  const int n = jc::svec_size(m);
  auto a = jc::MatrixAffine::zeros(m, 1);
  a.drift_linear = -0.5 * Mat::Identity(n, n);
  a.diffusion_linear = 0.4 * Mat::Identity(n, n);
  a.jump_linear[0] = -0.2 * Mat::Identity(n, n);
  auto p = matrix_pair(a, a, one_atom(2.0), m);
  p.x1 = p.x2 = sym({{1.0, 0.3}, {0.3, 0.5}});
  const auto r = jc::mc_matrix_comparison(p, 200, 1.0 / 64, 3);
  EXPECT_EQ(r.violating, 0u);
  EXPECT_EQ(r.max_violation, 0.0);
}

TEST(McMatrixComparison, DriftGapsOrderOrSeparate) {
  const int m = 2;
  auto base = jc::MatrixAffine::zeros(m, 0);
  base.diffusion_linear = 0.3 * Mat::Identity(jc::svec_size(m), jc::svec_size(m));
  auto up = base;
  up.drift_constant = SymMatrix::identity(m);
  const auto pass = jc::mc_matrix_comparison(matrix_pair(up, base, {}, m), 500, 1.0 / 512, 4);
  EXPECT_EQ(pass.violating, 0u);

  auto tilt = base;
  tilt.drift_constant = diag({1.0, -1.0});
  const auto fail = jc::mc_matrix_comparison(matrix_pair(tilt, base, {}, m), 200, 1.0 / 512, 5);
  EXPECT_EQ(fail.violation_fraction, 1.0);
}
