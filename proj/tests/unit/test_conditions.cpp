#include "jumpcompare/conditions.hpp"

#include "random_models.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace jc = jumpcompare;
namespace jt = jumpcompare::testing;
using jc::Mat;
using jc::Status;
using jc::Vec;

namespace {

jc::MarkMeasure one_atom(double w = 1.0) {
  jc::MarkMeasure marks;
  marks.atoms.push_back({Vec::Constant(1, 1.0), w});
  return marks;
}

struct Scalar {
  double B = 0, c = 0, V = 0, U = 0;
  std::vector<double> G, g;
};

jc::SdeModel scalar(const Scalar& s, const jc::MarkMeasure& marks) {
  auto a = jc::AffineCoefficients::zeros(1, 1, marks.size());
  a.B(0, 0) = s.B;
  a.c[0] = s.c;
  a.V[0](0, 0) = s.V;
  a.U(0, 0) = s.U;
  for (std::size_t j = 0; j < s.G.size(); ++j) a.G[j](0, 0) = s.G[j];
  for (std::size_t j = 0; j < s.g.size(); ++j) a.g[j][0] = s.g[j];
  return jc::make_affine_model(a, marks);
}

jc::ComparisonProblem pair(const jc::SdeModel& a, const jc::SdeModel& b) {
  jc::ComparisonProblem p;
  p.model1 = a;
  p.model2 = b;
  p.x1 = Vec::Zero(a.state_dim());
  p.x2 = Vec::Zero(a.state_dim());
  return p;
}

jc::ComparisonProblem scalar_pair(const Scalar& a, const Scalar& b, const jc::MarkMeasure& marks = {}) {
  return pair(scalar(a, marks), scalar(b, marks));
}

bool all_status(const std::vector<jc::Verdict>& vs, Status s) {
  return std::all_of(vs.begin(), vs.end(), [&](const jc::Verdict& v) { return v.status == s; });
}

jc::SdeModel black_box(jc::SdeModel model) {
  model.coefficients = model.coefficients.without_affine();
  return model;
}

}  // namespace

TEST(SigmaEqual, IdenticalDiffusionHolds) {
  const auto p = scalar_pair({.V = 0.3, .U = 0.2}, {.c = 1.0, .V = 0.3, .U = 0.2});
  EXPECT_EQ(jc::check_sigma_equal(p).status, Status::Holds);
}

TEST(SigmaEqual, SmallConstantGapIsViolated) {
  auto p = scalar_pair({.U = 0.2 + 1e-3}, {.U = 0.2});
  p.tolerances.eps_check = 1e-9;
  const auto v = jc::check_sigma_equal(p);
  EXPECT_EQ(v.status, Status::Violated);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_NEAR(v.witnesses.front().margin, -1e-3, 1e-12);
}

TEST(SigmaEqual, BlackBoxEqualDiffusionFindsNothing) {
  const auto p = pair(black_box(scalar({.V = 1.0}, {})), black_box(scalar({.V = 1.0}, {})));
  const auto v = jc::check_sigma_equal(p);
  EXPECT_EQ(v.status, Status::NoViolationFound);
  EXPECT_GT(v.samples_used, 0u);
}

TEST(ConditionA, DiagonalDiffusionHolds) {
  auto a = jc::AffineCoefficients::zeros(3, 2, 0);
  for (auto& v : a.V) v = 0.4 * Mat::Identity(3, 3);
  const auto model = jc::make_affine_model(a, {});
  EXPECT_TRUE(all_status(jc::check_condition_a(pair(model, model)), Status::Holds));
}

TEST(ConditionA, ConstantDiffusionHolds) {
  auto a = jc::AffineCoefficients::zeros(2, 1, 0);
  a.U << 0.5, -1.0;
  const auto model = jc::make_affine_model(a, {});
  EXPECT_TRUE(all_status(jc::check_condition_a(pair(model, model)), Status::Holds));
}

TEST(ConditionA, CrossDependenceIsViolatedWithAWitnessMovingTheOtherCoordinate) {
  auto a = jc::AffineCoefficients::zeros(2, 1, 0);
  a.V[0](0, 1) = 1.0;
  const auto model = jc::make_affine_model(a, {});
  for (const auto& p : {pair(model, model), pair(black_box(model), black_box(model))}) {
    const auto v = jc::check_condition_a(p);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].status, Status::Violated);
    EXPECT_NE(v[1].status, Status::Violated);
    const auto& w = v[0].witnesses.front();
    EXPECT_EQ(w.x[0], w.x_prime[0]);
    EXPECT_NE(w.x[1], w.x_prime[1]);
  }
}

TEST(ConditionB, NoJumpsHolds) {
  const auto p = scalar_pair({}, {}, one_atom());
  EXPECT_TRUE(all_status(jc::check_condition_b(p), Status::Holds));
}

TEST(ConditionB, ConstantJumpsOrderedHold) {
  EXPECT_TRUE(all_status(jc::check_condition_b(scalar_pair({.G = {0}, .g = {1.0}}, {.G = {0}, .g = {0.0}}, one_atom())),
                         Status::Holds));
}

TEST(ConditionB, ConstantJumpsReversedViolateAtTheOrigin) {
  const auto p = scalar_pair({.G = {0}, .g = {-0.5}}, {.G = {0}, .g = {0.0}}, one_atom());
  const auto v = jc::check_condition_b(p);
  ASSERT_EQ(v[0].status, Status::Violated);
  const auto& w = v[0].witnesses.front();
  EXPECT_EQ(w.x[0], 0.0);
  EXPECT_EQ(w.x_prime[0], 0.0);
  EXPECT_DOUBLE_EQ(w.margin, -0.5);
  ASSERT_TRUE(w.atom.has_value());
  EXPECT_EQ(*w.atom, 0u);
}

TEST(ConditionB, DecreasingJumpMapIsViolatedAndTheGridAgrees) {
  const double G = -1.5;
  const auto p = scalar_pair({.G = {G}}, {.G = {G}}, one_atom());
  EXPECT_EQ(jc::check_condition_b(p)[0].status, Status::Violated);
  EXPECT_EQ(jc::check_condition_b(jc::testing::black_box(p))[0].status, Status::Violated);

  // Margin x + gamma1(x + x') - gamma2(x') over x in [0, 10], x' in [-10, 10].
  double worst = 0.0;
  for (double x = 0.0; x <= 10.0; x += 0.25) {
    for (double xp = -10.0; xp <= 10.0; xp += 0.25) worst = std::min(worst, x + G * (x + xp) - G * xp);
  }
  EXPECT_LT(worst, 0.0);
}

TEST(ConditionC, OrderedDriftsWithQuasimonotoneCouplingHold) {
  auto a = jc::AffineCoefficients::zeros(2, 1, 0);
  a.B << -1.0, 0.5, 0.2, -0.3;
  auto b = a;
  a.c = Vec::Ones(2);
  const auto p = pair(jc::make_affine_model(a, {}), jc::make_affine_model(b, {}));
  EXPECT_TRUE(all_status(jc::check_condition_c(p), Status::Holds));
  EXPECT_TRUE(all_status(jc::check_condition_c(jc::testing::black_box(p)), Status::NoViolationFound));
}

TEST(ConditionC, NegativeOffDiagonalIsViolatedInTheFirstRow) {
  auto a = jc::AffineCoefficients::zeros(2, 1, 0);
  a.B << 0.0, -1.0, 0.0, 0.0;
  const auto model = jc::make_affine_model(a, {});
  const auto p = pair(model, model);
  const auto v = jc::check_condition_c(p);
  EXPECT_EQ(v[0].status, Status::Violated);
  EXPECT_EQ(v[1].status, Status::Holds);
  EXPECT_EQ(jc::check_condition_c(jc::testing::black_box(p))[0].status, Status::Violated);

  // delta = (0, s): the first coordinate's drift gap is -s.
  for (double s : {1e-3, 0.1, 1.0, 7.0}) {
    const Vec delta = (Vec(2) << 0.0, s).finished();
    const Vec xp = Vec::Zero(2);
    const double margin = (model.coefficients.drift(0, delta + xp) - model.coefficients.drift(0, xp))[0];
    EXPECT_DOUBLE_EQ(margin, -s);
  }
}

TEST(ConditionC, ScalarCaseReducesToTheCompensatedDriftOrder) {
  const auto marks = one_atom(2.0);
  for (double dc : {-0.5, 0.0, 0.5}) {
    // d1 - d2 = dc - 2 * (0.1 - 0.1).
    const auto p = scalar_pair({.B = -1, .c = dc, .G = {-0.2}, .g = {0.1}}, {.B = -1, .G = {-0.2}, .g = {0.1}}, marks);
    EXPECT_EQ(jc::check_condition_c(p)[0].status, dc >= 0.0 ? Status::Holds : Status::Violated) << dc;
  }
}

TEST(EvalIiPrime, DriftOnlyValue) {
  const auto p = scalar_pair({.c = 1.0}, {});
  const auto v = jc::eval_ii_prime(p, 0.0, Vec::Constant(1, -1.0), Vec::Zero(1));
  EXPECT_DOUBLE_EQ(v.lhs, -2.0);
  EXPECT_DOUBLE_EQ(v.rhs, jc::problem_cstar(p));
}

TEST(EvalIiPrime, ReversedDriftFailsBelowTwoOverCstar) {
  const auto p = scalar_pair({}, {.c = 1.0});
  const double cstar = jc::problem_cstar(p);
  ASSERT_GT(cstar, 0.0);
  for (double eps : {1e-6, 1e-4, 1e-2, 0.1, 1.0, 10.0}) {
    const auto v = jc::eval_ii_prime(p, 0.0, Vec::Constant(1, -eps), Vec::Zero(1));
    EXPECT_NEAR(v.lhs, 2.0 * eps, 1e-15);
    EXPECT_NEAR(v.rhs, cstar * eps * eps, 1e-12 * cstar * eps * eps);
    EXPECT_EQ(v.lhs > v.rhs, eps < 2.0 / cstar) << eps;
  }
}

TEST(EvalIiPrime, VanishesOnTheOrthantForEqualJumpsAndDiffusion) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = jt::random_affine_problem({.m = 1 + static_cast<int>(seed % 3), .d = 2, .atoms = 2, .seed = seed,
                                        .equal_jumps = true});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      Vec x(p.state_dim()), xp(p.state_dim());
      for (int i = 0; i < p.state_dim(); ++i) {
        x[i] = u(rng);
        xp[i] = u(rng) - 1.5;
      }
      EXPECT_EQ(jc::eval_ii_prime(p, 0.5, x, xp).lhs, 0.0);
    }
  }
}

TEST(EvalIiPrime, DriftTermIsPositivelyHomogeneousInTheNegativePart) {
  auto a = jc::AffineCoefficients::zeros(2, 1, 0);
  a.B << -0.4, 0.3, 0.1, -0.2;
  auto b = a;
  a.c << 0.7, -0.3;
  b.B(1, 1) = 0.5;
  const auto p = pair(jc::make_affine_model(a, {}), jc::make_affine_model(b, {}));
  const Vec x = (Vec(2) << -0.4, -1.1).finished();
  const Vec xp = (Vec(2) << 0.2, -0.9).finished();
  const double base = jc::eval_ii_prime(p, 0.0, x, xp).lhs;
  for (double lambda : {0.001, 0.5, 2.0, 30.0}) {
    EXPECT_NEAR(jc::eval_ii_prime(p, 0.0, lambda * x, xp).lhs, lambda * base, 1e-12 * (1.0 + lambda));
  }
}

TEST(CheckIiPrime, PassingPairFindsNothing) {
  const auto p = scalar_pair({.B = -1, .c = 0.5, .V = 0.3, .U = 0.2, .G = {-0.5}, .g = {0.3}},
                             {.B = -1, .c = 0.1, .V = 0.3, .U = 0.2, .G = {-0.5}, .g = {0.1}}, one_atom(1.5));
  EXPECT_EQ(jc::check_ii_prime(p).status, Status::NoViolationFound);
}

TEST(CheckIiPrime, ReversedDriftHasASmallNegativeWitness) {
  const auto p = scalar_pair({}, {.c = 1.0});
  const auto v = jc::check_ii_prime(p);
  ASSERT_EQ(v.status, Status::Violated);
  const auto& w = v.witnesses.front();
  EXPECT_LT(w.x[0], 0.0);
  EXPECT_LT(-w.x[0], 2.0 / jc::problem_cstar(p));
}

TEST(CheckIiPrime, DiffusionGapIsViolatedNearZero) {
  const auto v = jc::check_ii_prime(scalar_pair({.U = 0.5}, {.U = 0.0}));
  ASSERT_EQ(v.status, Status::Violated);
  EXPECT_LT(v.witnesses.front().x[0], 0.0);
}

TEST(Theorem31, NoJumpFamilyHolds) {
  auto a = jc::AffineCoefficients::zeros(2, 2, 0);
  a.B << -1.0, 0.2, 0.0, -0.5;
  a.V[0] = 0.3 * Mat::Identity(2, 2);
  a.U << 0.1, 0.2, 0.3, 0.4;
  auto b = a;
  a.c << 0.5, 0.25;
  auto p = pair(jc::make_affine_model(a, {}), jc::make_affine_model(b, {}));
  const auto r = jc::check_theorem31(p);
  EXPECT_EQ(r.overall, Status::Holds);
  EXPECT_TRUE(r.battery_agrees);
}

TEST(Theorem31, JumpOnlyFamilyHoldsWithTheJumpConditionBinding) {
  // b = w gamma, sigma = 0, gamma1 = -x/2 + 1, gamma2 = -x/2 + 1/5.
  const auto p = scalar_pair({.B = -0.5, .c = 1.0, .G = {-0.5}, .g = {1.0}},
                             {.B = -0.5, .c = 0.2, .G = {-0.5}, .g = {0.2}}, one_atom());
  const auto r = jc::check_theorem31(p);
  EXPECT_EQ(r.overall, Status::Holds);
  EXPECT_EQ(r.cond_b[0].status, Status::Holds);
  // Making the jumps reversed breaks exactly condition (b).
  const auto q = scalar_pair({.B = -0.5, .c = 0.2, .G = {-0.5}, .g = {0.2}},
                             {.B = -0.5, .c = 1.0, .G = {-0.5}, .g = {1.0}}, one_atom());
  const auto s = jc::check_theorem31(q);
  EXPECT_EQ(s.cond_b[0].status, Status::Violated);
  EXPECT_EQ(s.cond_c[0].status, Status::Holds);
  EXPECT_EQ(s.overall, Status::Violated);
}

TEST(Theorem31, AnySingleViolationMakesTheOverallVerdictViolated) {
  for (auto mutation : jt::applicable_mutations(2, 1)) {
    if (mutation == jt::Mutation::None) continue;
    const auto p = jt::random_affine_problem({.m = 2, .d = 1, .atoms = 1, .mutation = mutation, .seed = 77});
    const auto r = jc::check_theorem31(p);
    EXPECT_EQ(r.overall, Status::Violated) << jt::to_string(mutation);
    EXPECT_TRUE(r.battery_agrees) << jt::to_string(mutation);
  }
}

TEST(Theorem31, BatteryAndDifferenceInequalityAgreeOnRandomPairs) {
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int m = 1 + static_cast<int>(seed % 3);
    const std::size_t atoms = seed % 4;
    const auto muts = jt::applicable_mutations(m, atoms);
    const auto mutation = muts[seed % muts.size()];
    const auto p = jt::random_affine_problem({.m = m, .d = 1 + static_cast<int>(seed % 2), .atoms = atoms,
                                              .mutation = mutation, .seed = 1000 + seed});
    const auto r = jc::check_theorem31(p);
    EXPECT_TRUE(r.battery_agrees) << "seed " << seed << " mutation " << jt::to_string(mutation);
    EXPECT_EQ(r.battery == Status::Violated, mutation != jt::Mutation::None) << seed;
    ++count;
  }
  EXPECT_EQ(count, 30u);
}

TEST(OracleAgreement, BlackBoxNeverContradictsTheAffineOracle) {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const int m = 1 + static_cast<int>(seed % 3);
    const std::size_t atoms = 1 + seed % 2;
    const auto muts = jt::applicable_mutations(m, atoms);
    const auto mutation = muts[(seed / 3) % muts.size()];
    const auto p = jt::random_affine_problem({.m = m, .d = 1, .atoms = atoms, .mutation = mutation, .seed = 500 + seed});
    const auto exact = jc::check_theorem31(p);
    const auto sampled = jc::check_theorem31(jt::black_box(p));
    EXPECT_NE(sampled.battery, Status::Holds);
    if (exact.battery == Status::Holds) {
      EXPECT_NE(sampled.battery, Status::Violated) << seed << " " << jt::to_string(mutation);
    } else {
      // Every mutation fails by at least 0.5, so sampling must see it.
      EXPECT_EQ(sampled.battery, Status::Violated) << seed << " " << jt::to_string(mutation);
    }
  }
}

TEST(Corollary1d, NoJumpVariantHoldsForOrderedDrifts) {
  const auto p = scalar_pair({.B = -0.3, .c = 1.0, .V = 0.2}, {.B = -0.3, .V = 0.2});
  EXPECT_EQ(jc::check_corollary_1d(p, jc::CorollaryVariant::NoJumps).status, Status::Holds);
}

TEST(Corollary1d, GeneralVariantMatchesTheorem31) {
  const auto marks = one_atom(1.0);
  for (double g2 : {0.0, 0.3, 0.8}) {
    const auto p = scalar_pair({.B = -0.5, .c = 0.5, .G = {-0.5}, .g = {0.5}}, {.B = -0.5, .c = g2, .G = {-0.5}, .g = {g2}}, marks);
    const auto cor = jc::check_corollary_1d(p, jc::CorollaryVariant::JumpsGeneral);
    EXPECT_EQ(cor.violated(), jc::check_theorem31(p).overall == Status::Violated) << g2;
  }
}

TEST(Corollary1d, RejectsVectorProblems) {
  auto a = jc::AffineCoefficients::zeros(2, 1, 0);
  const auto model = jc::make_affine_model(a, {});
  EXPECT_THROW(jc::check_corollary_1d(pair(model, model), jc::CorollaryVariant::NoJumps), jc::DimensionError);
}

TEST(Corollary1d, RejectsModelsOutsideTheVariant) {
  const auto p = scalar_pair({.G = {0.1}, .g = {0.2}}, {.G = {0.1}}, one_atom());
  EXPECT_THROW(jc::check_corollary_1d(p, jc::CorollaryVariant::JumpsEqual), jc::VariantPreconditionError);
  EXPECT_THROW(jc::check_corollary_1d(p, jc::CorollaryVariant::NoJumps), jc::VariantPreconditionError);
  EXPECT_NO_THROW(jc::check_corollary_1d(p, jc::CorollaryVariant::JumpsGeneral));
}

TEST(SamplePoints, AreDeterministicAndRespectTheShape) {
  const auto p = jt::random_affine_problem({.m = 2, .d = 1, .atoms = 1, .seed = 3});
  const auto a = jc::detail::sample_points(p, jc::detail::SampleShape::NonnegativeZeroAt, 1, 9);
  const auto b = jc::detail::sample_points(p, jc::detail::SampleShape::NonnegativeZeroAt, 1, 9);
  ASSERT_EQ(a.size(), b.size());
  // 13 ladder levels in the free coordinate, then the random points.
  EXPECT_EQ(a.size(), 7u + p.sampling.count);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].t, b[i].t);
    EXPECT_EQ(a[i].x[1], 0.0);
    EXPECT_GE(a[i].x[0], 0.0);
    EXPECT_LE(a[i].x_prime.cwiseAbs().maxCoeff(), p.sampling.box);
    EXPECT_GE(a[i].t, p.t0);
    EXPECT_LE(a[i].t, p.horizon);
  }
  const auto signed_points = jc::detail::sample_points(p, jc::detail::SampleShape::Signed, -1, 9);
  EXPECT_EQ(signed_points.size(), 13u * 13u + p.sampling.count);
}

TEST(Combine, FollowsTheCombinationRule) {
  jc::Verdict holds{Status::Holds, {}, 0, {}};
  jc::Verdict none{Status::NoViolationFound, {}, 0, {}};
  jc::Verdict bad{Status::Violated, {}, 0, {}};
  EXPECT_EQ(jc::combine({&holds, &holds}), Status::Holds);
  EXPECT_EQ(jc::combine({&holds, &none}), Status::NoViolationFound);
  EXPECT_EQ(jc::combine({&none, &bad, &holds}), Status::Violated);
  EXPECT_EQ(jc::to_string(Status::NoViolationFound), "no_violation_found");
}
