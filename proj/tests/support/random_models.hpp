#pragma once

// Seeded random affine model pairs for property tests. A pair starts from a
// construction that satisfies sigma1 == sigma2 and conditions (a), (b), (c),
// then at most one mutation breaks exactly one of them by a fixed margin.

#include "jumpcompare/model.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace jumpcompare::testing {

enum class Mutation {
  None,
  SigmaGap,          // U2 differs from U1 by 0.5 in one entry
  SigmaCoupling,     // sigma_k depends on x_i, i != k (m >= 2)
  JumpSlope,         // 1 + G_kk = -0.5 in both models
  JumpOffDiagonal,   // G_ki = -0.5, i != k, in both models (m >= 2)
  JumpIntercept,     // g1_k = g2_k - 0.6
  JumpRowMismatch,   // G1_kk = G2_kk + 0.5
  DriftOffDiagonal,  // compensated B_ki = -0.6, i != k (m >= 2)
  DriftIntercept,    // compensated c1_k = c2_k - 0.6
  DriftRowMismatch,  // compensated B1_kk = B2_kk + 0.6
};

std::string_view to_string(Mutation mutation);

//! Mutations that make sense for the given shape. `equal_jumps` keeps
//! gamma1 == gamma2, `no_jumps` keeps gamma == 0.
std::vector<Mutation> applicable_mutations(int m, std::size_t atoms, bool equal_jumps = false, bool no_jumps = false);

struct PairSpec {
  int m = 1;
  int d = 1;
  std::size_t atoms = 1;
  Mutation mutation = Mutation::None;
  std::uint64_t seed = 0;
  bool equal_jumps = false;  // gamma1 == gamma2 in the base construction
  bool no_jumps = false;     // gamma == 0 (atoms may still be present)
};

ComparisonProblem random_affine_problem(const PairSpec& spec);

//! Same problem with the affine parameterization dropped from both models.
ComparisonProblem black_box(const ComparisonProblem& p);

}  // namespace jumpcompare::testing
