#pragma once

// Checkers for the characterization of the comparison property of two jump
// SDEs: sigma1 == sigma2 plus conditions (a), (b), (c) per coordinate, and
// the equivalent single inequality on the difference variable.
//
// Affine models are decided exactly (verdict Holds or Violated). Anything
// else is sampled on a box plus a magnitude ladder and can only come back
// NoViolationFound or Violated.

#include "jumpcompare/model.hpp"

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace jumpcompare {

enum class Status { Holds, NoViolationFound, Violated };

std::string_view to_string(Status status);

struct Witness {
  double t = 0.0;
  Vec x;
  Vec x_prime;
  std::optional<std::size_t> atom;
  double margin = 0.0;  // negative means the condition fails by that much
};

struct Verdict {
  Status status = Status::NoViolationFound;
  std::vector<Witness> witnesses;  // most negative margins first
  std::size_t samples_used = 0;
  std::optional<double> min_margin;

  bool violated() const { return status == Status::Violated; }
};

struct Theorem31Report {
  Verdict sigma_equal;
  std::vector<Verdict> cond_a;
  std::vector<Verdict> cond_b;
  std::vector<Verdict> cond_c;
  Verdict ii_prime;
  Status battery = Status::NoViolationFound;  // sigma_equal and (a)(b)(c) combined
  Status overall = Status::NoViolationFound;
  bool battery_agrees = true;  // battery and ii_prime both violated or both not
};

struct IiPrimeValue {
  double lhs = 0.0;
  double rhs = 0.0;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class VariantPreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class CorollaryVariant { JumpsGeneral, JumpsEqual, NoJumps };

Verdict check_sigma_equal(const ComparisonProblem& p);
std::vector<Verdict> check_condition_a(const ComparisonProblem& p);
std::vector<Verdict> check_condition_b(const ComparisonProblem& p);
std::vector<Verdict> check_condition_c(const ComparisonProblem& p);

//! Left side of the difference-variable inequality and C* |x^-|^2.
IiPrimeValue eval_ii_prime(const ComparisonProblem& p, double t, const Vec& x, const Vec& x_prime);
Verdict check_ii_prime(const ComparisonProblem& p);

Theorem31Report check_theorem31(const ComparisonProblem& p);

//! Scalar specializations: general jumps, gamma1 == gamma2, and no jumps.
Verdict check_corollary_1d(const ComparisonProblem& p, CorollaryVariant variant);

//! Violated if any verdict is, Holds if all are, NoViolationFound otherwise.
Status combine(const std::vector<const Verdict*>& verdicts);

namespace detail {

enum class SampleShape { Signed, Nonnegative, NonnegativeZeroAt };

struct SamplePoint {
  double t = 0.0;
  Vec x;
  Vec x_prime;
};

//! Deterministic sample set: a structured product over {0, +-ladder} per
//! coordinate (when small enough) followed by `count` random points.
std::vector<SamplePoint> sample_points(const ComparisonProblem& p, SampleShape shape, int pinned = -1,
                                       std::uint64_t purpose = 0);

}  // namespace detail

}  // namespace jumpcompare
