#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"

namespace moep {

enum class Family { MoilpGeneral, MomilpMixed };

/// Parameters of a random instance. Objective coefficients are drawn from
/// [obj_lo, obj_hi], constraint coefficients from [con_lo, con_hi]; every row
/// is a cover row Σ a_j x_j >= b with b = floor(rhs_fraction · U · Σ a_j).
struct GenSpec {
  Family family = Family::MoilpGeneral;
  std::size_t d = 3;
  std::size_t n = 10;
  std::size_t m = 5;
  int obj_lo = -10;
  int obj_hi = 10;
  int con_lo = 1;
  int con_hi = 10;
  double rhs_fraction = 0.5;
  /// Share of integer variables; only read for MomilpMixed.
  double integer_ratio = 0.5;
  /// Every variable lies in [0, U].
  int upper = 4;
  std::uint64_t seed = 0;
};

/// Throws InvalidArgument on an inconsistent spec.
Problem generate(const GenSpec& spec);

Family parse_family(const std::string& name);
std::string family_name(Family f);

struct BruteForceCaps {
  std::size_t max_assignments = 200'000;
  std::size_t max_continuous = 4;
  /// Separation margin required of a certifying weight.
  double delta = 1e-7;
};

struct BruteForceResult {
  std::vector<OutcomePoint> extreme_points;
  std::vector<OutcomePoint> nondominated;
  bool infeasible = false;
};

/// Enumerates every integer assignment and, per assignment, every vertex of
/// the continuous slice, then keeps the outcome vectors that a weight in the
/// simplex separates from all others by at least `delta`.
/// Linear problems only; integer and continuous variables need finite bounds.
/// Throws CapsExceeded, UnsupportedProblem.
BruteForceResult brute_force_extreme_points(const Problem& p, const BruteForceCaps& caps = {});

struct SetComparison {
  bool equal = true;
  /// In `expected` but not matched in `actual`.
  std::vector<std::vector<double>> missing;
  /// In `actual` but not matched in `expected`.
  std::vector<std::vector<double>> extra;
};

/// Set comparison up to an infinity-norm tolerance.
SetComparison compare_point_sets(std::span<const OutcomePoint> expected, std::span<const OutcomePoint> actual,
                                 double tol);

}  // namespace moep
