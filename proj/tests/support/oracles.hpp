#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the vertex enumeration or the branch and bound under test.

#include <cstddef>
#include <span>
#include <vector>

#include "dual_benson.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "vertex_enum.hpp"

namespace moep::testing {

/// min (x1, x2)  s.t.  x1 + x2 >= 1,  0 <= x <= 1.
Problem e1();
/// min (x1, x2)  s.t.  x1 + 2 x2 >= 2,  2 x1 + x2 >= 2,  x integer in [0, 2]².
Problem e2();

/// Every vertex of {z : g·w̄ + h·a <= rhs} found by solving all d-subsets of
/// the inequalities as equalities and keeping the feasible solutions.
std::vector<std::vector<double>> subset_vertices(std::span<const DualHalfspace> hs, std::size_t d);

/// Every solution that is an integer assignment combined with a vertex of the
/// continuous slice. Needs finite bounds everywhere.
std::vector<std::vector<double>> enumerate_solutions(const Problem& p);

/// min wᵀf(x) over enumerate_solutions(p); +inf when infeasible.
double enumerated_weighted_min(const Problem& p, std::span<const double> w);

/// True when some w in the simplex gives wᵀy_k + margin <= wᵀy_j for all j ≠ k.
bool admits_separating_weight(const std::vector<std::vector<double>>& ys, std::size_t k, double margin);

bool weakly_dominates(std::span<const double> a, std::span<const double> b, double tol);

/// Minimizer of wᵀy over the unit disk: y = −w/‖w‖, with x = y.
class DiskOracle final : public WeightedSumOracle {
 public:
  bool supports(const Problem&) const override { return true; }

 protected:
  OracleResult minimize(const Problem& p, const WeightVector& w, bool lexicographic) override;
};

/// Two free variables in [−1, 1], f(x) = x, and x1² + x2² <= 1.
Problem disk_problem();

struct SoundnessReport {
  bool ok = true;
  std::string detail;
};

/// Witness feasibility and y = f(x) on `original`, pairwise non-dominance,
/// a separating weight for every point, and certifying weights that do not
/// prefer another reported point by more than tol_confirm.
SoundnessReport check_soundness(const Problem& original, const std::vector<OutcomePoint>& points,
                                double tol_confirm = 1e-6);

}  // namespace moep::testing
