#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "model.hpp"
#include "oracle.hpp"
#include "vertex_enum.hpp"

namespace moep {

struct SolverConfig {
  /// Ray-length threshold below which no facet is added. 0 = exact.
  double epsilon = 0.0;
  double tol_confirm = 1e-6;
  double tol_geom = kTolGeom;
  std::size_t max_iterations = 100'000;
  /// Normalize objective ranges before solving (used by the pipeline).
  bool normalize = true;
  /// > 1 shoots that many unvisited vertices concurrently per round.
  std::size_t parallel_shots = 1;
};

enum class Termination { Complete, IterationLimit, NodeLimit };

struct SolveStats {
  std::size_t oracle_calls = 0;
  std::size_t iterations = 0;
  std::size_t cuts = 0;
  std::size_t confirms = 0;
  std::size_t suppressed = 0;
  std::size_t degeneracy_events = 0;
  std::size_t final_vertices = 0;
  std::size_t final_facets = 0;
};

struct ExtremePointSet {
  std::vector<OutcomePoint> points;
  std::vector<DualHalfspace> dual_facets;
  /// False when the ε rule suppressed a facet or a limit stopped the run.
  bool exact = true;
  Termination termination = Termination::Complete;
  SolveStats stats;
  std::optional<DualPolyhedron> dual;
};

struct IterationEvent {
  std::size_t iteration = 0;
  std::vector<double> vertex;
  double ray_length = 0.0;
  enum class Action { Confirmed, Cut, Suppressed, Degenerate } action = Action::Confirmed;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

/// (w̄_1, …, w̄_{d-1}, 1 - Σ w̄_i), clamped onto the simplex.
WeightVector lambda(std::span<const double> wbar);

struct RayShot {
  OutcomePoint point;
  double ray_length = 0.0;
};

/// One lexicographic weighted-sum solve below the dual vertex (w̄, a).
/// Throws Infeasible, or NoIdealPoint when the weighted sum is unbounded.
RayShot ray_shoot(std::span<const double> vertex, const Problem& p, WeightedSumOracle& oracle);

/// Dual outer approximation driven by a weighted-sum oracle. `p` must be in
/// minimization form. Throws Infeasible, NoIdealPoint, UnsupportedProblem.
/// Iteration and branch-and-bound node limits hit after initialization do not
/// throw; they set `termination`, clear `exact` and keep the facets found so far.
ExtremePointSet solve(const Problem& p, const SolverConfig& cfg, WeightedSumOracle& oracle,
                      const IterationObserver& observer = {});

/// One entry per support facet of the final approximation, carrying the
/// witness stored under the facet's tag and the centroid of the facet's
/// vertex weights. Points closer than 1e-6 (infinity norm) are merged.
std::vector<OutcomePoint> dual_to_primal_report(const DualPolyhedron& poly,
                                                std::span<const OutcomePoint> witnesses);

}  // namespace moep
