#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "dual_benson.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "preprocess.hpp"

namespace moep {

using PhaseLogger = std::function<void(std::string_view phase, std::string_view message)>;

struct PipelineResult {
  /// Points in the caller's orientation and units.
  ExtremePointSet extreme_points;
  SignRecord signs;
  Scaling scaling;
  /// Ideal point in the caller's orientation.
  std::vector<double> ideal_point;
  std::size_t oracle_calls = 0;
};

/// "complete", "iteration_limit" or "node_limit".
const char* termination_name(Termination t);

/// validate → to_minimization → ideal point → optional normalization →
/// solve → undo scaling and sign flips. Throws on invalid input (with all
/// diagnostics joined), Infeasible, NoIdealPoint and UnsupportedProblem.
PipelineResult run_pipeline(const Problem& p, const SolverConfig& cfg, WeightedSumOracle& oracle,
                            const PhaseLogger& log = {});

}  // namespace moep
