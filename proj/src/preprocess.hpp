#pragma once

#include <span>
#include <vector>

#include "model.hpp"
#include "oracle.hpp"

namespace moep {

/// Per-objective multipliers applied to the model; y_scaled = s ∘ y.
struct Scaling {
  std::vector<double> multipliers;
  /// The ideal point of the unscaled problem. Reported, never subtracted.
  std::vector<double> offsets;
  std::vector<double> ideal_point;

  static Scaling identity(std::size_t d);

  std::vector<double> apply(std::span<const double> y) const;
  std::vector<double> unapply(std::span<const double> y) const;
  /// Maps a weight on scaled objectives to the equivalent weight on the
  /// unscaled ones: w ∝ w_scaled ∘ s.
  std::vector<double> unapply_weight(std::span<const double> w) const;
};

struct IdealPoint {
  std::vector<double> values;
  /// Minimizer of each objective under the lexicographic oracle.
  std::vector<OutcomePoint> minimizers;
};

/// One lexicographic solve per unit weight e_i. Throws NoIdealPoint naming
/// the first unbounded objective, or Infeasible.
IdealPoint compute_ideal_point(const Problem& p, WeightedSumOracle& oracle);

struct Normalized {
  Problem problem;
  Scaling scaling;
};

/// Scales objective i by 1 / R_i, R_i being the payoff-table range
/// max_{j≠i} y^(j)_i − ideal_i (unscaled when R_i <= 1e-9).
Normalized normalize(const Problem& p, const IdealPoint& ideal);
Normalized normalize(const Problem& p, WeightedSumOracle& oracle);

Problem scale_objectives(const Problem& p, std::span<const double> multipliers);

}  // namespace moep
