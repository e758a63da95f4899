#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "model.hpp"
#include "simplex.hpp"

namespace moep {

inline constexpr double kTolW = 1e-9;
inline constexpr double kTolInt = 1e-6;

/// A point of the weight simplex: w_i >= 0 and Σ w_i = 1.
class WeightVector {
 public:
  /// Throws InvalidArgument unless w lies in the simplex within kTolW.
  explicit WeightVector(std::vector<double> w);

  static WeightVector uniform(std::size_t d);
  static WeightVector unit(std::size_t d, std::size_t i);

  std::span<const double> values() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  double dot(std::span<const double> y) const;

 private:
  std::vector<double> w_;
};

enum class OracleStatus { Optimal, Infeasible, Unbounded };

struct OracleResult {
  OracleStatus status = OracleStatus::Infeasible;
  double value = 0.0;
  std::optional<OutcomePoint> point;
};

/// Work counters. Atomic so concurrent calls on one oracle stay race-free.
struct OracleStats {
  std::atomic<std::size_t> calls{0};
  std::atomic<std::size_t> lp_solves{0};
  std::atomic<std::size_t> pivots{0};
  std::atomic<std::size_t> nodes{0};
};

/// Weighted-sum oracle: minimizes wᵀf(x) over the feasible set.
///
/// Implementations must be reentrant; callers may issue concurrent calls on an
/// immutable Problem. `solve_weighted_sum_lex` must return a non-dominated
/// point even when some w_i = 0.
class WeightedSumOracle {
 public:
  virtual ~WeightedSumOracle() = default;

  virtual bool supports(const Problem& p) const = 0;

  OracleResult solve_weighted_sum(const Problem& p, const WeightVector& w) {
    stats_.calls.fetch_add(1, std::memory_order_relaxed);
    return minimize(p, w, false);
  }
  OracleResult solve_weighted_sum_lex(const Problem& p, const WeightVector& w) {
    stats_.calls.fetch_add(1, std::memory_order_relaxed);
    return minimize(p, w, true);
  }

  const OracleStats& stats() const { return stats_; }

 protected:
  /// With `lexicographic` set, ties among weighted-sum optima must be broken
  /// towards a non-dominated point.
  virtual OracleResult minimize(const Problem& p, const WeightVector& w, bool lexicographic) = 0;

  OracleStats stats_;
};

struct BranchAndBoundOptions {
  std::size_t node_limit = 1'000'000;
  double int_tol = kTolInt;
};

/// Exact MILP optimum of objectiveᵀx over a linear problem, with optional
/// extra rows (used for lexicographic stages). Best-first on the relaxation
/// bound, branching on the most fractional integer variable.
/// Throws NodeLimitExceeded; reports Infeasible/Unbounded through the status.
OracleResult branch_and_bound(const Problem& p, std::span<const double> objective,
                              const LinearProgram& extra_rows = {},
                              const BranchAndBoundOptions& options = {},
                              OracleStats* stats = nullptr);

/// Built-in oracle for linear problems: dense simplex + branch and bound.
class BuiltinOracle final : public WeightedSumOracle {
 public:
  explicit BuiltinOracle(BranchAndBoundOptions options = {}) : options_(options) {}

  bool supports(const Problem& p) const override { return p.is_linear(); }

 protected:
  /// Plain mode minimizes wᵀy. Lexicographic mode then minimizes Σy over the
  /// optima, and finally y_1, …, y_{d-1} in turn, so the point returned is a
  /// vertex of the optimal face.
  OracleResult minimize(const Problem& p, const WeightVector& w, bool lexicographic) override;

 private:
  BranchAndBoundOptions options_;
};

}  // namespace moep
