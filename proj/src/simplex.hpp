#pragma once

#include <cstddef>
#include <vector>

#include "model.hpp"

namespace moep {

/// Single-objective LP:  min cᵀx  s.t.  rows (<=|=|>=) rhs,  lower <= x <= upper.
/// Bounds may be infinite. Rows are dense, each of length num_vars().
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  void add_row(std::vector<double> coeffs, RowSense sense, double b) {
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(b);
  }
};

/// Linear relaxation of a linear Problem with the given objective vector.
LinearProgram relaxation(const Problem& p, std::vector<double> objective);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double value = 0.0;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  /// 0 selects the default 10 * (n + m) * 100.
  std::size_t max_pivots = 0;
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  double feas_tol = 1e-7;
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule.
/// Throws Error(NumericalError) when the pivot limit is reached.
LpResult simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace moep
