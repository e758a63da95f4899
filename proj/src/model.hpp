#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute tolerance for checking y = f(x) on witnesses.
inline constexpr double kTolEq = 1e-6;
/// Absolute tolerance for constraint feasibility of witnesses.
inline constexpr double kTolFeas = 1e-6;

enum class ObjSense { Min, Max };
enum class RowSense { Le, Eq, Ge };

/// Dense square matrix, row-major. Used for the optional quadratic terms.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : n(dim), data(dim * dim, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }

  /// xᵀ M x
  double quadratic_form(std::span<const double> x) const;

  bool operator==(const SquareMatrix&) const = default;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;

  bool operator==(const Variable&) const = default;
};

struct Objective {
  std::string name;
  ObjSense sense = ObjSense::Min;
  std::vector<double> coeffs;
  std::optional<SquareMatrix> quad;
  double constant = 0.0;

  bool operator==(const Objective&) const = default;
};

struct Constraint {
  std::string name;
  std::vector<double> coeffs;
  std::optional<SquareMatrix> quad;
  RowSense sense = RowSense::Le;
  double rhs = 0.0;

  bool operator==(const Constraint&) const = default;
};

/// A multi-objective mixed-integer problem with optional quadratic terms:
///
///   min/max  f_i(x) = xᵀ P_i x + c_iᵀ x + k_i      i = 1..d
///   s.t.     xᵀ Q_j x + a_jᵀ x  (<=|=|>=)  b_j       j = 1..m
///            lo <= x <= hi,  x_k integer for flagged k
///
/// Values are immutable once built by a parser or generator; every
/// transformation returns a new Problem.
struct Problem {
  std::vector<Variable> variables;
  std::vector<Objective> objectives;
  std::vector<Constraint> constraints;

  std::size_t num_objectives() const { return objectives.size(); }
  std::size_t num_variables() const { return variables.size(); }
  std::size_t num_constraints() const { return constraints.size(); }
  std::size_t num_integer() const;

  /// True when no objective or constraint carries a quadratic matrix.
  bool is_linear() const;

  bool operator==(const Problem&) const = default;
};

/// A point in objective space together with a preimage.
struct OutcomePoint {
  std::vector<double> y;
  std::vector<double> x;
  std::optional<std::vector<double>> certifying_weight;
};

/// Indices of objectives whose sense was flipped from max to min.
struct SignRecord {
  std::vector<std::size_t> flipped;

  bool is_flipped(std::size_t objective) const;
  /// Maps a min-form outcome vector back to the original orientation.
  std::vector<double> restore(std::span<const double> y) const;
};

/// One human-readable message per violated invariant; empty when valid.
std::vector<std::string> validate(const Problem& p);

struct MinimizationForm {
  Problem problem;
  SignRecord signs;
};

MinimizationForm to_minimization(const Problem& p);

/// Re-applies the recorded sign flips; inverse of to_minimization.
Problem apply_signs(const Problem& p, const SignRecord& signs);

/// y_i = xᵀP_i x + c_iᵀx + k_i. Feasibility is not checked.
std::vector<double> evaluate(const Problem& p, std::span<const double> x);

/// Largest violation of bounds, integrality and constraints at x; 0 when feasible.
double max_violation(const Problem& p, std::span<const double> x);

bool is_feasible(const Problem& p, std::span<const double> x, double tol = kTolFeas);

}  // namespace moep
