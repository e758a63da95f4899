#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "error.hpp"

namespace moep {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NoIdealPoint: return "NoIdealPoint";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::NodeLimitExceeded: return "NodeLimitExceeded";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::NumericalDegeneracy: return "NumericalDegeneracy";
    case ErrorCode::CutIsRedundant: return "CutIsRedundant";
    case ErrorCode::UnsupportedProblem: return "UnsupportedProblem";
    case ErrorCode::CapsExceeded: return "CapsExceeded";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

double SquareMatrix::quadratic_form(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += data[i * n + j] * x[j];
    sum += x[i] * row;
  }
  return sum;
}

std::size_t Problem::num_integer() const {
  return static_cast<std::size_t>(
      std::count_if(variables.begin(), variables.end(), [](const Variable& v) { return v.integer; }));
}

bool Problem::is_linear() const {
  return std::none_of(objectives.begin(), objectives.end(),
                      [](const Objective& o) { return o.quad.has_value(); }) &&
         std::none_of(constraints.begin(), constraints.end(),
                      [](const Constraint& c) { return c.quad.has_value(); });
}

bool SignRecord::is_flipped(std::size_t objective) const {
  return std::find(flipped.begin(), flipped.end(), objective) != flipped.end();
}

std::vector<double> SignRecord::restore(std::span<const double> y) const {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t i : flipped) out[i] = -out[i];
  return out;
}

namespace {

bool is_symmetric(const SquareMatrix& m) {
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = i + 1; j < m.n; ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

void check_quad(const std::optional<SquareMatrix>& q, std::size_t n, const std::string& what,
                std::vector<std::string>& out) {
  if (!q) return;
  if (q->n != n || q->data.size() != n * n) {
    out.push_back(what + ": quadratic matrix must be " + std::to_string(n) + "x" +
                  std::to_string(n));
  } else if (!is_symmetric(*q)) {
    out.push_back(what + ": quadratic matrix is not symmetric");
  }
}

}  // namespace

std::vector<std::string> validate(const Problem& p) {
  std::vector<std::string> out;
  const std::size_t n = p.num_variables();
  if (p.num_objectives() < 2)
    out.push_back("needs >=2 objectives, got " + std::to_string(p.num_objectives()));
  if (n == 0) out.push_back("needs >=1 variable");

  std::set<std::string> names;
  for (const auto& v : p.variables) {
    if (!names.insert(v.name).second) out.push_back("duplicate variable name '" + v.name + "'");
    if (std::isnan(v.lower) || std::isnan(v.upper))
      out.push_back("variable '" + v.name + "': NaN bound");
    else if (v.lower > v.upper)
      out.push_back("variable '" + v.name + "': lower bound exceeds upper bound");
    if (v.lower == kInf || v.upper == -kInf)
      out.push_back("variable '" + v.name + "': bound excludes every finite value");
  }
  for (std::size_t i = 0; i < p.objectives.size(); ++i) {
    const auto& o = p.objectives[i];
    const std::string what = "objective " + std::to_string(i + 1) + " '" + o.name + "'";
    if (o.coeffs.size() != n)
      out.push_back(what + ": dimension mismatch, coefficient vector has length " +
                    std::to_string(o.coeffs.size()) + ", expected " + std::to_string(n));
    check_quad(o.quad, n, what, out);
    if (!std::isfinite(o.constant)) out.push_back(what + ": non-finite constant");
    for (double c : o.coeffs)
      if (!std::isfinite(c)) {
        out.push_back(what + ": non-finite coefficient");
        break;
      }
  }
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    const auto& c = p.constraints[j];
    const std::string what = "constraint " + std::to_string(j + 1) + " '" + c.name + "'";
    if (c.coeffs.size() != n)
      out.push_back(what + ": dimension mismatch, coefficient vector has length " +
                    std::to_string(c.coeffs.size()) + ", expected " + std::to_string(n));
    check_quad(c.quad, n, what, out);
    if (std::isnan(c.rhs)) out.push_back(what + ": NaN right-hand side");
    for (double a : c.coeffs)
      if (!std::isfinite(a)) {
        out.push_back(what + ": non-finite coefficient");
        break;
      }
  }
  return out;
}

MinimizationForm to_minimization(const Problem& p) {
  MinimizationForm result{p, {}};
  for (std::size_t i = 0; i < result.problem.objectives.size(); ++i) {
    auto& o = result.problem.objectives[i];
    if (o.sense == ObjSense::Min) continue;
    result.signs.flipped.push_back(i);
  }
  result.problem = apply_signs(p, result.signs);
  return result;
}

Problem apply_signs(const Problem& p, const SignRecord& signs) {
  Problem out = p;
  for (std::size_t i : signs.flipped) {
    auto& o = out.objectives[i];
    for (double& c : o.coeffs) c = -c;
    if (o.quad)
      for (double& v : o.quad->data) v = -v;
    o.constant = -o.constant;
    o.sense = o.sense == ObjSense::Min ? ObjSense::Max : ObjSense::Min;
  }
  return out;
}

std::vector<double> evaluate(const Problem& p, std::span<const double> x) {
  const std::size_t n = p.num_variables();
  if (x.size() != n)
    throw Error(ErrorCode::InvalidArgument, "evaluate: x has length " + std::to_string(x.size()) +
                                                ", expected " + std::to_string(n));
  std::vector<double> y;
  y.reserve(p.num_objectives());
  for (const auto& o : p.objectives) {
    if (o.coeffs.size() != n)
      throw Error(ErrorCode::InvalidArgument, "evaluate: objective '" + o.name + "' dimension mismatch");
    double v = std::inner_product(o.coeffs.begin(), o.coeffs.end(), x.begin(), 0.0);
    if (o.quad) v += o.quad->quadratic_form(x);
    y.push_back(v + o.constant);
  }
  return y;
}

double max_violation(const Problem& p, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t k = 0; k < p.variables.size(); ++k) {
    const auto& v = p.variables[k];
    worst = std::max({worst, v.lower - x[k], x[k] - v.upper});
    if (v.integer) worst = std::max(worst, std::abs(x[k] - std::round(x[k])));
  }
  for (const auto& c : p.constraints) {
    double lhs = std::inner_product(c.coeffs.begin(), c.coeffs.end(), x.begin(), 0.0);
    if (c.quad) lhs += c.quad->quadratic_form(x);
    switch (c.sense) {
      case RowSense::Le: worst = std::max(worst, lhs - c.rhs); break;
      case RowSense::Ge: worst = std::max(worst, c.rhs - lhs); break;
      case RowSense::Eq: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

bool is_feasible(const Problem& p, std::span<const double> x, double tol) {
  return x.size() == p.num_variables() && max_violation(p, x) <= tol;
}

}  // namespace moep
