#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "error.hpp"

namespace moep {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw Error(ErrorCode::InvalidArgument, "weight vector is empty");
  double sum = 0.0;
  for (double& v : w_) {
    if (!(v >= -kTolW)) throw Error(ErrorCode::InvalidArgument, "weight component below zero");
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kTolW)
    throw Error(ErrorCode::InvalidArgument, "weights must sum to 1, got " + std::to_string(sum));
}

WeightVector WeightVector::uniform(std::size_t d) {
  return WeightVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

WeightVector WeightVector::unit(std::size_t d, std::size_t i) {
  std::vector<double> w(d, 0.0);
  w.at(i) = 1.0;
  return WeightVector(std::move(w));
}

double WeightVector::dot(std::span<const double> y) const {
  return std::inner_product(w_.begin(), w_.end(), y.begin(), 0.0);
}

namespace {

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
  LpResult lp;
  std::size_t id = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.lp.value != b.lp.value) return a.lp.value > b.lp.value;
    return a.id > b.id;
  }
};

LpResult solve_node(LinearProgram& lp, const std::vector<double>& lower,
                    const std::vector<double>& upper, OracleStats* stats) {
  lp.lower = lower;
  lp.upper = upper;
  LpResult r = simplex_solve(lp);
  if (stats) {
    stats->lp_solves.fetch_add(1, std::memory_order_relaxed);
    stats->pivots.fetch_add(r.pivots, std::memory_order_relaxed);
  }
  return r;
}

// Rounds integer variables and re-optimizes the continuous part with them fixed.
std::vector<double> polish(const Problem& p, LinearProgram& lp, const LpResult& r, OracleStats* stats) {
  std::vector<double> x = r.x;
  std::vector<double> lower = lp.lower, upper = lp.upper;
  bool any_continuous = false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (p.variables[k].integer) {
      x[k] = std::round(x[k]);
      lower[k] = upper[k] = x[k];
    } else {
      any_continuous = true;
    }
  }
  if (!any_continuous || p.num_integer() == 0) return x;
  LpResult fixed = solve_node(lp, lower, upper, stats);
  if (fixed.status == LpStatus::Optimal && fixed.value <= r.value + 1e-9 * (1.0 + std::abs(r.value)))
    return fixed.x;
  return x;
}

}  // namespace

OracleResult branch_and_bound(const Problem& p, std::span<const double> objective,
                              const LinearProgram& extra_rows, const BranchAndBoundOptions& options,
                              OracleStats* stats) {
  if (!p.is_linear()) throw Error(ErrorCode::UnsupportedProblem, "branch_and_bound: quadratic terms present");
  LinearProgram lp = relaxation(p, std::vector<double>(objective.begin(), objective.end()));
  for (std::size_t i = 0; i < extra_rows.num_rows(); ++i)
    lp.add_row(extra_rows.rows[i], extra_rows.senses[i], extra_rows.rhs[i]);
  const std::vector<double> root_lower = lp.lower, root_upper = lp.upper;

  OracleResult result;
  Node root{root_lower, root_upper, solve_node(lp, root_lower, root_upper, stats), 0};
  if (root.lp.status == LpStatus::Unbounded) {
    result.status = OracleStatus::Unbounded;
    return result;
  }
  if (root.lp.status == LpStatus::Infeasible) return result;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(std::move(root));
  std::size_t next_id = 1;
  std::size_t processed = 0;
  std::optional<std::vector<double>> incumbent;
  double incumbent_value = kInf;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (incumbent && node.lp.value >= incumbent_value - 1e-9 * (1.0 + std::abs(incumbent_value))) continue;
    if (++processed > options.node_limit)
      throw Error(ErrorCode::NodeLimitExceeded,
                  "branch and bound: node limit " + std::to_string(options.node_limit) + " exceeded");
    if (stats) stats->nodes.fetch_add(1, std::memory_order_relaxed);

    std::size_t branch_var = p.num_variables();
    double most = options.int_tol;
    for (std::size_t k = 0; k < p.num_variables(); ++k) {
      if (!p.variables[k].integer) continue;
      const double frac = std::abs(node.lp.x[k] - std::round(node.lp.x[k]));
      if (frac > most) {
        most = frac;
        branch_var = k;
      }
    }

    if (branch_var == p.num_variables()) {
      lp.lower = node.lower;
      lp.upper = node.upper;
      std::vector<double> x = polish(p, lp, node.lp, stats);
      const double value = std::inner_product(objective.begin(), objective.end(), x.begin(), 0.0);
      if (value < incumbent_value) {
        incumbent_value = value;
        incumbent = std::move(x);
      }
      continue;
    }

    const double v = node.lp.x[branch_var];
    for (int side = 0; side < 2; ++side) {
      Node child{node.lower, node.upper, {}, next_id++};
      if (side == 0)
        child.upper[branch_var] = std::floor(v);
      else
        child.lower[branch_var] = std::ceil(v);
      if (child.lower[branch_var] > child.upper[branch_var]) continue;
      child.lp = solve_node(lp, child.lower, child.upper, stats);
      if (child.lp.status == LpStatus::Unbounded) {
        result.status = OracleStatus::Unbounded;
        return result;
      }
      if (child.lp.status == LpStatus::Optimal) open.push(std::move(child));
    }
  }

  if (!incumbent) return result;
  result.status = OracleStatus::Optimal;
  result.value = incumbent_value;
  OutcomePoint point;
  point.x = std::move(*incumbent);
  point.y = evaluate(p, point.x);
  result.point = std::move(point);
  return result;
}

namespace {

std::vector<double> combine(const Problem& p, std::span<const double> w) {
  std::vector<double> obj(p.num_variables(), 0.0);
  for (std::size_t i = 0; i < p.num_objectives(); ++i) {
    if (w[i] == 0.0) continue;
    const auto& c = p.objectives[i].coeffs;
    for (std::size_t k = 0; k < obj.size(); ++k) obj[k] += w[i] * c[k];
  }
  return obj;
}

void check_supported(const Problem& p, const WeightVector& w) {
  if (!p.is_linear())
    throw Error(ErrorCode::UnsupportedProblem, "built-in oracle handles linear problems only");
  if (w.size() != p.num_objectives())
    throw Error(ErrorCode::InvalidArgument, "weight vector length does not match objective count");
}

// Re-solves the continuous part of x from the original constraints and bounds
// that are tight at x. Stacked lexicographic rows leave the simplex solution
// a few ulps-times-condition off the vertex; this removes that drift. x is
// returned unchanged when the tight set does not pin a unique point.
// Lex fixing rows leave room for drift of this order around the vertex.
constexpr double kSnapTol = 1e-5;

std::vector<double> snap_to_vertex(const Problem& p, std::vector<double> x) {
  std::vector<std::size_t> cont;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (p.variables[k].integer)
      x[k] = std::round(x[k]);
    else
      cont.push_back(k);
  }
  const std::size_t c = cont.size();
  if (c == 0) return x;

  struct Tight {
    std::vector<double> a;
    double b;
    double residual;
  };
  std::vector<Tight> rows;
  for (const auto& con : p.constraints) {
    double fixed = 0.0, lhs = 0.0, norm = 0.0;
    std::vector<double> a(c);
    for (std::size_t k = 0; k < x.size(); ++k) lhs += con.coeffs[k] * x[k];
    for (std::size_t j = 0; j < c; ++j) {
      a[j] = con.coeffs[cont[j]];
      norm = std::max(norm, std::abs(a[j]));
    }
    for (std::size_t k = 0; k < x.size(); ++k)
      if (p.variables[k].integer) fixed += con.coeffs[k] * x[k];
    const double residual = std::abs(lhs - con.rhs);
    if (norm > 0.0 && residual <= kSnapTol * (1.0 + std::abs(con.rhs)))
      rows.push_back({std::move(a), con.rhs - fixed, residual / norm});
  }
  for (std::size_t j = 0; j < c; ++j) {
    const Variable& v = p.variables[cont[j]];
    for (double bound : {v.lower, v.upper}) {
      if (!std::isfinite(bound) || std::abs(x[cont[j]] - bound) > kSnapTol * (1.0 + std::abs(bound))) continue;
      std::vector<double> a(c, 0.0);
      a[j] = 1.0;
      rows.push_back({std::move(a), bound, std::abs(x[cont[j]] - bound)});
    }
  }
  if (rows.size() < c) return x;
  std::stable_sort(rows.begin(), rows.end(), [](const Tight& l, const Tight& r) { return l.residual < r.residual; });

  // Greedily keep independent rows (modified Gram-Schmidt on the normals).
  std::vector<std::vector<double>> basis;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < rows.size() && chosen.size() < c; ++i) {
    std::vector<double> v = rows[i].a;
    double n0 = 0.0;
    for (double t : v) n0 += t * t;
    for (const auto& q : basis) {
      const double dot = std::inner_product(v.begin(), v.end(), q.begin(), 0.0);
      for (std::size_t j = 0; j < c; ++j) v[j] -= dot * q[j];
    }
    double n1 = 0.0;
    for (double t : v) n1 += t * t;
    if (n1 <= 1e-18 * n0) continue;
    for (double& t : v) t /= std::sqrt(n1);
    basis.push_back(std::move(v));
    chosen.push_back(i);
  }
  if (chosen.size() < c) return x;

  // Gaussian elimination with partial pivoting on the chosen square system.
  std::vector<std::vector<double>> m(c, std::vector<double>(c + 1));
  for (std::size_t r = 0; r < c; ++r) {
    std::copy(rows[chosen[r]].a.begin(), rows[chosen[r]].a.end(), m[r].begin());
    m[r][c] = rows[chosen[r]].b;
  }
  for (std::size_t col = 0; col < c; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < c; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-12) return x;
    std::swap(m[piv], m[col]);
    for (std::size_t r = 0; r < c; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j <= c; ++j) m[r][j] -= f * m[col][j];
    }
  }
  std::vector<double> snapped = x;
  for (std::size_t j = 0; j < c; ++j) {
    const double v = m[j][c] / m[j][j];
    if (std::abs(v - x[cont[j]]) > kSnapTol * (1.0 + std::abs(v))) return x;
    snapped[cont[j]] = v;
  }
  return max_violation(p, snapped) <= max_violation(p, x) + 1e-12 ? snapped : x;
}

OracleResult finish(OracleResult r, const Problem& p, const WeightVector& w) {
  if (r.status == OracleStatus::Optimal) {
    r.point->x = snap_to_vertex(p, std::move(r.point->x));
    r.point->y = evaluate(p, r.point->x);
    r.point->certifying_weight = std::vector<double>(w.values().begin(), w.values().end());
    r.value = w.dot(r.point->y);
  }
  return r;
}

}  // namespace

OracleResult BuiltinOracle::minimize(const Problem& p, const WeightVector& w, bool lexicographic) {
  check_supported(p, w);
  if (!lexicographic) return finish(branch_and_bound(p, combine(p, w.values()), {}, options_, &stats_), p, w);
  const std::size_t d = p.num_objectives();

  std::vector<std::vector<double>> stages;
  stages.push_back(combine(p, w.values()));
  stages.push_back(combine(p, std::vector<double>(d, 1.0)));
  for (std::size_t i = 0; i + 1 < d; ++i) stages.push_back(p.objectives[i].coeffs);

  LinearProgram fixings;
  OracleResult best;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    OracleResult r = branch_and_bound(p, stages[s], fixings, options_, &stats_);
    if (r.status != OracleStatus::Optimal) {
      if (s == 0) return r;
      break;  // numerically lost the optimal face; keep the previous stage's point
    }
    best = std::move(r);
    const double opt = best.value;
    fixings.add_row(stages[s], RowSense::Le, opt + 1e-9 * std::max(1.0, std::abs(opt)));
  }
  return finish(std::move(best), p, w);
}

}  // namespace moep
