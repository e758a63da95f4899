#include "bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "error.hpp"
#include "oracle.hpp"
#include "simplex.hpp"

namespace moep {

Family parse_family(const std::string& name) {
  if (name == "moilp_general") return Family::MoilpGeneral;
  if (name == "momilp_mixed") return Family::MomilpMixed;
  throw Error(ErrorCode::InvalidArgument, "unknown instance family '" + name + "'");
}

std::string family_name(Family f) { return f == Family::MoilpGeneral ? "moilp_general" : "momilp_mixed"; }

Problem generate(const GenSpec& spec) {
  if (spec.d < 2) throw Error(ErrorCode::InvalidArgument, "generator needs d >= 2");
  if (spec.n < spec.d) throw Error(ErrorCode::InvalidArgument, "generator needs n >= d");
  if (spec.obj_lo > spec.obj_hi || spec.con_lo > spec.con_hi)
    throw Error(ErrorCode::InvalidArgument, "empty coefficient range");
  if (spec.con_lo < 0) throw Error(ErrorCode::InvalidArgument, "cover rows need non-negative coefficients");
  if (spec.upper < 1) throw Error(ErrorCode::InvalidArgument, "upper bound U must be >= 1");
  if (!(spec.integer_ratio >= 0.0 && spec.integer_ratio <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "integer ratio must lie in [0, 1]");
  if (!(spec.rhs_fraction >= 0.0 && spec.rhs_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "rhs fraction must lie in [0, 1]");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> obj(spec.obj_lo, spec.obj_hi);
  std::uniform_int_distribution<int> con(spec.con_lo, spec.con_hi);

  const std::size_t num_int = spec.family == Family::MoilpGeneral
                                  ? spec.n
                                  : static_cast<std::size_t>(std::lround(spec.integer_ratio * spec.n));
  Problem p;
  for (std::size_t k = 0; k < spec.n; ++k)
    p.variables.push_back(Variable{"x" + std::to_string(k + 1), 0.0, static_cast<double>(spec.upper), k < num_int});
  for (std::size_t i = 0; i < spec.d; ++i) {
    Objective o{"o" + std::to_string(i + 1), ObjSense::Min, std::vector<double>(spec.n), std::nullopt, 0.0};
    for (double& c : o.coeffs) c = obj(rng);
    p.objectives.push_back(std::move(o));
  }
  for (std::size_t j = 0; j < spec.m; ++j) {
    Constraint c{"c" + std::to_string(j + 1), std::vector<double>(spec.n), std::nullopt, RowSense::Ge, 0.0};
    double total = 0.0;
    for (double& a : c.coeffs) {
      a = con(rng);
      total += a;
    }
    c.rhs = std::floor(spec.rhs_fraction * spec.upper * total);
    p.constraints.push_back(std::move(c));
  }
  return p;
}

namespace {

// Solves the square system M z = r in place; false when singular.
bool solve_dense(std::vector<std::vector<double>> m, std::vector<double> r, std::vector<double>& z) {
  const std::size_t k = r.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < k; ++row)
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    if (std::abs(m[piv][col]) < 1e-12) return false;
    std::swap(m[piv], m[col]);
    std::swap(r[piv], r[col]);
    for (std::size_t row = 0; row < k; ++row) {
      if (row == col) continue;
      const double f = m[row][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < k; ++c) m[row][c] -= f * m[col][c];
      r[row] -= f * r[col];
    }
  }
  z.resize(k);
  for (std::size_t i = 0; i < k; ++i) z[i] = r[i] / m[i][i];
  return true;
}

struct Hyperplane {
  std::vector<double> a;
  double b;
};

// Vertices of the continuous slice for one integer assignment.
void slice_vertices(const Problem& p, const std::vector<std::size_t>& cont, std::vector<double>& x,
                    std::vector<std::vector<double>>& out) {
  const std::size_t l = cont.size();
  if (l == 0) {
    if (max_violation(p, x) <= 1e-9) out.push_back(x);
    return;
  }
  std::vector<Hyperplane> planes;
  for (const auto& c : p.constraints) {
    Hyperplane h{std::vector<double>(l), c.rhs};
    for (std::size_t k = 0; k < p.num_variables(); ++k) {
      const auto it = std::find(cont.begin(), cont.end(), k);
      if (it != cont.end())
        h.a[static_cast<std::size_t>(it - cont.begin())] = c.coeffs[k];
      else
        h.b -= c.coeffs[k] * x[k];
    }
    planes.push_back(std::move(h));
  }
  for (std::size_t j = 0; j < l; ++j) {
    Hyperplane lo{std::vector<double>(l), p.variables[cont[j]].lower};
    lo.a[j] = 1.0;
    Hyperplane hi = lo;
    hi.b = p.variables[cont[j]].upper;
    planes.push_back(std::move(lo));
    planes.push_back(std::move(hi));
  }

  std::vector<std::size_t> pick(l);
  std::iota(pick.begin(), pick.end(), 0);
  const std::size_t total = planes.size();
  for (;;) {
    std::vector<std::vector<double>> m;
    std::vector<double> r;
    for (std::size_t idx : pick) {
      m.push_back(planes[idx].a);
      r.push_back(planes[idx].b);
    }
    std::vector<double> z;
    if (solve_dense(m, r, z)) {
      for (std::size_t j = 0; j < l; ++j) x[cont[j]] = z[j];
      double scale = 1.0;
      for (double v : z) scale = std::max(scale, std::abs(v));
      if (max_violation(p, x) <= 1e-9 * scale) out.push_back(x);
    }
    // Next l-subset in lexicographic order.
    std::size_t i = l;
    while (i > 0 && pick[i - 1] == total - l + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < l; ++j) pick[j] = pick[j - 1] + 1;
  }
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + 1e-9) return false;
    if (a[i] < b[i] - 1e-9) strict = true;
  }
  return strict;
}

// Maximal margin t with wᵀ(y' − y) >= t for every other y', w in the simplex.
// Rows are added lazily: only a handful of points are ever active.
std::pair<double, std::vector<double>> separation(const std::vector<OutcomePoint>& pts, std::size_t self) {
  const std::size_t d = pts[self].y.size();
  auto diff = [&](std::size_t j) {
    std::vector<double> row(d + 1);
    for (std::size_t i = 0; i < d; ++i) row[i] = pts[j].y[i] - pts[self].y[i];
    row[d] = -1.0;
    return row;
  };
  LinearProgram lp;
  lp.objective.assign(d + 1, 0.0);
  lp.objective[d] = -1.0;
  lp.lower.assign(d + 1, 0.0);
  lp.upper.assign(d + 1, 1.0);
  lp.lower[d] = -kInf;
  lp.upper[d] = kInf;
  std::vector<double> sum(d + 1, 1.0);
  sum[d] = 0.0;
  lp.add_row(sum, RowSense::Eq, 1.0);

  std::vector<bool> active(pts.size(), false);
  active[self] = true;
  // Seed with the best competitor along each axis.
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t pick = pts.size();
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != self && (pick == pts.size() || pts[j].y[i] < pts[pick].y[i])) pick = j;
    if (pick < pts.size() && !active[pick]) {
      active[pick] = true;
      lp.add_row(diff(pick), RowSense::Ge, 0.0);
    }
  }

  for (;;) {
    const LpResult r = simplex_solve(lp);
    if (r.status != LpStatus::Optimal) throw Error(ErrorCode::NumericalError, "separation LP did not solve");
    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (active[j]) continue;
      const auto row = diff(j);
      double lhs = 0.0, scale = 1.0;
      for (std::size_t i = 0; i <= d; ++i) {
        lhs += row[i] * r.x[i];
        scale = std::max(scale, std::abs(row[i]));
      }
      if (lhs < -1e-12 * scale) violated.emplace_back(lhs / scale, j);
    }
    if (violated.empty()) {
      std::vector<double> w(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(d));
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      for (double& v : w) v = std::max(0.0, v) / total;
      return {r.x[d], w};
    }
    std::sort(violated.begin(), violated.end());
    for (std::size_t k = 0; k < std::min(violated.size(), d + 1); ++k) {
      active[violated[k].second] = true;
      lp.add_row(diff(violated[k].second), RowSense::Ge, 0.0);
    }
  }
}

}  // namespace

BruteForceResult brute_force_extreme_points(const Problem& p, const BruteForceCaps& caps) {
  if (!p.is_linear()) throw Error(ErrorCode::UnsupportedProblem, "brute force handles linear problems only");
  std::vector<std::size_t> ints, cont;
  double assignments = 1.0;
  for (std::size_t k = 0; k < p.num_variables(); ++k) {
    const Variable& v = p.variables[k];
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
      throw Error(ErrorCode::UnsupportedProblem, "brute force needs finite bounds on '" + v.name + "'");
    if (v.integer) {
      ints.push_back(k);
      assignments *= std::max(0.0, std::floor(v.upper + kTolInt) - std::ceil(v.lower - kTolInt) + 1.0);
    } else {
      cont.push_back(k);
    }
  }
  if (assignments > static_cast<double>(caps.max_assignments))
    throw Error(ErrorCode::CapsExceeded, "brute force: " + std::to_string(static_cast<long long>(assignments)) +
                                             " integer assignments exceed the cap");
  if (cont.size() > caps.max_continuous)
    throw Error(ErrorCode::CapsExceeded, "brute force: too many continuous variables");

  std::vector<std::vector<double>> solutions;
  std::vector<double> x(p.num_variables(), 0.0);
  std::vector<double> lo(ints.size()), hi(ints.size());
  for (std::size_t j = 0; j < ints.size(); ++j) {
    lo[j] = std::ceil(p.variables[ints[j]].lower - kTolInt);
    hi[j] = std::floor(p.variables[ints[j]].upper + kTolInt);
    if (lo[j] > hi[j]) return BruteForceResult{{}, {}, true};
    x[ints[j]] = lo[j];
  }
  for (;;) {
    slice_vertices(p, cont, x, solutions);
    std::size_t j = 0;
    while (j < ints.size() && x[ints[j]] >= hi[j]) {
      x[ints[j]] = lo[j];
      ++j;
    }
    if (j == ints.size()) break;
    x[ints[j]] += 1.0;
  }

  BruteForceResult result;
  if (solutions.empty()) {
    result.infeasible = true;
    return result;
  }
  std::vector<OutcomePoint> unique;
  for (auto& s : solutions) {
    OutcomePoint pt{evaluate(p, s), s, std::nullopt};
    if (std::none_of(unique.begin(), unique.end(), [&](const OutcomePoint& q) { return close(q.y, pt.y, 1e-9); }))
      unique.push_back(std::move(pt));
  }
  for (const auto& pt : unique)
    if (std::none_of(unique.begin(), unique.end(), [&](const OutcomePoint& q) { return dominates(q.y, pt.y); }))
      result.nondominated.push_back(pt);

  const std::size_t d = p.num_objectives();
  if (result.nondominated.size() == 1) {
    OutcomePoint only = result.nondominated[0];
    only.certifying_weight = std::vector<double>(d, 1.0 / static_cast<double>(d));
    result.extreme_points.push_back(std::move(only));
    return result;
  }
  for (std::size_t k = 0; k < result.nondominated.size(); ++k) {
    auto [margin, w] = separation(result.nondominated, k);
    if (margin < caps.delta) continue;
    OutcomePoint pt = result.nondominated[k];
    pt.certifying_weight = std::move(w);
    result.extreme_points.push_back(std::move(pt));
  }
  return result;
}

SetComparison compare_point_sets(std::span<const OutcomePoint> expected, std::span<const OutcomePoint> actual,
                                 double tol) {
  SetComparison cmp;
  auto match = [&](const OutcomePoint& a, std::span<const OutcomePoint> pool) {
    return std::any_of(pool.begin(), pool.end(),
                       [&](const OutcomePoint& b) { return a.y.size() == b.y.size() && close(a.y, b.y, tol); });
  };
  for (const auto& e : expected)
    if (!match(e, actual)) cmp.missing.push_back(e.y);
  for (const auto& a : actual)
    if (!match(a, expected)) cmp.extra.push_back(a.y);
  cmp.equal = cmp.missing.empty() && cmp.extra.empty();
  return cmp;
}

}  // namespace moep
