#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "simplex.hpp"

namespace moep::testing {

namespace {

Problem two_by_two(double lo, double hi, bool integer) {
  Problem p;
  p.variables = {{"x1", lo, hi, integer}, {"x2", lo, hi, integer}};
  p.objectives = {{"f1", ObjSense::Min, {1, 0}, std::nullopt, 0.0}, {"f2", ObjSense::Min, {0, 1}, std::nullopt, 0.0}};
  return p;
}

// Calls f on every combination of subset indices of size k out of n.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool close(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

void push_unique(std::vector<std::vector<double>>& out, std::vector<double> v, double tol) {
  for (const auto& u : out)
    if (close(u, v, tol)) return;
  out.push_back(std::move(v));
}

}  // namespace

Problem e1() {
  Problem p = two_by_two(0.0, 1.0, false);
  p.constraints = {{"c1", {1, 1}, std::nullopt, RowSense::Ge, 1.0}};
  return p;
}

Problem e2() {
  Problem p = two_by_two(0.0, 2.0, true);
  p.constraints = {{"c1", {1, 2}, std::nullopt, RowSense::Ge, 2.0},
                   {"c2", {2, 1}, std::nullopt, RowSense::Ge, 2.0}};
  return p;
}

std::vector<std::vector<double>> subset_vertices(std::span<const DualHalfspace> hs, std::size_t d) {
  std::vector<std::vector<double>> out;
  for_each_subset(hs.size(), d, [&](const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd A(d, d);
    Eigen::VectorXd b(d);
    for (std::size_t r = 0; r < d; ++r) {
      const DualHalfspace& h = hs[idx[r]];
      for (std::size_t c = 0; c + 1 < d; ++c) A(r, c) = h.g[c];
      A(r, d - 1) = h.h;
      b(r) = h.rhs;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < static_cast<Eigen::Index>(d)) return;
    Eigen::VectorXd z = lu.solve(b);
    std::vector<double> v(z.data(), z.data() + d);
    for (const auto& h : hs)
      if (h.slack(v) > 1e-7 * std::max(1.0, std::abs(h.rhs))) return;
    push_unique(out, std::move(v), 1e-7);
  });
  return out;
}

std::vector<std::vector<double>> enumerate_solutions(const Problem& p) {
  const std::size_t n = p.num_variables();
  std::vector<std::size_t> ints, conts;
  for (std::size_t k = 0; k < n; ++k) (p.variables[k].integer ? ints : conts).push_back(k);

  // Rows of the continuous slice as a·x_c (sense) b, bounds included.
  struct Row {
    std::vector<double> a;
    double b;
    bool eq;
  };
  std::vector<std::vector<double>> out;
  std::vector<double> x(n, 0.0);

  auto slice = [&]() {
    std::vector<Row> rows;
    for (const auto& c : p.constraints) {
      Row r{std::vector<double>(conts.size()), c.rhs, c.sense == RowSense::Eq};
      double fixed = 0.0;
      for (std::size_t k : ints) fixed += c.coeffs[k] * x[k];
      for (std::size_t j = 0; j < conts.size(); ++j) r.a[j] = c.coeffs[conts[j]];
      r.b -= fixed;
      if (c.sense == RowSense::Ge) {
        for (double& v : r.a) v = -v;
        r.b = -r.b;
      }
      rows.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < conts.size(); ++j) {
      const Variable& v = p.variables[conts[j]];
      Row lo{std::vector<double>(conts.size()), -v.lower, false};
      lo.a[j] = -1.0;
      Row hi{std::vector<double>(conts.size()), v.upper, false};
      hi.a[j] = 1.0;
      rows.push_back(std::move(lo));
      rows.push_back(std::move(hi));
    }
    return rows;
  };

  auto record = [&]() {
    if (is_feasible(p, x, 1e-7)) push_unique(out, x, 1e-9);
  };

  auto continuous_vertices = [&]() {
    if (conts.empty()) {
      record();
      return;
    }
    std::vector<Row> rows = slice();
    const std::size_t c = conts.size();
    for_each_subset(rows.size(), c, [&](const std::vector<std::size_t>& idx) {
      Eigen::MatrixXd A(c, c);
      Eigen::VectorXd b(c);
      for (std::size_t r = 0; r < c; ++r) {
        for (std::size_t j = 0; j < c; ++j) A(r, j) = rows[idx[r]].a[j];
        b(r) = rows[idx[r]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (lu.rank() < static_cast<Eigen::Index>(c)) return;
      Eigen::VectorXd z = lu.solve(b);
      for (std::size_t j = 0; j < c; ++j) x[conts[j]] = z(j);
      record();
    });
  };

  // Odometer over the integer assignments.
  for (std::size_t k : ints) x[k] = std::ceil(p.variables[k].lower);
  while (true) {
    continuous_vertices();
    std::size_t i = 0;
    for (; i < ints.size(); ++i) {
      std::size_t k = ints[i];
      if (x[k] + 1.0 <= p.variables[k].upper + 1e-9) {
        x[k] += 1.0;
        break;
      }
      x[k] = std::ceil(p.variables[k].lower);
    }
    if (i == ints.size()) break;
  }
  return out;
}

double enumerated_weighted_min(const Problem& p, std::span<const double> w) {
  double best = kInf;
  for (const auto& x : enumerate_solutions(p)) {
    std::vector<double> y = evaluate(p, x);
    best = std::min(best, std::inner_product(w.begin(), w.end(), y.begin(), 0.0));
  }
  return best;
}

bool admits_separating_weight(const std::vector<std::vector<double>>& ys, std::size_t k, double margin) {
  const std::size_t d = ys[k].size();
  // Variables w_1..w_d, t. Maximize t.
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
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (j == k) continue;
    std::vector<double> row(d + 1);
    for (std::size_t i = 0; i < d; ++i) row[i] = ys[j][i] - ys[k][i];
    row[d] = -1.0;
    lp.add_row(std::move(row), RowSense::Ge, 0.0);
  }
  if (lp.rows.size() == 1) return true;
  LpResult r = simplex_solve(lp);
  return r.status == LpStatus::Optimal && r.x[d] >= margin;
}

bool weakly_dominates(std::span<const double> a, std::span<const double> b, double tol) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return false;
    if (a[i] < b[i] - tol) strict = true;
  }
  return strict;
}

OracleResult DiskOracle::minimize(const Problem&, const WeightVector& w, bool) {
  double norm = 0.0;
  for (double v : w.values()) norm += v * v;
  norm = std::sqrt(norm);
  OutcomePoint pt;
  for (double v : w.values()) pt.y.push_back(-v / norm);
  pt.x = pt.y;
  OracleResult r;
  r.status = OracleStatus::Optimal;
  r.value = -norm;
  r.point = std::move(pt);
  return r;
}

Problem disk_problem() {
  Problem p = two_by_two(-1.0, 1.0, false);
  SquareMatrix q(2);
  q(0, 0) = q(1, 1) = 1.0;
  p.constraints = {{"disk", {0, 0}, q, RowSense::Le, 1.0}};
  return p;
}

SoundnessReport check_soundness(const Problem& original, const std::vector<OutcomePoint>& points, double tol_confirm) {
  SoundnessReport rep;
  std::ostringstream msg;
  auto fail = [&](std::size_t k, const std::string& why) {
    rep.ok = false;
    msg << "point " << k << ": " << why << '\n';
  };
  // Compare in minimization orientation.
  std::vector<std::vector<double>> ys;
  for (const auto& pt : points) {
    std::vector<double> y = pt.y;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (original.objectives[i].sense == ObjSense::Max) y[i] = -y[i];
    ys.push_back(std::move(y));
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    const OutcomePoint& pt = points[k];
    if (pt.x.size() != original.num_variables()) {
      fail(k, "witness has wrong length");
      continue;
    }
    if (!is_feasible(original, pt.x, kTolFeas)) fail(k, "witness infeasible");
    std::vector<double> fy = evaluate(original, pt.x);
    for (std::size_t i = 0; i < fy.size(); ++i)
      if (std::abs(fy[i] - pt.y[i]) > kTolEq * std::max(1.0, std::abs(fy[i]))) fail(k, "y differs from f(x)");
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != k && weakly_dominates(ys[j], ys[k], 1e-9 * std::max(1.0, std::abs(ys[k][0]))))
        fail(k, "dominated by point " + std::to_string(j));
    if (!admits_separating_weight(ys, k, 1e-12)) fail(k, "no separating weight");
    if (pt.certifying_weight) {
      const auto& w = *pt.certifying_weight;
      double sum = 0.0;
      for (double v : w) {
        if (v < -1e-9) fail(k, "negative weight");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-6) fail(k, "weight not normalized");
      double own = std::inner_product(w.begin(), w.end(), ys[k].begin(), 0.0);
      double scale = 0.0;
      for (const auto& y : ys)
        for (double v : y) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < ys.size(); ++j) {
        double other = std::inner_product(w.begin(), w.end(), ys[j].begin(), 0.0);
        if (other < own - tol_confirm * std::max(1.0, scale))
          fail(k, "certifying weight prefers point " + std::to_string(j));
      }
    }
  }
  rep.detail = msg.str();
  return rep;
}

}  // namespace moep::testing
