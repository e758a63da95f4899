#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace moep {

LinearProgram relaxation(const Problem& p, std::vector<double> objective) {
  LinearProgram lp;
  lp.objective = std::move(objective);
  for (const auto& c : p.constraints) {
    if (c.quad) throw Error(ErrorCode::UnsupportedProblem, "quadratic constraint '" + c.name + "'");
    lp.add_row(c.coeffs, c.sense, c.rhs);
  }
  for (const auto& v : p.variables) {
    lp.lower.push_back(v.lower);
    lp.upper.push_back(v.upper);
  }
  return lp;
}

namespace {

constexpr double kNoiseCost = 1e-7;
constexpr std::size_t kRefactorEvery = 50;
constexpr double kRelativePivot = 1e-6;
constexpr double kSkipSlack = 1e-9;

// x_orig = offset + sign * x'[pos] - x'[neg]; neg < 0 unless the variable is free.
struct ColumnMap {
  int pos = -1;
  int neg = -1;
  double offset = 0.0;
  double sign = 1.0;
};

struct StdRow {
  std::vector<double> a;
  RowSense sense;
  double b;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double& cost(std::size_t j) { return at(m_, j); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
  }

  void erase_row(std::size_t r) {
    auto first = t_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1));
    t_.erase(first, first + static_cast<std::ptrdiff_t>(cols_ + 1));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t cols_;
  std::vector<double> t_;
};

enum class PhaseOutcome { Optimal, Unbounded };

// Solves A x = b for square A by Gaussian elimination with partial pivoting.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[best][k])) best = i;
    if (std::abs(a[best][k]) < 1e-12) return false;
    std::swap(a[k], a[best]);
    std::swap(b[k], b[best]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return true;
}

class SimplexRun {
 public:
  SimplexRun(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {}

  LpResult run();

 private:
  bool build();
  PhaseOutcome iterate(std::size_t active_cols);
  void set_costs(const std::vector<double>& costs);
  bool refactor();

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::vector<ColumnMap> map_;
  std::size_t structural_ = 0;
  std::size_t first_art_ = 0;
  std::vector<StdRow> rows_;
  std::vector<std::vector<double>> a0_;  // standard-form rows (slacks, artificials), b made non-negative
  std::vector<double> b0_;
  std::vector<std::size_t> row_origin_;  // tableau row -> a0_ row
  std::vector<std::size_t> art_row_;     // artificial column - first_art_ -> a0_ row
  std::vector<std::size_t> basis_;
  Tableau tab_{0, 0};
  std::size_t pivots_ = 0;
  std::size_t since_refactor_ = 0;
  std::vector<double> costs_;
  double cost_scale_ = 1.0;
  std::size_t max_pivots_ = 0;
};

bool SimplexRun::build() {
  const std::size_t n = lp_.num_vars();
  map_.resize(n);
  std::vector<std::pair<std::size_t, double>> bound_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp_.lower[j];
    const double hi = lp_.upper[j];
    if (lo > hi + opt_.feas_tol) return false;
    auto& m = map_[j];
    if (std::isfinite(lo)) {
      m = {static_cast<int>(structural_++), -1, lo, 1.0};
      if (std::isfinite(hi)) bound_rows.emplace_back(static_cast<std::size_t>(m.pos), std::max(0.0, hi - lo));
    } else if (std::isfinite(hi)) {
      m = {static_cast<int>(structural_++), -1, hi, -1.0};
    } else {
      m = {static_cast<int>(structural_), static_cast<int>(structural_ + 1), 0.0, 1.0};
      structural_ += 2;
    }
  }

  for (std::size_t i = 0; i < lp_.num_rows(); ++i) {
    StdRow row{std::vector<double>(structural_, 0.0), lp_.senses[i], lp_.rhs[i]};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = lp_.rows[i][j];
      if (a == 0.0) continue;
      const auto& m = map_[j];
      row.b -= a * m.offset;
      row.a[static_cast<std::size_t>(m.pos)] += a * m.sign;
      if (m.neg >= 0) row.a[static_cast<std::size_t>(m.neg)] -= a;
    }
    rows_.push_back(std::move(row));
  }
  for (auto [col, ub] : bound_rows) {
    StdRow row{std::vector<double>(structural_, 0.0), RowSense::Le, ub};
    row.a[col] = 1.0;
    rows_.push_back(std::move(row));
  }

  const std::size_t m = rows_.size();
  std::size_t slacks = 0;
  for (auto& r : rows_) {
    if (r.b < 0.0) {
      for (double& v : r.a) v = -v;
      r.b = -r.b;
      if (r.sense == RowSense::Le)
        r.sense = RowSense::Ge;
      else if (r.sense == RowSense::Ge)
        r.sense = RowSense::Le;
    }
    if (r.sense != RowSense::Eq) ++slacks;
  }
  std::size_t artificials = 0;
  for (const auto& r : rows_)
    if (r.sense != RowSense::Le) ++artificials;

  first_art_ = structural_ + slacks;
  const std::size_t cols = first_art_ + artificials;
  tab_ = Tableau(m, cols);
  a0_.assign(m, std::vector<double>(cols, 0.0));
  b0_.assign(m, 0.0);
  basis_.assign(m, 0);
  row_origin_.resize(m);
  std::iota(row_origin_.begin(), row_origin_.end(), 0);

  std::size_t slack = structural_;
  std::size_t art = first_art_;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = rows_[i];
    for (std::size_t j = 0; j < structural_; ++j) a0_[i][j] = tab_.at(i, j) = r.a[j];
    b0_[i] = tab_.rhs(i) = r.b;
    if (r.sense == RowSense::Le) {
      a0_[i][slack] = tab_.at(i, slack) = 1.0;
      basis_[i] = slack++;
    } else {
      if (r.sense == RowSense::Ge) a0_[i][slack] = tab_.at(i, slack) = -1.0, ++slack;
      a0_[i][art] = tab_.at(i, art) = 1.0;
      art_row_.push_back(i);
      basis_[i] = art++;
    }
  }
  max_pivots_ = opt_.max_pivots ? opt_.max_pivots : 10 * (n + lp_.num_rows()) * 100;
  max_pivots_ = std::max<std::size_t>(max_pivots_, 1000);
  return true;
}

void SimplexRun::set_costs(const std::vector<double>& costs) {
  costs_ = costs;
  for (std::size_t j = 0; j <= tab_.cols(); ++j) tab_.cost(j) = j < costs.size() ? costs[j] : 0.0;
  for (std::size_t i = 0; i < tab_.rows(); ++i) {
    const double cb = basis_[i] < costs.size() ? costs[basis_[i]] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= tab_.cols(); ++j) tab_.cost(j) -= cb * tab_.at(i, j);
  }
  for (std::size_t b : basis_) tab_.cost(b) = 0.0;
  cost_scale_ = 1.0;
  for (double c : costs) cost_scale_ = std::max(cost_scale_, std::abs(c));
}

// Rebuilds the tableau from the original rows for the current basis.
bool SimplexRun::refactor() {
  since_refactor_ = 0;
  const std::size_t m = tab_.rows();
  const std::size_t w = tab_.cols() + 1;
  if (m == 0) return false;
  // Augmented system [B | A b] with B the basic columns.
  std::vector<std::vector<double>> aug(m, std::vector<double>(m + w));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = row_origin_[i];
    for (std::size_t k = 0; k < m; ++k) aug[i][k] = a0_[r][basis_[k]];
    for (std::size_t j = 0; j + 1 < w; ++j) aug[i][m + j] = a0_[r][j];
    aug[i][m + w - 1] = b0_[r];
  }
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < m; ++i)
      if (std::abs(aug[i][k]) > std::abs(aug[best][k])) best = i;
    if (std::abs(aug[best][k]) < 1e-12) return false;
    std::swap(aug[k], aug[best]);
    const double inv = 1.0 / aug[k][k];
    for (double& v : aug[k]) v *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      const double f = aug[i][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < m + w; ++j) aug[i][j] -= f * aug[k][j];
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < w; ++j) tab_.at(k, j) = aug[k][m + j];
    tab_.at(k, basis_[k]) = 1.0;
  }
  set_costs(std::vector<double>(costs_));
  return true;
}

PhaseOutcome SimplexRun::iterate(std::size_t active_cols) {
  for (;;) {
    if (since_refactor_ >= kRefactorEvery) refactor();
    std::size_t enter = active_cols;
    for (std::size_t j = 0; j < active_cols; ++j) {
      if (tab_.cost(j) < -opt_.cost_tol * cost_scale_) {
        enter = j;
        break;
      }
    }
    if (enter == active_cols) {
      if (since_refactor_ > 0 && refactor()) continue;
      return PhaseOutcome::Optimal;
    }

    // Entries tiny relative to the column make the basis ill-conditioned.
    double col_max = 0.0;
    for (std::size_t i = 0; i < tab_.rows(); ++i) col_max = std::max(col_max, tab_.at(i, enter));
    const double pivot_min = std::max(opt_.pivot_tol, kRelativePivot * col_max);
    // Bland's ratio test over rows whose pivot entry exceeds `floor`.
    auto ratio_test = [&](double floor) {
      std::size_t leave = tab_.rows();
      double best = kInf;
      for (std::size_t i = 0; i < tab_.rows(); ++i) {
        const double a = tab_.at(i, enter);
        if (a <= floor) continue;
        const double ratio = std::max(0.0, tab_.rhs(i)) / a;
        const double eps = 1e-12 * (1.0 + (leave == tab_.rows() ? 0.0 : best));
        if (leave == tab_.rows() || ratio < best - eps) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + eps && basis_[i] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      return std::pair{leave, best};
    };
    auto [leave, step] = ratio_test(pivot_min);
    // Skipped rows must stay feasible after the step; otherwise take the small pivot.
    for (std::size_t i = 0; i < tab_.rows(); ++i) {
      const double a = tab_.at(i, enter);
      if (a > opt_.pivot_tol && a <= pivot_min && std::max(0.0, tab_.rhs(i)) - a * step < -kSkipSlack) {
        leave = ratio_test(opt_.pivot_tol).first;
        break;
      }
    }
    if (leave == tab_.rows()) {
      // A barely negative reduced cost on a column without a usable pivot is
      // round-off from earlier pivots, not a direction of descent.
      if (since_refactor_ > 0 && refactor()) continue;
      if (tab_.cost(enter) > -kNoiseCost * cost_scale_) {
        tab_.cost(enter) = 0.0;
        continue;
      }
      return PhaseOutcome::Unbounded;
    }

    if (++pivots_ > max_pivots_)
      throw Error(ErrorCode::NumericalError,
                  "simplex: pivot limit " + std::to_string(max_pivots_) + " reached");
    tab_.pivot(leave, enter);
    basis_[leave] = enter;
    ++since_refactor_;
  }
}

LpResult SimplexRun::run() {
  LpResult result;
  const std::size_t n = lp_.num_vars();
  if (!build()) return result;

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1(tab_.cols(), 0.0);
  for (std::size_t j = first_art_; j < tab_.cols(); ++j) phase1[j] = 1.0;
  set_costs(phase1);
  iterate(tab_.cols());

  // A basic artificial measures the violation of its own row.
  bool infeasible = false;
  double scale = 1.0;
  for (std::size_t i = 0; i < tab_.rows(); ++i) {
    scale = std::max(scale, std::abs(b0_[row_origin_[i]]));
    if (basis_[i] < first_art_) continue;
    const double b = b0_[art_row_[basis_[i] - first_art_]];
    if (tab_.rhs(i) > opt_.feas_tol * std::max(1.0, std::abs(b))) infeasible = true;
  }
  if (infeasible) {
    result.pivots = pivots_;
    return result;
  }

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab_.rows();) {
    if (basis_[i] < first_art_) {
      ++i;
      continue;
    }
    std::size_t col = first_art_;
    double best = 1e-9;
    for (std::size_t j = 0; j < first_art_; ++j) {
      if (std::abs(tab_.at(i, j)) > best) {
        best = std::abs(tab_.at(i, j));
        col = j;
      }
    }
    if (col < first_art_) {
      tab_.pivot(i, col);
      basis_[i] = col;
      ++i;
    } else {
      tab_.erase_row(i);
      basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      row_origin_.erase(row_origin_.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  // Phase 2.
  std::vector<double> costs(first_art_, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& m = map_[j];
    const double c = lp_.objective[j];
    costs[static_cast<std::size_t>(m.pos)] += c * m.sign;
    if (m.neg >= 0) costs[static_cast<std::size_t>(m.neg)] -= c;
  }
  set_costs(costs);
  const auto outcome = iterate(first_art_);
  result.pivots = pivots_;
  if (outcome == PhaseOutcome::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  std::vector<double> xs(first_art_, 0.0);
  for (std::size_t i = 0; i < tab_.rows(); ++i) xs[basis_[i]] = std::max(0.0, tab_.rhs(i));

  // Recompute basic values from the original rows to shed accumulated pivot error.
  const std::size_t mb = tab_.rows();
  if (mb > 0) {
    std::vector<std::vector<double>> bmat(mb, std::vector<double>(mb));
    std::vector<double> bvec(mb);
    for (std::size_t i = 0; i < mb; ++i) {
      const std::size_t r = row_origin_[i];
      for (std::size_t k = 0; k < mb; ++k) bmat[i][k] = a0_[r][basis_[k]];
      bvec[i] = b0_[r];
    }
    std::vector<double> xb;
    if (solve_square(std::move(bmat), std::move(bvec), xb)) {
      bool ok = true;
      for (std::size_t k = 0; k < mb; ++k)
        if (xb[k] < -opt_.feas_tol * scale || std::abs(xb[k] - xs[basis_[k]]) > 1e-6 * (1.0 + std::abs(xb[k])))
          ok = false;
      if (ok)
        for (std::size_t k = 0; k < mb; ++k) xs[basis_[k]] = std::max(0.0, xb[k]);
    }
  }

  result.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& m = map_[j];
    double v = m.offset + m.sign * xs[static_cast<std::size_t>(m.pos)];
    if (m.neg >= 0) v -= xs[static_cast<std::size_t>(m.neg)];
    v = std::clamp(v, lp_.lower[j], lp_.upper[j]);
    result.x[j] = v;
  }
  result.value = std::inner_product(lp_.objective.begin(), lp_.objective.end(), result.x.begin(), 0.0);
  result.status = LpStatus::Optimal;
  return result;
}

}  // namespace

LpResult simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
  const std::size_t n = lp.num_vars();
  if (lp.lower.size() != n || lp.upper.size() != n || lp.senses.size() != lp.rows.size() ||
      lp.rhs.size() != lp.rows.size())
    throw Error(ErrorCode::InvalidArgument, "simplex: inconsistent LP dimensions");
  for (const auto& r : lp.rows)
    if (r.size() != n) throw Error(ErrorCode::InvalidArgument, "simplex: row length mismatch");
  SimplexRun run(lp, options);
  return run.run();
}

}  // namespace moep
