#include "dual_benson.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <string>

#include "error.hpp"

namespace moep {

WeightVector lambda(std::span<const double> wbar) {
  std::vector<double> w(wbar.begin(), wbar.end());
  double sum = 0.0;
  for (double& v : w) {
    v = std::max(0.0, v);
    sum += v;
  }
  w.push_back(std::max(0.0, 1.0 - sum));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return WeightVector(std::move(w));
}

RayShot ray_shoot(std::span<const double> vertex, const Problem& p, WeightedSumOracle& oracle) {
  const WeightVector w = lambda(vertex.first(vertex.size() - 1));
  OracleResult r = oracle.solve_weighted_sum_lex(p, w);
  if (r.status == OracleStatus::Infeasible) throw Error(ErrorCode::Infeasible, "problem is infeasible");
  if (r.status == OracleStatus::Unbounded)
    throw Error(ErrorCode::NoIdealPoint, "weighted sum is unbounded below; the problem has no ideal point");
  RayShot shot;
  shot.point = std::move(*r.point);
  shot.ray_length = vertex.back() - w.dot(shot.point.y);
  return shot;
}

std::vector<OutcomePoint> dual_to_primal_report(const DualPolyhedron& poly,
                                                std::span<const OutcomePoint> witnesses) {
  std::vector<OutcomePoint> out;
  const std::size_t d = poly.dimension();
  for (std::size_t k : poly.facets()) {
    const auto& hs = poly.halfspaces()[k];
    OutcomePoint pt = witnesses[hs.tag];
    std::vector<double> weight(d, 0.0);
    const auto tight = poly.tight_vertices(k);
    for (std::size_t id : tight) {
      const auto& c = poly.vertex(id).coords;
      const WeightVector w = lambda(std::span<const double>(c).first(d - 1));
      for (std::size_t i = 0; i < d; ++i) weight[i] += w[i] / static_cast<double>(tight.size());
    }
    pt.certifying_weight = std::move(weight);

    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const OutcomePoint& q) {
      for (std::size_t i = 0; i < d; ++i)
        if (std::abs(q.y[i] - pt.y[i]) > 1e-6) return false;
      return true;
    });
    if (!duplicate) out.push_back(std::move(pt));
  }
  return out;
}

namespace {

class Driver {
 public:
  Driver(const Problem& p, const SolverConfig& cfg, WeightedSumOracle& oracle, const IterationObserver& observer)
      : p_(p), cfg_(cfg), oracle_(oracle), observer_(observer) {}

  ExtremePointSet run();

 private:
  void handle(std::optional<std::size_t> vertex_id, const std::vector<double>& coords, RayShot shot);
  void notify(const std::vector<double>& coords, double length, IterationEvent::Action action) {
    if (!observer_) return;
    IterationEvent ev;
    ev.iteration = result_.stats.iterations;
    ev.vertex = coords;
    ev.ray_length = length;
    ev.action = action;
    observer_(ev);
  }

  const Problem& p_;
  const SolverConfig& cfg_;
  WeightedSumOracle& oracle_;
  const IterationObserver& observer_;
  std::optional<DualPolyhedron> poly_;
  std::vector<OutcomePoint> witnesses_;
  ExtremePointSet result_;
};

void Driver::handle(std::optional<std::size_t> vertex_id, const std::vector<double>& coords, RayShot shot) {
  const double scale = std::max(1.0, std::abs(coords.back()));
  const double threshold = std::max(cfg_.tol_confirm, cfg_.epsilon * scale);
  const bool alive = vertex_id && poly_->vertices().count(*vertex_id);

  if (shot.ray_length <= threshold) {
    if (!alive) return;
    poly_->mark_visited(*vertex_id);
    if (shot.ray_length > cfg_.tol_confirm) {
      result_.exact = false;
      ++result_.stats.suppressed;
      notify(coords, shot.ray_length, IterationEvent::Action::Suppressed);
    } else {
      ++result_.stats.confirms;
      notify(coords, shot.ray_length, IterationEvent::Action::Confirmed);
    }
    return;
  }

  witnesses_.push_back(std::move(shot.point));
  try {
    poly_->cut(supporting_inequality(witnesses_.back().y, witnesses_.size() - 1));
    ++result_.stats.cuts;
    notify(coords, shot.ray_length, IterationEvent::Action::Cut);
  } catch (const Error& e) {
    witnesses_.pop_back();
    if (e.code() == ErrorCode::CutIsRedundant) {
      // A concurrent shot already added an equivalent or stronger cut.
      return;
    }
    if (e.code() != ErrorCode::NumericalDegeneracy) throw;
    ++result_.stats.degeneracy_events;
    result_.exact = false;
    if (alive) poly_->mark_visited(*vertex_id);
    notify(coords, shot.ray_length, IterationEvent::Action::Degenerate);
  }
}

ExtremePointSet Driver::run() {
  const std::size_t d = p_.num_objectives();
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "solve needs at least two objectives");
  if (!oracle_.supports(p_)) throw Error(ErrorCode::UnsupportedProblem, "oracle does not support this problem");
  if (cfg_.epsilon < 0.0 || !(cfg_.tol_confirm > 0.0))
    throw Error(ErrorCode::InvalidArgument, "solver config requires epsilon >= 0 and tol_confirm > 0");

  const std::size_t calls_before = oracle_.stats().calls.load();
  OracleResult first = oracle_.solve_weighted_sum_lex(p_, WeightVector::uniform(d));
  if (first.status == OracleStatus::Infeasible) throw Error(ErrorCode::Infeasible, "problem is infeasible");
  if (first.status == OracleStatus::Unbounded)
    throw Error(ErrorCode::NoIdealPoint, "weighted sum is unbounded below; the problem has no ideal point");
  witnesses_.push_back(std::move(*first.point));
  poly_ = DualPolyhedron::init(d, supporting_inequality(witnesses_.back().y, 0), cfg_.tol_geom);

  const std::size_t batch = std::max<std::size_t>(1, cfg_.parallel_shots);
  for (;;) {
    std::vector<std::size_t> picked;
    if (batch == 1) {
      if (auto id = poly_->unvisited()) picked.push_back(*id);
    } else {
      std::vector<const DualVertex*> open;
      for (const auto& [id, v] : poly_->vertices())
        if (!v.visited) open.push_back(&v);
      std::sort(open.begin(), open.end(), [](const DualVertex* a, const DualVertex* b) {
        if (a->a() != b->a()) return a->a() > b->a();
        return std::lexicographical_compare(a->coords.begin(), a->coords.end() - 1, b->coords.begin(),
                                            b->coords.end() - 1);
      });
      for (std::size_t i = 0; i < open.size() && i < batch; ++i) picked.push_back(open[i]->id);
    }
    if (picked.empty()) break;
    if (result_.stats.iterations + picked.size() > cfg_.max_iterations) {
      result_.termination = Termination::IterationLimit;
      result_.exact = false;
      break;
    }

    std::vector<std::vector<double>> coords;
    for (std::size_t id : picked) coords.push_back(poly_->vertex(id).coords);

    std::vector<RayShot> results;
    try {
      if (picked.size() == 1) {
        results.push_back(ray_shoot(coords[0], p_, oracle_));
      } else {
        std::vector<std::future<RayShot>> shots;
        for (const auto& c : coords)
          shots.push_back(std::async(std::launch::async, [&, c] { return ray_shoot(c, p_, oracle_); }));
        for (auto& f : shots) results.push_back(f.get());
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NodeLimitExceeded) throw;
      result_.termination = Termination::NodeLimit;
      result_.exact = false;
      break;
    }
    for (std::size_t i = 0; i < picked.size(); ++i) {
      ++result_.stats.iterations;
      handle(picked[i], coords[i], std::move(results[i]));
    }
  }

  result_.points = dual_to_primal_report(*poly_, witnesses_);
  for (std::size_t k : poly_->facets()) result_.dual_facets.push_back(poly_->halfspaces()[k]);
  result_.stats.oracle_calls = oracle_.stats().calls.load() - calls_before;
  result_.stats.degeneracy_events += poly_->degeneracy_events();
  result_.stats.final_vertices = poly_->vertices().size();
  result_.stats.final_facets = result_.dual_facets.size();
  result_.dual = std::move(poly_);
  return std::move(result_);
}

}  // namespace

ExtremePointSet solve(const Problem& p, const SolverConfig& cfg, WeightedSumOracle& oracle,
                      const IterationObserver& observer) {
  Driver driver(p, cfg, oracle, observer);
  return driver.run();
}

}  // namespace moep
