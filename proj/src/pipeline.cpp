#include "pipeline.hpp"

#include <sstream>

#include "error.hpp"

namespace moep {

namespace {

std::string join(std::span<const double> v) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

const char* action_name(IterationEvent::Action a) {
  switch (a) {
    case IterationEvent::Action::Confirmed: return "confirmed";
    case IterationEvent::Action::Cut: return "cut";
    case IterationEvent::Action::Suppressed: return "suppressed by epsilon";
    case IterationEvent::Action::Degenerate: return "numerical degeneracy";
  }
  return "?";
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Complete: return "complete";
    case Termination::IterationLimit: return "iteration_limit";
    case Termination::NodeLimit: return "node_limit";
  }
  return "?";
}

PipelineResult run_pipeline(const Problem& p, const SolverConfig& cfg, WeightedSumOracle& oracle,
                            const PhaseLogger& log) {
  auto emit = [&](std::string_view phase, const std::string& msg) {
    if (log) log(phase, msg);
  };

  const auto diagnostics = validate(p);
  if (!diagnostics.empty()) {
    std::string msg = "invalid problem:";
    for (const auto& d : diagnostics) msg += "\n  " + d;
    throw Error(ErrorCode::InvalidArgument, msg);
  }
  if (!oracle.supports(p)) throw Error(ErrorCode::UnsupportedProblem, "the selected oracle cannot solve this problem");

  const std::size_t calls_before = oracle.stats().calls.load();
  PipelineResult out;
  MinimizationForm minform = to_minimization(p);
  out.signs = minform.signs;
  if (!out.signs.flipped.empty()) emit("preprocess", std::to_string(out.signs.flipped.size()) + " max objective(s) negated");

  const IdealPoint ideal = compute_ideal_point(minform.problem, oracle);
  out.ideal_point = out.signs.restore(ideal.values);
  emit("preprocess", "ideal point " + join(out.ideal_point));

  Problem work = minform.problem;
  if (cfg.normalize) {
    Normalized n = normalize(minform.problem, ideal);
    work = std::move(n.problem);
    out.scaling = std::move(n.scaling);
    emit("preprocess", "objective multipliers " + join(out.scaling.multipliers));
  } else {
    out.scaling = Scaling::identity(p.num_objectives());
    out.scaling.ideal_point = ideal.values;
    out.scaling.offsets = ideal.values;
  }

  IterationObserver observer;
  if (log) {
    observer = [&](const IterationEvent& ev) {
      emit("iteration", std::to_string(ev.iteration) + " vertex " + join(ev.vertex) + " ray length " +
                            std::to_string(ev.ray_length) + " -> " + action_name(ev.action));
    };
  }
  ExtremePointSet eps = solve(work, cfg, oracle, observer);

  for (auto& pt : eps.points) {
    pt.y = out.signs.restore(out.scaling.unapply(pt.y));
    if (pt.certifying_weight) pt.certifying_weight = out.scaling.unapply_weight(*pt.certifying_weight);
  }
  out.oracle_calls = oracle.stats().calls.load() - calls_before;
  emit("termination", std::string(termination_name(eps.termination)) +
                          ", " + std::to_string(eps.points.size()) + " extreme point(s), " +
                          std::to_string(out.oracle_calls) + " oracle call(s), exact=" + (eps.exact ? "true" : "false"));
  out.extreme_points = std::move(eps);
  return out;
}

}  // namespace moep
