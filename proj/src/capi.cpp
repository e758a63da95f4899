#include "moep/moep.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <sstream>

#include "bench.hpp"
#include "error.hpp"
#include "parser.hpp"
#include "pipeline.hpp"
#include "solution_io.hpp"

using moep::ErrorCode;

struct moep_problem {
  moep::Problem owned;
  // Borrowed view handed to plugin oracles; points at `owned` otherwise.
  const moep::Problem* view = nullptr;
  std::string source = "<memory>";

  const moep::Problem& get() const { return view ? *view : owned; }
};

struct moep_result {
  moep::Problem problem;
  moep::RunReport report;
  moep::OracleCounters counters;
  moep::Termination termination = moep::Termination::Complete;
  std::optional<moep::DualPolyhedron> dual;
};

namespace {

thread_local std::string g_last_error;

moep_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return MOEP_ERR_PARSE;
    case ErrorCode::Infeasible: return MOEP_ERR_INFEASIBLE;
    case ErrorCode::NoIdealPoint: return MOEP_ERR_NO_IDEAL_POINT;
    case ErrorCode::IterationLimit:
    case ErrorCode::NodeLimitExceeded: return MOEP_ERR_LIMIT;
    case ErrorCode::InvalidArgument: return MOEP_ERR_INVALID_ARGUMENT;
    case ErrorCode::UnsupportedProblem: return MOEP_ERR_UNSUPPORTED;
    case ErrorCode::NumericalError:
    case ErrorCode::NumericalDegeneracy:
    case ErrorCode::CutIsRedundant: return MOEP_ERR_NUMERICAL;
    case ErrorCode::Io: return MOEP_ERR_IO;
    case ErrorCode::CapsExceeded: return MOEP_ERR_CAPS_EXCEEDED;
  }
  return MOEP_ERR_INTERNAL;
}

template <class F>
moep_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const moep::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MOEP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MOEP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MOEP_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw moep::Error(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

moep::FileFormat to_format(moep_format f) {
  switch (f) {
    case MOEP_FORMAT_LP: return moep::FileFormat::Lp;
    case MOEP_FORMAT_MPS: return moep::FileFormat::Mps;
    case MOEP_FORMAT_AUTO: return moep::FileFormat::Auto;
  }
  throw moep::Error(ErrorCode::InvalidArgument, "unknown file format");
}

class PluginOracle final : public moep::WeightedSumOracle {
 public:
  explicit PluginOracle(const moep_oracle& o) : o_(o) {}

  bool supports(const moep::Problem& p) const override { return o_.handles_quadratic || p.is_linear(); }

 protected:
  moep::OracleResult minimize(const moep::Problem& p, const moep::WeightVector& w, bool lexicographic) override {
    moep_problem view;
    view.view = &p;
    const std::size_t d = w.size();
    std::vector<double> y(d, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> x(p.num_variables(), std::numeric_limits<double>::quiet_NaN());
    const int rc = o_.solve(o_.user, &view, w.values().data(), d, lexicographic ? 1 : 0, y.data(), x.data());
    moep::OracleResult r;
    if (rc == MOEP_ERR_INFEASIBLE) {
      r.status = moep::OracleStatus::Infeasible;
      return r;
    }
    if (rc == MOEP_ERR_NO_IDEAL_POINT) {
      r.status = moep::OracleStatus::Unbounded;
      return r;
    }
    if (rc != MOEP_OK)
      throw moep::Error(ErrorCode::NumericalError, "plugin oracle failed with status " + std::to_string(rc));
    for (double v : y)
      if (!std::isfinite(v)) throw moep::Error(ErrorCode::NumericalError, "plugin oracle returned a non-finite y");
    r.status = moep::OracleStatus::Optimal;
    r.value = w.dot(y);
    r.point = moep::OutcomePoint{std::move(y), std::move(x),
                                 std::vector<double>(w.values().begin(), w.values().end())};
    return r;
  }

 private:
  moep_oracle o_;
};

}  // namespace

extern "C" {

const char* moep_version(void) { return MOEP_VERSION_STRING; }

const char* moep_status_string(moep_status status) {
  switch (status) {
    case MOEP_OK: return "ok";
    case MOEP_ERR_PARSE: return "parse error";
    case MOEP_ERR_INFEASIBLE: return "infeasible";
    case MOEP_ERR_NO_IDEAL_POINT: return "no ideal point";
    case MOEP_ERR_LIMIT: return "limit reached";
    case MOEP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MOEP_ERR_UNSUPPORTED: return "unsupported problem";
    case MOEP_ERR_NUMERICAL: return "numerical error";
    case MOEP_ERR_IO: return "i/o error";
    case MOEP_ERR_CAPS_EXCEEDED: return "caps exceeded";
    case MOEP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* moep_last_error(void) { return g_last_error.c_str(); }

void moep_string_free(char* s) { std::free(s); }

moep_status moep_problem_read_file(const char* path, moep_format format, moep_problem** out) {
  return guarded([&] {
    require(path && out, "moep_problem_read_file: null argument");
    auto p = std::make_unique<moep_problem>();
    p->owned = moep::read_problem_file(path, to_format(format));
    p->source = path;
    *out = p.release();
    return MOEP_OK;
  });
}

moep_status moep_problem_parse(const char* text, moep_format format, const char* filename, moep_problem** out) {
  return guarded([&] {
    require(text && out, "moep_problem_parse: null argument");
    const std::string name = filename ? filename : "<input>";
    auto p = std::make_unique<moep_problem>();
    p->owned = format == MOEP_FORMAT_MPS ? moep::parse_mps(text, name) : moep::parse_lp(text, name);
    p->source = name;
    *out = p.release();
    return MOEP_OK;
  });
}

moep_status moep_problem_write(const moep_problem* p, moep_format format, char** text) {
  return guarded([&] {
    require(p && text, "moep_problem_write: null argument");
    *text = dup_string(moep::serialize_problem(p->get(), to_format(format)));
    return MOEP_OK;
  });
}

moep_status moep_problem_write_file(const moep_problem* p, moep_format format, const char* path) {
  return guarded([&] {
    require(p && path, "moep_problem_write_file: null argument");
    moep::FileFormat f = to_format(format);
    if (f == moep::FileFormat::Auto) {
      const std::string ext = std::filesystem::path(path).extension().string();
      f = (ext == ".mps" || ext == ".mop" || ext == ".fmps") ? moep::FileFormat::Mps : moep::FileFormat::Lp;
    }
    moep::write_text_file(path, moep::serialize_problem(p->get(), f));
    return MOEP_OK;
  });
}

void moep_problem_free(moep_problem* p) { delete p; }

size_t moep_problem_num_objectives(const moep_problem* p) { return p ? p->get().num_objectives() : 0; }
size_t moep_problem_num_variables(const moep_problem* p) { return p ? p->get().num_variables() : 0; }
size_t moep_problem_num_constraints(const moep_problem* p) { return p ? p->get().num_constraints() : 0; }

const char* moep_problem_objective_name(const moep_problem* p, size_t i) {
  return p && i < p->get().num_objectives() ? p->get().objectives[i].name.c_str() : nullptr;
}

const char* moep_problem_variable_name(const moep_problem* p, size_t k) {
  return p && k < p->get().num_variables() ? p->get().variables[k].name.c_str() : nullptr;
}

const double* moep_problem_objective_coeffs(const moep_problem* p, size_t i) {
  return p && i < p->get().num_objectives() ? p->get().objectives[i].coeffs.data() : nullptr;
}

int moep_problem_objective_is_max(const moep_problem* p, size_t i) {
  return p && i < p->get().num_objectives() && p->get().objectives[i].sense == moep::ObjSense::Max;
}

const double* moep_problem_constraint_coeffs(const moep_problem* p, size_t j) {
  return p && j < p->get().num_constraints() ? p->get().constraints[j].coeffs.data() : nullptr;
}

moep_row_sense moep_problem_constraint_sense(const moep_problem* p, size_t j) {
  if (!p || j >= p->get().num_constraints()) return MOEP_LE;
  switch (p->get().constraints[j].sense) {
    case moep::RowSense::Le: return MOEP_LE;
    case moep::RowSense::Eq: return MOEP_EQ;
    case moep::RowSense::Ge: return MOEP_GE;
  }
  return MOEP_LE;
}

double moep_problem_constraint_rhs(const moep_problem* p, size_t j) {
  return p && j < p->get().num_constraints() ? p->get().constraints[j].rhs : 0.0;
}

void moep_problem_bounds(const moep_problem* p, size_t k, double* lower, double* upper, int* integer) {
  if (!p || k >= p->get().num_variables()) return;
  const auto& v = p->get().variables[k];
  if (lower) *lower = v.lower;
  if (upper) *upper = v.upper;
  if (integer) *integer = v.integer ? 1 : 0;
}

int moep_problem_is_linear(const moep_problem* p) { return p && p->get().is_linear(); }

int moep_problem_equal(const moep_problem* a, const moep_problem* b) { return a && b && a->get() == b->get(); }

moep_status moep_problem_validate(const moep_problem* p, char** diagnostics) {
  return guarded([&] {
    require(p && diagnostics, "moep_problem_validate: null argument");
    std::string text;
    for (const auto& d : moep::validate(p->get())) text += d + "\n";
    *diagnostics = dup_string(text);
    return MOEP_OK;
  });
}

moep_status moep_problem_evaluate(const moep_problem* p, const double* x, double* y, double* violation) {
  return guarded([&] {
    require(p && x, "moep_problem_evaluate: null argument");
    const std::span<const double> xs(x, p->get().num_variables());
    if (y) {
      const auto values = moep::evaluate(p->get(), xs);
      std::copy(values.begin(), values.end(), y);
    }
    if (violation) *violation = moep::max_violation(p->get(), xs);
    return MOEP_OK;
  });
}

void moep_options_init(moep_options* options) {
  if (!options) return;
  const moep::SolverConfig cfg;
  options->epsilon = cfg.epsilon;
  options->tol_confirm = cfg.tol_confirm;
  options->tol_geom = cfg.tol_geom;
  options->tol_int = moep::kTolInt;
  options->max_iterations = cfg.max_iterations;
  options->node_limit = moep::BranchAndBoundOptions{}.node_limit;
  options->normalize = cfg.normalize ? 1 : 0;
  options->parallel_shots = cfg.parallel_shots;
}

moep_status moep_solve(const moep_problem* p, const moep_options* options, const moep_oracle* oracle,
                       moep_log_fn log, void* log_user, moep_result** out) {
  return guarded([&] {
    require(p && out, "moep_solve: null argument");
    require(!oracle || oracle->solve, "moep_solve: oracle without solve callback");
    *out = nullptr;
    moep_options opts;
    moep_options_init(&opts);
    if (options) opts = *options;

    moep::SolverConfig cfg;
    cfg.epsilon = opts.epsilon;
    cfg.tol_confirm = opts.tol_confirm;
    cfg.tol_geom = opts.tol_geom;
    cfg.max_iterations = opts.max_iterations;
    cfg.normalize = opts.normalize != 0;
    cfg.parallel_shots = opts.parallel_shots;

    std::unique_ptr<moep::WeightedSumOracle> impl;
    if (oracle)
      impl = std::make_unique<PluginOracle>(*oracle);
    else
      impl = std::make_unique<moep::BuiltinOracle>(moep::BranchAndBoundOptions{opts.node_limit, opts.tol_int});

    moep::PhaseLogger logger;
    if (log)
      logger = [&](std::string_view phase, std::string_view msg) {
        log(log_user, std::string(phase).c_str(), std::string(msg).c_str());
      };
    const moep::Problem& problem = p->get();
    if (logger) {
      logger("parse", p->source + ": " + std::to_string(problem.num_objectives()) + " objective(s), " +
                          std::to_string(problem.num_variables()) + " variable(s) (" +
                          std::to_string(problem.num_integer()) + " integer), " +
                          std::to_string(problem.num_constraints()) + " constraint(s)");
    }

    const auto start = std::chrono::steady_clock::now();
    moep::PipelineResult run;
    try {
      run = moep::run_pipeline(problem, cfg, *impl, logger);
    } catch (const moep::Error& e) {
      if (logger) logger("error", e.what());
      throw;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    auto r = std::make_unique<moep_result>();
    r->problem = problem;
    r->termination = run.extreme_points.termination;
    r->report.input = p->source;
    r->report.status = moep::termination_name(run.extreme_points.termination);
    r->report.exact = run.extreme_points.exact;
    r->report.epsilon = cfg.epsilon;
    r->report.normalized = cfg.normalize;
    r->report.oracle = oracle ? (oracle->name ? oracle->name : "plugin") : "builtin";
    r->report.ideal_point = run.ideal_point;
    r->report.points = run.extreme_points.points;
    r->report.stats = run.extreme_points.stats;
    r->report.stats.oracle_calls = run.oracle_calls;
    r->report.seconds = seconds;
    const auto& st = impl->stats();
    r->counters = {r->report.oracle, st.calls.load(), st.lp_solves.load(), st.pivots.load(), st.nodes.load()};
    r->dual = std::move(run.extreme_points.dual);
    const bool complete = r->termination == moep::Termination::Complete;
    if (!complete) g_last_error = "solve stopped early: " + r->report.status;
    *out = r.release();
    return complete ? MOEP_OK : MOEP_ERR_LIMIT;
  });
}

size_t moep_result_num_points(const moep_result* r) { return r ? r->report.points.size() : 0; }
size_t moep_result_num_objectives(const moep_result* r) { return r ? r->problem.num_objectives() : 0; }
size_t moep_result_num_variables(const moep_result* r) { return r ? r->problem.num_variables() : 0; }

const double* moep_result_point(const moep_result* r, size_t k) {
  return r && k < r->report.points.size() ? r->report.points[k].y.data() : nullptr;
}

const double* moep_result_weight(const moep_result* r, size_t k) {
  if (!r || k >= r->report.points.size() || !r->report.points[k].certifying_weight) return nullptr;
  return r->report.points[k].certifying_weight->data();
}

const double* moep_result_solution(const moep_result* r, size_t k) {
  return r && k < r->report.points.size() ? r->report.points[k].x.data() : nullptr;
}

int moep_result_exact(const moep_result* r) { return r && r->report.exact; }

moep_termination moep_result_termination(const moep_result* r) {
  if (!r) return MOEP_TERM_COMPLETE;
  switch (r->termination) {
    case moep::Termination::Complete: return MOEP_TERM_COMPLETE;
    case moep::Termination::IterationLimit: return MOEP_TERM_ITERATION_LIMIT;
    case moep::Termination::NodeLimit: return MOEP_TERM_NODE_LIMIT;
  }
  return MOEP_TERM_COMPLETE;
}

void moep_result_stats(const moep_result* r, moep_stats* stats) {
  if (!r || !stats) return;
  const auto& s = r->report.stats;
  *stats = moep_stats{s.oracle_calls,         s.iterations,          s.cuts,          s.confirms,
                      s.suppressed,           s.degeneracy_events,   s.final_vertices, s.final_facets,
                      r->counters.lp_solves,  r->counters.pivots,    r->counters.nodes, r->report.seconds};
}

moep_status moep_result_solution_json(const moep_result* r, char** json) {
  return guarded([&] {
    require(r && json, "moep_result_solution_json: null argument");
    *json = dup_string(moep::solution_json(r->problem, r->report));
    return MOEP_OK;
  });
}

moep_status moep_result_write_solution(const moep_result* r, const char* path) {
  return guarded([&] {
    require(r && path, "moep_result_write_solution: null argument");
    moep::write_text_file(path, moep::solution_json(r->problem, r->report));
    return MOEP_OK;
  });
}

moep_status moep_result_write_oracle_report(const moep_result* r, const char* path) {
  return guarded([&] {
    require(r && path, "moep_result_write_oracle_report: null argument");
    moep::write_text_file(path, moep::oracle_report(r->counters));
    return MOEP_OK;
  });
}

moep_status moep_result_dual_dump(const moep_result* r, char** text) {
  return guarded([&] {
    require(r && text, "moep_result_dual_dump: null argument");
    *text = dup_string(r->dual ? r->dual->dump() : std::string());
    return MOEP_OK;
  });
}

void moep_result_free(moep_result* r) { delete r; }

void moep_gen_spec_init(moep_gen_spec* spec) {
  if (!spec) return;
  const moep::GenSpec g;
  *spec = moep_gen_spec{MOEP_MOILP_GENERAL, g.d,         g.n,         g.m,
                        g.obj_lo,           g.obj_hi,    g.con_lo,    g.con_hi,
                        g.rhs_fraction,     g.integer_ratio, g.upper, g.seed};
}

moep_status moep_generate(const moep_gen_spec* spec, moep_problem** out) {
  return guarded([&] {
    require(spec && out, "moep_generate: null argument");
    moep::GenSpec g;
    g.family = spec->family == MOEP_MOMILP_MIXED ? moep::Family::MomilpMixed : moep::Family::MoilpGeneral;
    g.d = spec->d;
    g.n = spec->n;
    g.m = spec->m;
    g.obj_lo = spec->obj_lo;
    g.obj_hi = spec->obj_hi;
    g.con_lo = spec->con_lo;
    g.con_hi = spec->con_hi;
    g.rhs_fraction = spec->rhs_fraction;
    g.integer_ratio = spec->integer_ratio;
    g.upper = spec->upper;
    g.seed = spec->seed;
    auto p = std::make_unique<moep_problem>();
    p->owned = moep::generate(g);
    p->source = moep::family_name(g.family) + "-seed" + std::to_string(g.seed);
    *out = p.release();
    return MOEP_OK;
  });
}

moep_status moep_brute_force(const moep_problem* p, size_t max_assignments, moep_result** out) {
  return guarded([&] {
    require(p && out, "moep_brute_force: null argument");
    moep::BruteForceCaps caps;
    if (max_assignments) caps.max_assignments = max_assignments;
    const moep::MinimizationForm minform = moep::to_minimization(p->get());
    moep::BruteForceResult bf = moep::brute_force_extreme_points(minform.problem, caps);
    if (bf.infeasible) throw moep::Error(ErrorCode::Infeasible, "problem is infeasible");
    auto r = std::make_unique<moep_result>();
    r->problem = p->get();
    r->report.input = p->source;
    r->report.status = "complete";
    r->report.oracle = "brute_force";
    for (auto& pt : bf.extreme_points) {
      pt.y = minform.signs.restore(pt.y);
      r->report.points.push_back(std::move(pt));
    }
    r->counters.oracle = "brute_force";
    *out = r.release();
    return MOEP_OK;
  });
}

moep_status moep_compare_results(const moep_result* expected, const moep_result* actual, double tol, int* equal,
                                 char** report) {
  return guarded([&] {
    require(expected && actual && equal, "moep_compare_results: null argument");
    const auto cmp = moep::compare_point_sets(expected->report.points, actual->report.points, tol);
    *equal = cmp.equal ? 1 : 0;
    if (report) {
      std::ostringstream os;
      os.precision(10);
      for (const auto& y : cmp.missing) {
        os << "missing";
        for (double v : y) os << ' ' << v;
        os << '\n';
      }
      for (const auto& y : cmp.extra) {
        os << "extra";
        for (double v : y) os << ' ' << v;
        os << '\n';
      }
      *report = dup_string(os.str());
    }
    return MOEP_OK;
  });
}

}  // extern "C"
