// Command-line front end. Talks to the solver only through the C API.
#include <dlfcn.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moep/moep.h"

namespace {

enum Exit { kOk = 0, kParse = 1, kInfeasible = 2, kNoIdeal = 3, kLimit = 4, kOther = 5, kCheckFailed = 6 };

int exit_code(moep_status s) {
  switch (s) {
    case MOEP_OK: return kOk;
    case MOEP_ERR_PARSE:
    case MOEP_ERR_IO: return kParse;
    case MOEP_ERR_INFEASIBLE: return kInfeasible;
    case MOEP_ERR_NO_IDEAL_POINT: return kNoIdeal;
    case MOEP_ERR_LIMIT: return kLimit;
    default: return kOther;
  }
}

moep_format format_of(const std::string& s) {
  if (s == "lp") return MOEP_FORMAT_LP;
  if (s == "mps") return MOEP_FORMAT_MPS;
  return MOEP_FORMAT_AUTO;
}

// Tolerance overrides, one environment variable per tolerance.
struct EnvTolerances {
  double confirm, geom, integrality, feas = 1e-6, eq = 1e-6;
};

bool read_env(const char* name, double& value) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return true;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (*end != '\0' || !(v > 0.0)) {
    std::cerr << "moep: " << name << " must be a positive number, got '" << raw << "'\n";
    return false;
  }
  value = v;
  return true;
}

std::optional<EnvTolerances> env_tolerances(const moep_options& defaults) {
  EnvTolerances t{defaults.tol_confirm, defaults.tol_geom, defaults.tol_int};
  if (!read_env("MOEP_TOL_CONFIRM", t.confirm) || !read_env("MOEP_TOL_GEOM", t.geom) ||
      !read_env("MOEP_TOL_INT", t.integrality) || !read_env("MOEP_TOL_FEAS", t.feas) ||
      !read_env("MOEP_TOL_EQ", t.eq))
    return std::nullopt;
  return t;
}

class LogFile {
 public:
  LogFile(const std::string& path, bool echo) : out_(path, std::ios::trunc), echo_(echo) {}

  void line(const char* phase, const char* message) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t secs = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", &tm);
    char full[48];
    std::snprintf(full, sizeof full, "%s.%03dZ", stamp, static_cast<int>(ms));
    out_ << full << " [" << phase << "] " << message << '\n';
    out_.flush();
    if (echo_) std::cerr << "[" << phase << "] " << message << '\n';
  }

  static void callback(void* self, const char* phase, const char* message) {
    static_cast<LogFile*>(self)->line(phase, message);
  }

 private:
  std::ofstream out_;
  bool echo_;
};

struct Plugin {
  void* handle = nullptr;
  moep_oracle oracle{};
  ~Plugin() {
    if (handle) dlclose(handle);
  }
};

bool load_plugin(const std::string& path, Plugin& plugin) {
  plugin.handle = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!plugin.handle) {
    std::cerr << "moep: cannot load oracle plugin: " << dlerror() << '\n';
    return false;
  }
  auto init = reinterpret_cast<moep_plugin_init_fn>(dlsym(plugin.handle, MOEP_PLUGIN_INIT_SYMBOL));
  if (!init) {
    std::cerr << "moep: " << path << " does not export " << MOEP_PLUGIN_INIT_SYMBOL << '\n';
    return false;
  }
  if (init(&plugin.oracle) != 0 || !plugin.oracle.solve) {
    std::cerr << "moep: plugin initialization failed\n";
    return false;
  }
  return true;
}

struct SolveArgs {
  std::string input;
  std::string prefix;
  std::string format = "auto";
  double epsilon = 0.0;
  bool no_normalize = false;
  std::string oracle = "builtin";
  std::size_t max_iter = 0;
  std::size_t node_limit = 0;
  std::size_t threads = 1;
  bool verbose = false;
  bool dump_dual = false;
};

int run_solve(const SolveArgs& a) {
  moep_options opts;
  moep_options_init(&opts);
  const auto tol = env_tolerances(opts);
  if (!tol) return kParse;
  opts.tol_confirm = tol->confirm;
  opts.tol_geom = tol->geom;
  opts.tol_int = tol->integrality;
  opts.epsilon = a.epsilon;
  opts.normalize = a.no_normalize ? 0 : 1;
  if (a.max_iter) opts.max_iterations = a.max_iter;
  if (a.node_limit) opts.node_limit = a.node_limit;
  opts.parallel_shots = a.threads;

  Plugin plugin;
  if (a.oracle != "builtin" && !load_plugin(a.oracle, plugin)) return kParse;

  LogFile log(a.prefix + "_log", a.verbose);
  moep_problem* problem = nullptr;
  moep_status st = moep_problem_read_file(a.input.c_str(), format_of(a.format), &problem);
  if (st != MOEP_OK) {
    log.line("parse", moep_last_error());
    std::cerr << "moep: " << moep_last_error() << '\n';
    return exit_code(st);
  }

  moep_result* result = nullptr;
  st = moep_solve(problem, &opts, a.oracle == "builtin" ? nullptr : &plugin.oracle, &LogFile::callback, &log,
                  &result);
  int code = exit_code(st);
  if (st != MOEP_OK) std::cerr << "moep: " << moep_status_string(st) << ": " << moep_last_error() << '\n';
  if (result) {
    const std::string sol = a.prefix + "_sol";
    if (moep_result_write_solution(result, sol.c_str()) != MOEP_OK ||
        moep_result_write_oracle_report(result, (a.prefix + "_oracle").c_str()) != MOEP_OK) {
      std::cerr << "moep: " << moep_last_error() << '\n';
      code = kOther;
    }
    if (a.dump_dual) {
      char* dump = nullptr;
      if (moep_result_dual_dump(result, &dump) == MOEP_OK) {
        std::ofstream(a.prefix + "_dual") << dump;
        moep_string_free(dump);
      }
    }
    if (a.verbose)
      std::cerr << moep_result_num_points(result) << " extreme point(s) written to " << sol << '\n';
    moep_result_free(result);
  }
  moep_problem_free(problem);
  return code;
}

struct GenArgs {
  std::string family;
  std::string output;
  std::size_t d = 3, n = 10, m = 5;
  double integer_ratio = 0.5;
  int upper = 4;
  std::uint64_t seed = 0;
};

int run_gen(const GenArgs& a) {
  moep_gen_spec spec;
  moep_gen_spec_init(&spec);
  if (a.family == "moilp_general") {
    spec.family = MOEP_MOILP_GENERAL;
  } else if (a.family == "momilp_mixed") {
    spec.family = MOEP_MOMILP_MIXED;
  } else {
    std::cerr << "moep: unknown family '" << a.family << "'\n";
    return kParse;
  }
  spec.d = a.d;
  spec.n = a.n;
  spec.m = a.m;
  spec.integer_ratio = a.integer_ratio;
  spec.upper = a.upper;
  spec.seed = a.seed;
  moep_problem* p = nullptr;
  moep_status st = moep_generate(&spec, &p);
  if (st == MOEP_OK) {
    st = moep_problem_write_file(p, MOEP_FORMAT_AUTO, a.output.c_str());
    moep_problem_free(p);
  }
  if (st != MOEP_OK) {
    std::cerr << "moep: " << moep_last_error() << '\n';
    return st == MOEP_ERR_INVALID_ARGUMENT ? kParse : kOther;
  }
  return kOk;
}

struct CheckArgs {
  std::string input;
  std::string format = "auto";
  double tol = 1e-5;
  std::size_t max_assignments = 0;
};

int run_check(const CheckArgs& a) {
  moep_options opts;
  moep_options_init(&opts);
  const auto tol = env_tolerances(opts);
  if (!tol) return kParse;
  opts.tol_confirm = tol->confirm;
  opts.tol_geom = tol->geom;
  opts.tol_int = tol->integrality;

  moep_problem* p = nullptr;
  moep_status st = moep_problem_read_file(a.input.c_str(), format_of(a.format), &p);
  if (st != MOEP_OK) {
    std::cerr << "moep: " << moep_last_error() << '\n';
    return exit_code(st);
  }
  moep_result* solved = nullptr;
  moep_result* truth = nullptr;
  st = moep_solve(p, &opts, nullptr, nullptr, nullptr, &solved);
  if (st == MOEP_OK) st = moep_brute_force(p, a.max_assignments, &truth);
  int code = exit_code(st);
  if (st != MOEP_OK) {
    std::cerr << "moep: " << moep_status_string(st) << ": " << moep_last_error() << '\n';
  } else {
    int equal = 0;
    char* report = nullptr;
    moep_compare_results(truth, solved, a.tol, &equal, &report);

    // Witnesses must be feasible and reproduce their outcome vectors.
    bool witnesses_ok = true;
    const std::size_t d = moep_result_num_objectives(solved);
    std::vector<double> y(d);
    for (std::size_t k = 0; k < moep_result_num_points(solved); ++k) {
      double violation = 0.0;
      moep_problem_evaluate(p, moep_result_solution(solved, k), y.data(), &violation);
      const double* reported = moep_result_point(solved, k);
      bool ok = violation <= tol->feas;
      for (std::size_t i = 0; i < d; ++i) ok = ok && std::abs(y[i] - reported[i]) <= tol->eq;
      witnesses_ok = witnesses_ok && ok;
    }
    const bool pass = equal && witnesses_ok;
    std::cout << (pass ? "PASS" : "FAIL") << ' ' << a.input << ": " << moep_result_num_points(solved)
              << " extreme point(s) solved, " << moep_result_num_points(truth) << " by brute force"
              << (witnesses_ok ? "" : ", witness check failed") << '\n';
    if (!equal && report) std::cout << report;
    moep_string_free(report);
    code = pass ? kOk : kCheckFailed;
  }
  moep_result_free(solved);
  moep_result_free(truth);
  moep_problem_free(p);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moep: non-dominated extreme points of multi-objective (mixed-)integer linear programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(moep_version()));

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Compute the extreme points of an LP or MPS instance");
  s->add_option("input", solve.input, "Instance file")->required();
  s->add_option("-o,--output", solve.prefix, "Output prefix for <prefix>_sol, _log and _oracle")->required();
  s->add_option("--format", solve.format, "Input format")->check(CLI::IsMember({"auto", "lp", "mps"}));
  s->add_option("--eps", solve.epsilon, "Ray-length threshold; 0 computes the exact set")
      ->check(CLI::NonNegativeNumber);
  s->add_flag("--no-normalize", solve.no_normalize, "Skip objective range normalization");
  s->add_option("--oracle", solve.oracle, "'builtin' or the path of an oracle plugin module");
  s->add_option("--max-iter", solve.max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  s->add_option("--node-limit", solve.node_limit, "Branch-and-bound node limit per oracle call")
      ->check(CLI::PositiveNumber);
  s->add_option("--threads", solve.threads, "Vertices shot concurrently per round")->check(CLI::PositiveNumber);
  s->add_flag("-v,--verbose", solve.verbose, "Echo the log to stderr");
  s->add_flag("--dump-dual", solve.dump_dual, "Write the final dual polyhedron to <prefix>_dual");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a random instance");
  g->add_option("family", gen.family, "moilp_general or momilp_mixed")->required();
  g->add_option("-o,--output", gen.output, "Output file (.lp or .mps)")->required();
  g->add_option("-d,--objectives", gen.d, "Number of objectives");
  g->add_option("-n,--variables", gen.n, "Number of variables");
  g->add_option("-m,--constraints", gen.m, "Number of constraints");
  g->add_option("--int-ratio", gen.integer_ratio, "Share of integer variables (momilp_mixed)");
  g->add_option("--upper", gen.upper, "Upper bound U of every variable");
  g->add_option("--seed", gen.seed, "Random seed");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Compare the solver with brute force and print PASS or FAIL");
  c->add_option("input", check.input, "Instance file")->required();
  c->add_option("--format", check.format, "Input format")->check(CLI::IsMember({"auto", "lp", "mps"}));
  c->add_option("--tol", check.tol, "Coordinate tolerance");
  c->add_option("--max-assignments", check.max_assignments, "Cap on enumerated integer assignments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  if (s->parsed()) return run_solve(solve);
  if (g->parsed()) return run_gen(gen);
  return run_check(check);
}
