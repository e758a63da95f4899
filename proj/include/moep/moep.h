/* moep: non-dominated extreme points of multi-objective (mixed-)integer
 * linear programs.
 *
 * Every function returning moep_status leaves a thread-local message behind
 * on failure; read it with moep_last_error(). Handles are opaque and owned by
 * the caller, who releases them with the matching *_free function. Strings
 * handed out through char** must be released with moep_string_free().
 */
#ifndef MOEP_MOEP_H
#define MOEP_MOEP_H

#include <stddef.h>
#include <stdint.h>

#if defined(MOEP_BUILDING_LIBRARY)
#define MOEP_API __attribute__((visibility("default")))
#else
#define MOEP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum moep_status {
  MOEP_OK = 0,
  MOEP_ERR_PARSE = 1,
  MOEP_ERR_INFEASIBLE = 2,
  MOEP_ERR_NO_IDEAL_POINT = 3,
  MOEP_ERR_LIMIT = 4,
  MOEP_ERR_INVALID_ARGUMENT = 5,
  MOEP_ERR_UNSUPPORTED = 6,
  MOEP_ERR_NUMERICAL = 7,
  MOEP_ERR_IO = 8,
  MOEP_ERR_CAPS_EXCEEDED = 9,
  MOEP_ERR_INTERNAL = 10
} moep_status;

typedef enum moep_format { MOEP_FORMAT_AUTO = 0, MOEP_FORMAT_LP = 1, MOEP_FORMAT_MPS = 2 } moep_format;

typedef enum moep_termination {
  MOEP_TERM_COMPLETE = 0,
  MOEP_TERM_ITERATION_LIMIT = 1,
  MOEP_TERM_NODE_LIMIT = 2
} moep_termination;

typedef enum moep_row_sense { MOEP_LE = 0, MOEP_EQ = 1, MOEP_GE = 2 } moep_row_sense;

typedef struct moep_problem moep_problem;
typedef struct moep_result moep_result;

MOEP_API const char* moep_version(void);
MOEP_API const char* moep_status_string(moep_status status);
MOEP_API const char* moep_last_error(void);
MOEP_API void moep_string_free(char* s);

/* ---- problems ---------------------------------------------------------- */

MOEP_API moep_status moep_problem_read_file(const char* path, moep_format format, moep_problem** out);
MOEP_API moep_status moep_problem_parse(const char* text, moep_format format, const char* filename,
                                        moep_problem** out);
MOEP_API moep_status moep_problem_write(const moep_problem* p, moep_format format, char** text);
MOEP_API moep_status moep_problem_write_file(const moep_problem* p, moep_format format, const char* path);
MOEP_API void moep_problem_free(moep_problem* p);

MOEP_API size_t moep_problem_num_objectives(const moep_problem* p);
MOEP_API size_t moep_problem_num_variables(const moep_problem* p);
MOEP_API size_t moep_problem_num_constraints(const moep_problem* p);
MOEP_API const char* moep_problem_objective_name(const moep_problem* p, size_t i);
MOEP_API const char* moep_problem_variable_name(const moep_problem* p, size_t k);
/* Linear coefficients of objective i (length num_variables); NULL when out of range. */
MOEP_API const double* moep_problem_objective_coeffs(const moep_problem* p, size_t i);
MOEP_API int moep_problem_objective_is_max(const moep_problem* p, size_t i);
MOEP_API const double* moep_problem_constraint_coeffs(const moep_problem* p, size_t j);
MOEP_API moep_row_sense moep_problem_constraint_sense(const moep_problem* p, size_t j);
MOEP_API double moep_problem_constraint_rhs(const moep_problem* p, size_t j);
MOEP_API void moep_problem_bounds(const moep_problem* p, size_t k, double* lower, double* upper, int* integer);
MOEP_API int moep_problem_is_linear(const moep_problem* p);
MOEP_API int moep_problem_equal(const moep_problem* a, const moep_problem* b);

/* One diagnostic per line in *diagnostics (empty when valid); MOEP_OK either way. */
MOEP_API moep_status moep_problem_validate(const moep_problem* p, char** diagnostics);
/* Evaluates all objectives at x (length num_variables) into y (length
 * num_objectives) and reports the largest bound/row/integrality violation. */
MOEP_API moep_status moep_problem_evaluate(const moep_problem* p, const double* x, double* y, double* violation);

/* ---- solving ----------------------------------------------------------- */

typedef struct moep_options {
  double epsilon;          /* ray-length threshold; 0 = exact */
  double tol_confirm;      /* vertex confirmation tolerance */
  double tol_geom;         /* on-plane tolerance of the dual polyhedron */
  double tol_int;          /* integrality tolerance of branch and bound */
  size_t max_iterations;
  size_t node_limit;       /* branch-and-bound nodes per oracle call */
  int normalize;           /* objective range normalization on/off */
  size_t parallel_shots;   /* >1: shoot that many vertices concurrently */
} moep_options;

MOEP_API void moep_options_init(moep_options* options);

/* Weighted-sum oracle supplied by the caller. `problem` is the problem being
 * minimized (all senses min, possibly rescaled); w has length d. Fill y
 * (length d) and x (length num_variables of `problem`) with a minimizer of
 * wᵀf(x). With `lexicographic` set, ties must be broken towards a
 * non-dominated point. Return 0 on success, MOEP_ERR_INFEASIBLE or
 * MOEP_ERR_NO_IDEAL_POINT (unbounded), or any other status on failure. */
typedef int (*moep_oracle_fn)(void* user, const moep_problem* problem, const double* w, size_t d,
                              int lexicographic, double* y, double* x);

typedef struct moep_oracle {
  const char* name;
  void* user;
  moep_oracle_fn solve;
  /* Non-zero when the oracle handles quadratic objectives/constraints. */
  int handles_quadratic;
} moep_oracle;

/* Entry point a plugin module exports for the command-line tool. */
typedef int (*moep_plugin_init_fn)(moep_oracle* oracle);
#define MOEP_PLUGIN_INIT_SYMBOL "moep_plugin_init"

typedef void (*moep_log_fn)(void* user, const char* phase, const char* message);

/* Runs the full pipeline. `oracle` NULL selects the built-in oracle. On
 * MOEP_ERR_LIMIT a partial result is still stored in *out. */
MOEP_API moep_status moep_solve(const moep_problem* p, const moep_options* options, const moep_oracle* oracle,
                                moep_log_fn log, void* log_user, moep_result** out);

/* ---- results ----------------------------------------------------------- */

typedef struct moep_stats {
  size_t oracle_calls;
  size_t iterations;
  size_t cuts;
  size_t confirms;
  size_t suppressed;
  size_t degeneracy_events;
  size_t dual_vertices;
  size_t dual_facets;
  size_t lp_solves;
  size_t simplex_pivots;
  size_t bb_nodes;
  double seconds;
} moep_stats;

MOEP_API size_t moep_result_num_points(const moep_result* r);
MOEP_API size_t moep_result_num_objectives(const moep_result* r);
MOEP_API size_t moep_result_num_variables(const moep_result* r);
MOEP_API const double* moep_result_point(const moep_result* r, size_t k);
MOEP_API const double* moep_result_weight(const moep_result* r, size_t k);
MOEP_API const double* moep_result_solution(const moep_result* r, size_t k);
MOEP_API int moep_result_exact(const moep_result* r);
MOEP_API moep_termination moep_result_termination(const moep_result* r);
MOEP_API void moep_result_stats(const moep_result* r, moep_stats* stats);
MOEP_API moep_status moep_result_solution_json(const moep_result* r, char** json);
MOEP_API moep_status moep_result_write_solution(const moep_result* r, const char* path);
MOEP_API moep_status moep_result_write_oracle_report(const moep_result* r, const char* path);
/* Final dual polyhedron as text; empty for brute-force results. */
MOEP_API moep_status moep_result_dual_dump(const moep_result* r, char** text);
MOEP_API void moep_result_free(moep_result* r);

/* ---- instance generation and ground truth ------------------------------ */

typedef enum moep_family { MOEP_MOILP_GENERAL = 0, MOEP_MOMILP_MIXED = 1 } moep_family;

typedef struct moep_gen_spec {
  moep_family family;
  size_t d;
  size_t n;
  size_t m;
  int obj_lo, obj_hi;
  int con_lo, con_hi;
  double rhs_fraction;
  double integer_ratio;
  int upper;
  uint64_t seed;
} moep_gen_spec;

MOEP_API void moep_gen_spec_init(moep_gen_spec* spec);
MOEP_API moep_status moep_generate(const moep_gen_spec* spec, moep_problem** out);

/* Exhaustive extreme-point set; fails with MOEP_ERR_CAPS_EXCEEDED beyond
 * max_assignments integer assignments (0 = default cap). */
MOEP_API moep_status moep_brute_force(const moep_problem* p, size_t max_assignments, moep_result** out);

/* Set equality of the outcome vectors up to tol (infinity norm). *report
 * lists unmatched points; it may be NULL. */
MOEP_API moep_status moep_compare_results(const moep_result* expected, const moep_result* actual, double tol,
                                          int* equal, char** report);

#ifdef __cplusplus
}
#endif

#endif /* MOEP_MOEP_H */
