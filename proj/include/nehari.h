/* Public C API of the nehari solver library.
 *
 * All entry points return a nehari_status; results travel through out
 * parameters. Objects are opaque handles released with the matching _free
 * call. Strings returned through char** are heap-allocated and released
 * with nehari_string_free. On any non-OK status a thread-local message is
 * available via nehari_last_error_message().
 */
#ifndef NEHARI_H
#define NEHARI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NEHARI_API __declspec(dllexport)
#else
#define NEHARI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nehari_status {
  NEHARI_OK = 0,
  NEHARI_ERR_INVALID_ARGUMENT = 1,
  NEHARI_ERR_PARSE = 2,
  NEHARI_ERR_HYPOTHESIS = 3,
  NEHARI_ERR_ILL_CONDITIONED = 4,
  NEHARI_ERR_OVERFLOW = 5,
  NEHARI_ERR_NO_PROJECTION = 6,
  NEHARI_ERR_LAMBDA_TOO_LARGE = 7,
  NEHARI_ERR_BRACKET_OVERFLOW = 8,
  NEHARI_ERR_DEGENERATE_DIRECTION = 9,
  NEHARI_ERR_DEGENERATE_CERTIFICATE = 10,
  NEHARI_ERR_BRANCH_INFEASIBLE = 11,
  NEHARI_ERR_UNCONVERGED = 12,
  NEHARI_ERR_IO = 13,
  NEHARI_ERR_INTERNAL = 14
} nehari_status;

typedef struct nehari_nfunction nehari_nfunction;
typedef struct nehari_problem nehari_problem;
typedef struct nehari_field nehari_field;

NEHARI_API const char* nehari_status_name(nehari_status s);
/* Message of the most recent failure on this thread. */
NEHARI_API const char* nehari_last_error_message(void);
NEHARI_API void nehari_string_free(char* s);

/* --- N-functions ------------------------------------------------------- */

/* spec: power:p | sumpower:p1,p2 | aniso:p1,...,pK | plog:p */
NEHARI_API nehari_status nehari_nfunction_create(const char* spec, nehari_nfunction** out);
NEHARI_API void nehari_nfunction_free(nehari_nfunction* f);

NEHARI_API nehari_status nehari_nfunction_phi(const nehari_nfunction* f, double t,
                                              double* out);
NEHARI_API nehari_status nehari_nfunction_product_form(const nehari_nfunction* f, double t,
                                                       double* out); /* t*phi(t) */
NEHARI_API nehari_status nehari_nfunction_big_phi(const nehari_nfunction* f, double t,
                                                  double* out);
NEHARI_API nehari_status nehari_nfunction_complementary(const nehari_nfunction* f, double t,
                                                        double* out);
NEHARI_API nehari_status nehari_nfunction_indices(const nehari_nfunction* f, double* ell,
                                                  double* m, int* exact);
/* Condition report ((phi1)-(phi3), m < N) as a JSON document. */
NEHARI_API nehari_status nehari_nfunction_verify(const nehari_nfunction* f, int dim,
                                                 char** report_json);

/* --- Problems ---------------------------------------------------------- */

/* lstar_override <= 0 selects the default N*ell/(N-ell). The weight
 * expressions use the mini-language: numbers, x, y, z, pi, sin, cos,
 * + - * / and parentheses. */
NEHARI_API nehari_status nehari_problem_create(const char* family_spec, int dim,
                                               int nodes_per_axis, double q,
                                               double lstar_override, double lambda,
                                               const char* a_expr, const char* b_expr,
                                               nehari_problem** out);
NEHARI_API void nehari_problem_free(nehari_problem* p);
NEHARI_API nehari_status nehari_problem_set_lambda(nehari_problem* p, double lambda);
/* Hypothesis (H) violations as a JSON array of strings (empty when valid). */
NEHARI_API nehari_status nehari_problem_validate(const nehari_problem* p, char** json);

/* --- Fields ------------------------------------------------------------ */

NEHARI_API nehari_status nehari_field_from_expr(const nehari_problem* p, const char* expr,
                                                nehari_field** out);
NEHARI_API nehari_status nehari_field_random(const nehari_problem* p, uint64_t seed,
                                             nehari_field** out);
NEHARI_API void nehari_field_free(nehari_field* u);
NEHARI_API nehari_status nehari_field_size(const nehari_field* u, int64_t* out);
NEHARI_API nehari_status nehari_field_copy_values(const nehari_field* u, double* buf,
                                                  int64_t len);
/* path_base gets .csv and .json appended. */
NEHARI_API nehari_status nehari_field_save(const nehari_field* u, const char* path_base);
NEHARI_API nehari_status nehari_field_load(const char* path_base, nehari_field** out);

/* --- Energy and fibering diagnostics ------------------------------------ */

NEHARI_API nehari_status nehari_j_value(const nehari_problem* p, const nehari_field* u,
                                        double* out);
/* Columns: gamma, gamma1, gamma2, m_u, m_u_prime, eta at scaling t. */
NEHARI_API nehari_status nehari_fibering_eval(const nehari_problem* p, const nehari_field* u,
                                              double t, double out_values[6]);

/* Projection onto the Nehari branches. Writes a JSON report and, when the
 * corresponding root exists, the scaled fields (pass NULL to skip). */
NEHARI_API nehari_status nehari_project(const nehari_problem* p, const nehari_field* u,
                                        char** report_json, nehari_field** plus_out,
                                        nehari_field** minus_out);

/* --- Thresholds, solve, sweep ------------------------------------------ */

NEHARI_API nehari_status nehari_thresholds(const nehari_problem* p, int probe_count,
                                           uint64_t seed, char** json);

typedef struct nehari_solve_options {
  int max_outer_iters;
  double armijo_c;
  double step_init;
  double step_shrink;
  double grad_tol_rel;
  int restarts;
  uint64_t seed;
  int threads;
} nehari_solve_options;

NEHARI_API void nehari_solve_options_default(nehari_solve_options* opts);

/* Two-branch solve. summary_json and the two trace strings (JSON lines) are
 * always produced; solution fields only for branches that produced a point.
 * Returns NEHARI_OK when both branches converged with certificates,
 * NEHARI_ERR_UNCONVERGED / NEHARI_ERR_BRANCH_INFEASIBLE otherwise (the
 * summary still describes the failure). */
NEHARI_API nehari_status nehari_solve(const nehari_problem* p,
                                      const nehari_solve_options* opts, char** summary_json,
                                      char** plus_trace_jsonl, char** minus_trace_jsonl,
                                      nehari_field** plus_out, nehari_field** minus_out);

/* Descending lambda sweep; per-lambda failures are rows in the JSON table.
 * wall-clock seconds per branch are reported separately by
 * nehari_last_solve_seconds to keep the JSON deterministic. */
NEHARI_API nehari_status nehari_sweep(const nehari_problem* p, const double* lambdas,
                                      int count, const nehari_solve_options* opts,
                                      char** table_json);

/* Wall-clock of the most recent nehari_solve on this thread: [plus, minus]. */
NEHARI_API void nehari_last_solve_seconds(double out_seconds[2]);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NEHARI_H */
