#include "nehari.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "expr.hpp"
#include "report.hpp"
#include "solver.hpp"

using namespace nehari;

struct nehari_nfunction {
  NFunction f;
};
struct nehari_problem {
  ProblemSpec ps;
};
struct nehari_field {
  Field u;
};

namespace {

thread_local std::string g_last_error;
thread_local double g_last_solve_seconds[2] = {0.0, 0.0};

nehari_status map_errc(errc c) {
  switch (c) {
    case errc::invalid_argument: return NEHARI_ERR_INVALID_ARGUMENT;
    case errc::parse: return NEHARI_ERR_PARSE;
    case errc::hypothesis: return NEHARI_ERR_HYPOTHESIS;
    case errc::ill_conditioned: return NEHARI_ERR_ILL_CONDITIONED;
    case errc::overflow: return NEHARI_ERR_OVERFLOW;
    case errc::no_projection: return NEHARI_ERR_NO_PROJECTION;
    case errc::lambda_too_large: return NEHARI_ERR_LAMBDA_TOO_LARGE;
    case errc::bracket_overflow: return NEHARI_ERR_BRACKET_OVERFLOW;
    case errc::degenerate_direction: return NEHARI_ERR_DEGENERATE_DIRECTION;
    case errc::degenerate_certificate: return NEHARI_ERR_DEGENERATE_CERTIFICATE;
    case errc::branch_infeasible: return NEHARI_ERR_BRANCH_INFEASIBLE;
    case errc::unconverged: return NEHARI_ERR_UNCONVERGED;
    case errc::io: return NEHARI_ERR_IO;
    case errc::internal: return NEHARI_ERR_INTERNAL;
  }
  return NEHARI_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

/// Runs fn, translating exceptions into status codes + the thread-local
/// message.
template <typename Fn>
nehari_status guarded(Fn&& fn) {
  try {
    fn();
    return NEHARI_OK;
  } catch (const error& e) {
    g_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NEHARI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NEHARI_ERR_INTERNAL;
  }
}

nehari_status require(bool cond, const char* msg) {
  if (cond) return NEHARI_OK;
  g_last_error = msg;
  return NEHARI_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* nehari_status_name(nehari_status s) {
  switch (s) {
    case NEHARI_OK: return "ok";
    case NEHARI_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case NEHARI_ERR_PARSE: return "parse";
    case NEHARI_ERR_HYPOTHESIS: return "hypothesis";
    case NEHARI_ERR_ILL_CONDITIONED: return "ill_conditioned";
    case NEHARI_ERR_OVERFLOW: return "overflow";
    case NEHARI_ERR_NO_PROJECTION: return "no_projection";
    case NEHARI_ERR_LAMBDA_TOO_LARGE: return "lambda_too_large";
    case NEHARI_ERR_BRACKET_OVERFLOW: return "bracket_overflow";
    case NEHARI_ERR_DEGENERATE_DIRECTION: return "degenerate_direction";
    case NEHARI_ERR_DEGENERATE_CERTIFICATE: return "degenerate_certificate";
    case NEHARI_ERR_BRANCH_INFEASIBLE: return "branch_infeasible";
    case NEHARI_ERR_UNCONVERGED: return "unconverged";
    case NEHARI_ERR_IO: return "io";
    case NEHARI_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* nehari_last_error_message(void) { return g_last_error.c_str(); }

void nehari_string_free(char* s) { std::free(s); }

nehari_status nehari_nfunction_create(const char* spec, nehari_nfunction** out) {
  if (auto st = require(spec && out, "nfunction_create: null argument")) return st;
  return guarded([&] { *out = new nehari_nfunction{NFunction::parse(spec)}; });
}

void nehari_nfunction_free(nehari_nfunction* f) { delete f; }

nehari_status nehari_nfunction_phi(const nehari_nfunction* f, double t, double* out) {
  if (auto st = require(f && out, "nfunction_phi: null argument")) return st;
  return guarded([&] { *out = f->f.phi(t); });
}

nehari_status nehari_nfunction_product_form(const nehari_nfunction* f, double t,
                                            double* out) {
  if (auto st = require(f && out, "nfunction_product_form: null argument")) return st;
  return guarded([&] { *out = f->f.product1(t); });
}

nehari_status nehari_nfunction_big_phi(const nehari_nfunction* f, double t, double* out) {
  if (auto st = require(f && out, "nfunction_big_phi: null argument")) return st;
  return guarded([&] { *out = f->f.big_phi(t); });
}

nehari_status nehari_nfunction_complementary(const nehari_nfunction* f, double t,
                                             double* out) {
  if (auto st = require(f && out, "nfunction_complementary: null argument")) return st;
  return guarded([&] { *out = f->f.complementary(t); });
}

nehari_status nehari_nfunction_indices(const nehari_nfunction* f, double* ell, double* m,
                                       int* exact) {
  if (auto st = require(f && ell && m, "nfunction_indices: null argument")) return st;
  return guarded([&] {
    const Indices idx = f->f.indices();
    *ell = idx.ell;
    *m = idx.m;
    if (exact) *exact = idx.exact ? 1 : 0;
  });
}

nehari_status nehari_nfunction_verify(const nehari_nfunction* f, int dim,
                                      char** report_json) {
  if (auto st = require(f && report_json, "nfunction_verify: null argument")) return st;
  return guarded([&] { *report_json = dup_string(to_json(f->f.verify(dim)).dump(2)); });
}

nehari_status nehari_problem_create(const char* family_spec, int dim, int nodes_per_axis,
                                    double q, double lstar_override, double lambda,
                                    const char* a_expr, const char* b_expr,
                                    nehari_problem** out) {
  if (auto st = require(family_spec && a_expr && b_expr && out,
                        "problem_create: null argument"))
    return st;
  return guarded([&] {
    NFunction f = NFunction::parse(family_spec);
    Grid g(dim, nodes_per_axis);
    Weight a = weight_from_expr(g, a_expr);
    Weight b = weight_from_expr(g, b_expr);
    std::optional<double> lstar;
    if (lstar_override > 0.0) lstar = lstar_override;
    *out = new nehari_problem{
        ProblemSpec(std::move(f), g, std::move(a), std::move(b), q, lstar, lambda)};
  });
}

void nehari_problem_free(nehari_problem* p) { delete p; }

nehari_status nehari_problem_set_lambda(nehari_problem* p, double lambda) {
  if (auto st = require(p != nullptr, "problem_set_lambda: null problem")) return st;
  p->ps.lambda = lambda;
  return NEHARI_OK;
}

nehari_status nehari_problem_validate(const nehari_problem* p, char** json) {
  if (auto st = require(p && json, "problem_validate: null argument")) return st;
  return guarded([&] {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : p->ps.hypothesis_violations()) arr.push_back(v);
    *json = dup_string(arr.dump(2));
  });
}

nehari_status nehari_field_from_expr(const nehari_problem* p, const char* expr,
                                     nehari_field** out) {
  if (auto st = require(p && expr && out, "field_from_expr: null argument")) return st;
  return guarded([&] { *out = new nehari_field{field_from_expr(p->ps.grid, expr)}; });
}

nehari_status nehari_field_random(const nehari_problem* p, uint64_t seed,
                                  nehari_field** out) {
  if (auto st = require(p && out, "field_random: null argument")) return st;
  return guarded([&] { *out = new nehari_field{random_bump(p->ps.grid, seed)}; });
}

void nehari_field_free(nehari_field* u) { delete u; }

nehari_status nehari_field_size(const nehari_field* u, int64_t* out) {
  if (auto st = require(u && out, "field_size: null argument")) return st;
  *out = u->u.grid.node_count();
  return NEHARI_OK;
}

nehari_status nehari_field_copy_values(const nehari_field* u, double* buf, int64_t len) {
  if (auto st = require(u && buf, "field_copy_values: null argument")) return st;
  if (len < u->u.grid.node_count()) {
    g_last_error = "field_copy_values: buffer too small";
    return NEHARI_ERR_INVALID_ARGUMENT;
  }
  std::memcpy(buf, u->u.values.data(), sizeof(double) * u->u.values.size());
  return NEHARI_OK;
}

nehari_status nehari_field_save(const nehari_field* u, const char* path_base) {
  if (auto st = require(u && path_base, "field_save: null argument")) return st;
  return guarded([&] { save_field(u->u, path_base); });
}

nehari_status nehari_field_load(const char* path_base, nehari_field** out) {
  if (auto st = require(path_base && out, "field_load: null argument")) return st;
  return guarded([&] { *out = new nehari_field{load_field(path_base)}; });
}

nehari_status nehari_j_value(const nehari_problem* p, const nehari_field* u, double* out) {
  if (auto st = require(p && u && out, "j_value: null argument")) return st;
  return guarded([&] { *out = j_value(p->ps, u->u); });
}

nehari_status nehari_fibering_eval(const nehari_problem* p, const nehari_field* u, double t,
                                   double out_values[6]) {
  if (auto st = require(p && u && out_values, "fibering_eval: null argument")) return st;
  return guarded([&] {
    const DirectionProfile prof(p->ps, u->u);
    out_values[0] = prof.gamma(t);
    out_values[1] = prof.gamma1(t);
    out_values[2] = t > 0.0 ? prof.gamma2(t) : 0.0;
    out_values[3] = t > 0.0 ? prof.m_aux(t) : 0.0;
    out_values[4] = t > 0.0 ? prof.m_aux_prime(t) : 0.0;
    out_values[5] = t > 0.0 ? prof.eta_aux(t) : 0.0;
  });
}

nehari_status nehari_project(const nehari_problem* p, const nehari_field* u,
                             char** report_json, nehari_field** plus_out,
                             nehari_field** minus_out) {
  if (auto st = require(p && u, "project: null argument")) return st;
  if (plus_out) *plus_out = nullptr;
  if (minus_out) *minus_out = nullptr;
  return guarded([&] {
    const auto pr = project(p->ps, u->u);
    if (report_json) *report_json = dup_string(to_json(pr).dump(2));
    for (const auto& pt : pr.points) {
      if (pt.branch == Branch::plus && plus_out)
        *plus_out = new nehari_field{pt.field};
      if (pt.branch == Branch::minus && minus_out)
        *minus_out = new nehari_field{pt.field};
    }
  });
}

nehari_status nehari_thresholds(const nehari_problem* p, int probe_count, uint64_t seed,
                                char** json) {
  if (auto st = require(p && json, "thresholds: null argument")) return st;
  return guarded([&] {
    *json = dup_string(to_json(thresholds(p->ps, probe_count, seed)).dump(2));
  });
}

void nehari_solve_options_default(nehari_solve_options* opts) {
  if (!opts) return;
  const SolveOptions d;
  opts->max_outer_iters = d.max_outer_iters;
  opts->armijo_c = d.armijo_c;
  opts->step_init = d.step_init;
  opts->step_shrink = d.step_shrink;
  opts->grad_tol_rel = d.grad_tol_rel;
  opts->restarts = d.restarts;
  opts->seed = d.seed;
  opts->threads = d.threads;
}

namespace {

SolveOptions from_c(const nehari_solve_options* o) {
  SolveOptions s;
  if (o) {
    s.max_outer_iters = o->max_outer_iters;
    s.armijo_c = o->armijo_c;
    s.step_init = o->step_init;
    s.step_shrink = o->step_shrink;
    s.grad_tol_rel = o->grad_tol_rel;
    s.restarts = o->restarts;
    s.seed = o->seed;
    s.threads = o->threads;
  }
  return s;
}

}  // namespace

nehari_status nehari_solve(const nehari_problem* p, const nehari_solve_options* opts,
                           char** summary_json, char** plus_trace_jsonl,
                           char** minus_trace_jsonl, nehari_field** plus_out,
                           nehari_field** minus_out) {
  if (auto st = require(p != nullptr, "solve: null problem")) return st;
  if (plus_out) *plus_out = nullptr;
  if (minus_out) *minus_out = nullptr;
  SolveResult result;
  const nehari_status st = guarded([&] { result = solve(p->ps, from_c(opts)); });
  if (st != NEHARI_OK) return st;
  g_last_solve_seconds[0] = result.wall_seconds_plus;
  g_last_solve_seconds[1] = result.wall_seconds_minus;
  if (summary_json) *summary_json = dup_string(to_json(result).dump(2));
  if (plus_trace_jsonl)
    *plus_trace_jsonl =
        dup_string(result.plus ? trace_jsonl(*result.plus, Branch::plus) : std::string());
  if (minus_trace_jsonl)
    *minus_trace_jsonl =
        dup_string(result.minus ? trace_jsonl(*result.minus, Branch::minus) : std::string());
  if (result.plus && plus_out) *plus_out = new nehari_field{result.plus->point.field};
  if (result.minus && minus_out) *minus_out = new nehari_field{result.minus->point.field};

  if (!result.plus || !result.minus) {
    g_last_error = !result.plus ? result.plus_error : result.minus_error;
    return NEHARI_ERR_BRANCH_INFEASIBLE;
  }
  if (!result.plus->converged || !result.minus->converged) {
    g_last_error = "at least one branch did not reach the gradient tolerance";
    return NEHARI_ERR_UNCONVERGED;
  }
  return NEHARI_OK;
}

nehari_status nehari_sweep(const nehari_problem* p, const double* lambdas, int count,
                           const nehari_solve_options* opts, char** table_json) {
  if (auto st = require(p && lambdas && table_json, "sweep: null argument")) return st;
  if (count < 1) return require(false, "sweep: need at least one lambda");
  return guarded([&] {
    std::vector<double> ls(lambdas, lambdas + count);
    *table_json = dup_string(to_json(sweep_lambda(p->ps, ls, from_c(opts))).dump(2));
  });
}

void nehari_last_solve_seconds(double out_seconds[2]) {
  if (!out_seconds) return;
  out_seconds[0] = g_last_solve_seconds[0];
  out_seconds[1] = g_last_solve_seconds[1];
}

}  // extern "C"
