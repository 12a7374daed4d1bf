#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "manifold.hpp"

namespace nehari {

struct SolveOptions {
  int max_outer_iters = 500;
  double armijo_c = 1e-4;
  double step_init = 1.0;
  double step_shrink = 0.5;
  double grad_tol_rel = 1e-6;
  int restarts = 8;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct TraceEntry {
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
  double t = 0.0;
};

/// One branch outcome: the minimizer candidate, its certificates, and the
/// per-iteration trace of the best restart.
struct BranchResult {
  BranchPoint point;
  bool converged = false;
  double free_gradient_residual = 0.0;  // ||grad||_dual / (1 + |J|)
  double lagrange_mu_hat = 0.0;         // gamma'(1)/gamma''(1) at the point
  int iterations = 0;
  int restart_index = -1;
  std::vector<TraceEntry> trace;
  // Norm diagnostics for the decay bound and minimizer-bounds checks.
  double sobolev = 0.0;
  double gradient_luxemburg = 0.0;
  double lq_ratio = 0.0;   // ||u||_{L^ell} / sobolev for the solution itself
  bool sign_consistent = true;  // field had a single sign before |.|
  double abs_energy_mismatch = 0.0;  // |J(|u|) - J(u)|
};

struct SolveResult {
  std::optional<BranchResult> plus;
  std::optional<BranchResult> minus;
  std::string plus_error;   // set when the plus branch failed outright
  std::string minus_error;
  Thresholds thresholds;
  double lambda_used = 0.0;
  double wall_seconds_plus = 0.0;
  double wall_seconds_minus = 0.0;
};

/// Projected descent on one Nehari branch: project, assemble the free
/// gradient, Armijo backtracking on step -> J(project(u - step*g)), best
/// result over `restarts` deterministic random starts.
/// Throws errc::branch_infeasible when no restart direction projects onto
/// the branch.
BranchResult solve_branch(const ProblemSpec& ps, Branch branch, const SolveOptions& opts,
                          const Field* warm_start = nullptr);

/// ||free gradient||_dual / (1 + |J|) plus the Lagrange-multiplier estimate;
/// requires the field to be on-manifold and outside the gamma'' zero band.
struct Certificate {
  double residual = 0.0;
  double mu_hat = 0.0;
};
Certificate lagrange_residual(const ProblemSpec& ps, const Field& u);

/// Euclidean dual-norm surrogate: h^{dim/2} * ||g||_2 (grid-resolution free).
double dual_norm(const Grid& g, const std::vector<double>& grad);

/// Nodewise |u| with the energy-invariance assertion J(|u|) == J(u) (exact
/// when the field has a single sign; logged otherwise).
struct NonnegativeReport {
  Field field;
  bool sign_consistent = true;
  double abs_energy_mismatch = 0.0;
};
NonnegativeReport nonnegative_report(const ProblemSpec& ps, const Field& u);

struct SweepRow {
  double lambda = 0.0;
  bool plus_ok = false;
  bool minus_ok = false;
  double plus_energy = 0.0;
  double minus_energy = 0.0;
  double plus_norm = 0.0;          // sobolev norm of the plus solution
  double plus_grad_norm = 0.0;     // gradient Luxemburg norm
  double plus_residual = 0.0;
  double minus_residual = 0.0;
  double bound_rhs = 0.0;          // lambda * C of the decay bound
  double bound_lhs = 0.0;          // ||u||^{alpha-q}
  bool bound_ok = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  Thresholds thresholds;
  double decay_constant = 0.0;  // C of the bound, assembled from logged constants
};

/// Descending-lambda sweep with warm starts; per-lambda failures are
/// recorded in the row, not thrown.
SweepResult sweep_lambda(const ProblemSpec& base, const std::vector<double>& lambdas,
                         const SolveOptions& opts);

/// Full two-branch solve including thresholds.
SolveResult solve(const ProblemSpec& ps, const SolveOptions& opts);

}  // namespace nehari
