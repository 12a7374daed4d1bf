#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "energy.hpp"

namespace nehari {

enum class Branch { plus, minus };
inline const char* branch_name(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

enum class Classification { plus, minus, zero_band, off_manifold };
const char* classification_name(Classification c);

/// Tolerance of the manifold membership / zero-band tests, applied against
/// residual_scale().
inline constexpr double kManifoldTol = 1e-8;

/// A point t*u on one Nehari branch together with its certificates.
struct BranchPoint {
  Field field;             // the scaled field t*u
  double t = 0.0;          // projection scale
  Branch branch = Branch::plus;
  double gamma1_residual = 0.0;  // |gamma'(1)| at the projected point
  double gamma2_value = 0.0;     // gamma''(1) at the projected point
  double energy = 0.0;           // J at the projected point
};

/// Sign case of Lemma-style projection analysis for a direction.
enum class FiberingCase {
  no_projection,   // P <= 0 and Q <= 0: gamma' never vanishes
  single_plus,     // P > 0, Q <= 0: m_u strictly increasing, one root
  single_minus,    // P <= 0, Q > 0: one root beyond the maximum
  two_roots,       // P > 0, Q > 0: plus root below t~, minus root above
};
const char* fibering_case_name(FiberingCase c);

struct ProjectionResult {
  FiberingCase kind;
  std::vector<BranchPoint> points;  // plus first when two
  double t_max = 0.0;               // t~ when Q > 0, else 0
  double m_at_max = 0.0;            // m_u(t~) when Q > 0
};

Classification classify(const ProblemSpec& ps, const Field& u);

/// Projects the direction u onto the Nehari branches via the case analysis
/// on the signs of P and Q. Throws:
///   errc::no_projection    when P <= 0 and Q <= 0,
///   errc::lambda_too_large when P, Q > 0 but lambda*P >= m_u(t~),
///   errc::bracket_overflow when bracket expansion exceeds its cap.
ProjectionResult project(const ProblemSpec& ps, const Field& u);

/// Locates the unique maximizer t~ of m_u for directions with Q > 0.
std::pair<double, double> locate_m_max(const DirectionProfile& prof);

struct Thresholds {
  double lambda1 = 0.0;       // zero-band exclusion threshold
  double lambda_tilde1 = 0.0; // (q/m) * lambda1
  std::optional<double> lambda_bar1;  // min over probes of m_u(t~)/P
  double Lambda = 0.0;        // min of the applicable thresholds
  double S_ell = 0.0;         // (L^ell ratio)^q embedding surrogate
  double S_lstar = 0.0;       // (L^l* ratio)^l* embedding surrogate
  double S_q = 0.0;           // plain L^q/Sobolev ratio
  double poincare_ratio = 1.0;  // max Sobolev norm / gradient Luxemburg norm
  std::uint64_t probe_seed = 0;
  int probe_count = 0;
};

/// Estimates the discrete embedding surrogates over random probe directions
/// with projected-ascent refinement, then assembles the lambda thresholds.
/// `extra_probes` (optional) are included in the ratio maximization.
Thresholds thresholds(const ProblemSpec& ps, int probe_count, std::uint64_t seed,
                      const std::vector<Field>* extra_probes = nullptr);

struct MinimizerBounds {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.0;  // exponent branch used for the upper bound
};

/// Norm bounds for minimizing sequences on the plus branch:
///   lower = (-alpha_plus * l* q / ((l*-q) lambda ||a||_inf S_q^q))^{1/q}
///   upper = (lambda (l*-q) ||a||_inf S_q^q / (q (l*-m)))^{1/(alpha-q)}
/// with alpha = ell when the iterate norm is >= 1, else m.
MinimizerBounds minimizer_bounds(const ProblemSpec& ps, double alpha_lambda_plus,
                                 double iterate_norm, double s_q);

/// Deterministic smooth random bump: a combination of low sine modes with
/// mt19937_64-driven coefficients. Never identically zero.
Field random_bump(const Grid& g, std::uint64_t seed);

}  // namespace nehari
