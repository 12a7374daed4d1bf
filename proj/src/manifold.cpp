#include "manifold.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rootfind.hpp"

namespace nehari {

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::plus: return "plus";
    case Classification::minus: return "minus";
    case Classification::zero_band: return "zero-band";
    case Classification::off_manifold: return "off-manifold";
  }
  return "unknown";
}

const char* fibering_case_name(FiberingCase c) {
  switch (c) {
    case FiberingCase::no_projection: return "P<=0,Q<=0 (no projection)";
    case FiberingCase::single_plus: return "P>0,Q<=0 (single plus root)";
    case FiberingCase::single_minus: return "P<=0,Q>0 (single minus root)";
    case FiberingCase::two_roots: return "P>0,Q>0 (plus and minus roots)";
  }
  return "unknown";
}

Classification classify(const ProblemSpec& ps, const Field& u) {
  if (u.is_zero()) fail(errc::degenerate_direction, "classify: zero field");
  const DirectionProfile prof(ps, u);
  const double g1 = prof.gamma1(1.0);
  const EnergyComponents c = prof.components_at(1.0);
  const double scale = residual_scale(ps, c);
  if (std::abs(g1) > kManifoldTol * scale) return Classification::off_manifold;
  const double g2 = prof.gamma2(1.0);
  if (std::abs(g2) <= kManifoldTol * scale) return Classification::zero_band;
  return g2 > 0.0 ? Classification::plus : Classification::minus;
}

std::pair<double, double> locate_m_max(const DirectionProfile& prof) {
  auto m = [&prof](double t) { return prof.m_aux(t); };
  const auto bracket = bracket_max(m, 1.0);
  auto peak = golden_max(m, bracket.first, bracket.second, 1e-10);
  return peak;
}

namespace {

/// Newton-polishes a root of gamma' inside [lo, hi].
double polish_root(const DirectionProfile& prof, double t, double lo, double hi) {
  for (int i = 0; i < 5; ++i) {
    const double f = prof.gamma1(t);
    if (f == 0.0) return t;
    const double df = prof.gamma2(t);
    if (df == 0.0 || !std::isfinite(df)) break;
    double next = t - f / df;
    if (!(next > lo && next < hi)) break;
    t = next;
  }
  return t;
}

BranchPoint make_point(const ProblemSpec& ps, const Field& u, double t, Branch branch) {
  Field scaled(u.grid);
  for (std::int64_t i = 0; i < u.grid.node_count(); ++i)
    scaled.values[i] = t * u.values[i];
  const DirectionProfile prof(ps, scaled);
  BranchPoint bp{std::move(scaled), t, branch, 0.0, 0.0, 0.0};
  bp.gamma1_residual = std::abs(prof.gamma1(1.0));
  bp.gamma2_value = prof.gamma2(1.0);
  bp.energy = prof.gamma(1.0);
  return bp;
}

/// Root of m_u(t) = lambda*P in [lo, hi] given opposite residual signs.
double m_root(const DirectionProfile& prof, double target, double lo, double hi) {
  auto f = [&prof, target](double t) { return prof.m_aux(t) - target; };
  double root = bisect(f, lo, hi, 1e-12, 200);
  return polish_root(prof, root, lo, hi);
}

}  // namespace

ProjectionResult project(const ProblemSpec& ps, const Field& u) {
  if (u.is_zero()) fail(errc::degenerate_direction, "project: zero direction");
  const DirectionProfile prof(ps, u);
  const double P = prof.P(), Q = prof.Q();
  const double target = ps.lambda * P;

  ProjectionResult res{FiberingCase::no_projection, {}, 0.0, 0.0};

  if (Q <= 0.0 && P <= 0.0) {
    fail(errc::no_projection,
         "no projection: int a|u|^q <= 0 and int b|u|^{l*} <= 0, gamma' never vanishes");
  }

  if (Q <= 0.0) {  // P > 0: m_u increasing from 0 to infinity
    res.kind = FiberingCase::single_plus;
    const double hi = expand_up(1.0, [&](double t) { return prof.m_aux(t) >= target; });
    const double lo = shrink_down(hi * 0.5, [&](double t) { return prof.m_aux(t) <= target; });
    const double t1 = m_root(prof, target, lo, hi);
    res.points.push_back(make_point(ps, u, t1, Branch::plus));
    return res;
  }

  // Q > 0: unimodal m_u with a single interior maximum.
  const auto [t_max, m_max] = locate_m_max(prof);
  res.t_max = t_max;
  res.m_at_max = m_max;

  if (P <= 0.0) {  // single root on the decreasing side
    res.kind = FiberingCase::single_minus;
    const double hi = expand_up(2.0 * t_max, [&](double t) { return prof.m_aux(t) <= target; });
    const double t2 = m_root(prof, target, t_max, hi);
    res.points.push_back(make_point(ps, u, t2, Branch::minus));
    return res;
  }

  // P > 0 and Q > 0: both roots exist only under lambda*P < m_u(t~).
  res.kind = FiberingCase::two_roots;
  if (!(target < m_max)) {
    fail(errc::lambda_too_large,
         "lambda too large for this direction: lambda*P = " + std::to_string(target) +
             " >= m_u(t~) = " + std::to_string(m_max));
  }
  const double lo = shrink_down(t_max * 0.5, [&](double t) { return prof.m_aux(t) <= target; });
  const double t1 = m_root(prof, target, lo, t_max);
  const double hi = expand_up(2.0 * t_max, [&](double t) { return prof.m_aux(t) <= target; });
  const double t2 = m_root(prof, target, t_max, hi);
  res.points.push_back(make_point(ps, u, t1, Branch::plus));
  res.points.push_back(make_point(ps, u, t2, Branch::minus));
  return res;
}

Field random_bump(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() {
    // uniform in [-1, 1], derived from the standardized mt19937_64 stream
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  };
  constexpr int max_mode = 3;
  const int dim = g.dim();
  int mode_count = 1;
  for (int d = 0; d < dim; ++d) mode_count *= max_mode;
  std::vector<double> coef(mode_count);
  for (auto& c : coef) c = unit();

  Field u(g);
  constexpr double pi = 3.14159265358979323846;
  for (std::int64_t i = 0; i < g.node_count(); ++i) {
    if (g.is_boundary_node(i)) continue;
    const auto p = g.node_position(i);
    double v = 0.0;
    for (int mi = 0; mi < mode_count; ++mi) {
      int rest = mi;
      double term = 1.0;
      int knorm2 = 0;
      for (int d = 0; d < dim; ++d) {
        const int k = rest % max_mode + 1;
        rest /= max_mode;
        term *= std::sin(k * pi * p[d]);
        knorm2 += k * k;
      }
      v += coef[mi] * term / knorm2;
    }
    u.values[i] = v;
  }
  if (u.is_zero()) u.values[g.node_count() / 2] = 1.0;  // vanishing-probability fallback
  return u;
}

namespace {

/// max over probes (plus ascent refinement) of ||u||_{L^s} / sobolev_norm.
double embedding_ratio(const ProblemSpec& ps, double s, const std::vector<Field>& probes,
                       int ascent_steps) {
  const Grid& g = ps.grid;
  const Weight ones(g, 1.0);
  auto ratio = [&](const Field& u) {
    const double num = std::pow(lp_integral(u, ones, s), 1.0 / s);
    const double den = sobolev_norm(ps.nf, u);
    return den > 0.0 ? num / den : 0.0;
  };

  double best = 0.0;
  const Field* best_u = nullptr;
  for (const auto& u : probes) {
    const double r = ratio(u);
    if (r > best) {
      best = r;
      best_u = &u;
    }
  }
  if (!best_u || ascent_steps <= 0) return best;

  // Projected ascent on the L^s modular at (approximately) fixed Sobolev
  // norm: step along d(int |u|^s)/du, renormalize, keep improvements.
  Field u = *best_u;
  {
    const double n0 = sobolev_norm(ps.nf, u);
    for (auto& v : u.values) v /= n0;
  }
  double cur = ratio(u);
  double step = 0.1;
  const int n_corners = 1 << g.dim();
  std::vector<std::int64_t> corners(n_corners);
  for (int it = 0; it < ascent_steps; ++it) {
    const auto samples = sample_cells(u);
    std::vector<double> dir(g.node_count(), 0.0);
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
      g.cell_corners(c, corners.data());
      const double w = sgnpow(samples.average[c], s - 1.0) / n_corners;
      for (int bit = 0; bit < n_corners; ++bit) dir[corners[bit]] += w;
    }
    double dmax = 0.0;
    for (std::int64_t i = 0; i < g.node_count(); ++i)
      if (!g.is_boundary_node(i)) dmax = std::max(dmax, std::abs(dir[i]));
    if (dmax == 0.0) break;
    Field cand(g);
    for (std::int64_t i = 0; i < g.node_count(); ++i)
      cand.values[i] = u.values[i] + step * dir[i] / dmax;
    cand.enforce_boundary();
    const double nn = sobolev_norm(ps.nf, cand);
    if (nn > 0.0)
      for (auto& v : cand.values) v /= nn;
    const double r = ratio(cand);
    if (r > cur) {
      u = std::move(cand);
      cur = r;
    } else {
      step *= 0.5;
      if (step < 1e-6) break;
    }
  }
  return std::max(best, cur);
}

}  // namespace

Thresholds thresholds(const ProblemSpec& ps, int probe_count, std::uint64_t seed,
                      const std::vector<Field>* extra_probes) {
  if (probe_count < 1) fail(errc::invalid_argument, "thresholds: need at least one probe");
  ps.require_hypotheses();
  const Indices idx = ps.nf.indices();
  const double ell = idx.ell, m = idx.m, q = ps.q, lstar = ps.lstar;

  std::vector<Field> probes;
  probes.reserve(probe_count + (extra_probes ? extra_probes->size() : 0));
  for (int i = 0; i < probe_count; ++i) probes.push_back(random_bump(ps.grid, seed + i));
  if (extra_probes)
    for (const auto& u : *extra_probes) probes.push_back(u);

  Thresholds th;
  th.probe_seed = seed;
  th.probe_count = probe_count;

  constexpr int kAscentSteps = 200;
  const double r_ell = embedding_ratio(ps, ell, probes, kAscentSteps);
  const double r_lstar = embedding_ratio(ps, lstar, probes, kAscentSteps);
  const double r_q = embedding_ratio(ps, q, probes, kAscentSteps);
  th.S_ell = std::pow(r_ell, q);
  th.S_lstar = std::pow(r_lstar, lstar);
  th.S_q = r_q;

  double poincare = 1.0;
  for (const auto& u : probes) {
    const double kgrad = gradient_luxemburg_norm(ps.nf, u);
    const double full = sobolev_norm(ps.nf, u);
    if (kgrad > 0.0) poincare = std::max(poincare, full / kgrad);
  }
  th.poincare_ratio = poincare;

  const double b_plus_inf = std::max(ps.b.max(), 0.0);
  const double dual_exp = ell / (ell - q);  // Holder conjugate of ell/q
  const double a_plus_dual = ps.a.positive_part_lr_norm(dual_exp);
  if (!(b_plus_inf > 0.0) || !(a_plus_dual > 0.0))
    fail(errc::hypothesis, "thresholds: a+ or b+ vanishes");

  // alpha = ell branch of the threshold formula (the ||u|| >= 1 convention).
  const double alpha = ell;
  const double first = ell * (ell - q) / ((lstar - q) * th.S_lstar * b_plus_inf);
  const double second = ell * (lstar - m) / ((lstar - q) * th.S_ell * a_plus_dual);
  th.lambda1 = std::pow(first, (alpha - q) / (lstar - alpha)) * second;
  th.lambda_tilde1 = q / m * th.lambda1;

  double bar = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& u : probes) {
    const DirectionProfile prof(ps, u);
    if (prof.P() > 0.0 && prof.Q() > 0.0) {
      const auto [t_max, m_max] = locate_m_max(prof);
      (void)t_max;
      bar = std::min(bar, m_max / prof.P());
      found = true;
    }
  }
  if (found) th.lambda_bar1 = bar;

  // Lambda = min{Lambda_1, Lambda_2} with Lambda_1 = min{lambda_1, bar},
  // Lambda_2 = min{bar, tilde}; tilde <= lambda_1 always.
  th.Lambda = found ? std::min(th.lambda_tilde1, *th.lambda_bar1) : th.lambda_tilde1;
  return th;
}

MinimizerBounds minimizer_bounds(const ProblemSpec& ps, double alpha_lambda_plus,
                                 double iterate_norm, double s_q) {
  if (!(alpha_lambda_plus < 0.0))
    fail(errc::invalid_argument, "minimizer_bounds: alpha_lambda_plus must be negative");
  const Indices idx = ps.nf.indices();
  const double q = ps.q, lstar = ps.lstar, m = idx.m, ell = idx.ell;
  const double a_inf = ps.a.max_abs();
  const double sqq = std::pow(s_q, q);
  MinimizerBounds out;
  out.lower = std::pow(-alpha_lambda_plus * lstar * q /
                           ((lstar - q) * ps.lambda * a_inf * sqq),
                       1.0 / q);
  out.alpha = iterate_norm >= 1.0 ? ell : m;
  out.upper = std::pow(ps.lambda * (lstar - q) * a_inf * sqq / (q * (lstar - m)),
                       1.0 / (out.alpha - q));
  return out;
}

}  // namespace nehari
