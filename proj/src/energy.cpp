#include "energy.hpp"

#include <cmath>
#include <sstream>

namespace nehari {

namespace {

Grid make_default_grid_check(const Grid& g, const Weight& a, const Weight& b) {
  if (!(a.grid == g) || !(b.grid == g))
    fail(errc::invalid_argument, "problem: weights must live on the problem grid");
  return g;
}

}  // namespace

ProblemSpec::ProblemSpec(NFunction f, Grid g, Weight a_in, Weight b_in, double q_in,
                         std::optional<double> lstar_override, double lambda_in)
    : nf(std::move(f)),
      grid(make_default_grid_check(g, a_in, b_in)),
      a(std::move(a_in)),
      b(std::move(b_in)),
      q(q_in),
      lambda(lambda_in) {
  const Indices idx = nf.indices();
  if (lstar_override) {
    lstar = *lstar_override;
    lstar_defaulted = false;
  } else {
    const int N = grid.dim();
    if (!(idx.ell < N))
      fail(errc::hypothesis,
           "ell < N required for the default critical exponent (ell=" +
               std::to_string(idx.ell) + ", N=" + std::to_string(N) + ")");
    lstar = N * idx.ell / (N - idx.ell);
    lstar_defaulted = true;
  }
}

std::vector<std::string> ProblemSpec::hypothesis_violations() const {
  std::vector<std::string> out;
  const Indices idx = nf.indices();
  const double ell = idx.ell, m = idx.m;
  auto say = [&out](const std::string& s) { out.push_back(s); };
  std::ostringstream os;
  if (!(q > 1.0)) {
    os.str("");
    os << "(H): 1 < q fails (q=" << q << ")";
    say(os.str());
  }
  if (!(lambda > 0.0)) {
    os.str("");
    os << "lambda > 0 fails (lambda=" << lambda << ")";
    say(os.str());
  }
  const double mid = (lstar == ell) ? ell : ell * (lstar - m) / (lstar - ell);
  if (!(q < mid)) {
    os.str("");
    os << "(H): q < ell(l*-m)/(l*-ell) fails (q=" << q << ", bound=" << mid << ")";
    say(os.str());
  }
  if (!(m < lstar)) {
    os.str("");
    os << "(H): m < l* fails (m=" << m << ", l*=" << lstar << ")";
    say(os.str());
  }
  if (!(a.max() > 0.0)) say("(H): a+ is identically zero");
  if (!(b.max() > 0.0)) say("(H): b+ is identically zero");
  return out;
}

void ProblemSpec::require_hypotheses() const {
  const auto v = hypothesis_violations();
  if (!v.empty()) {
    std::string msg = "hypotheses violated:";
    for (const auto& s : v) msg += " " + s + ";";
    fail(errc::hypothesis, msg);
  }
}

EnergyComponents components(const ProblemSpec& ps, const Field& u) {
  const Grid& g = ps.grid;
  const auto s = sample_cells(u);
  EnergyComponents c;
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    const double gm = s.grad_mag[i];
    c.A += ps.nf.big_phi(gm);
    c.B += ps.nf.product2(gm);
    const double ua = std::abs(s.average[i]);
    if (ua > 0.0) {
      c.P += ps.a.values[i] * std::pow(ua, ps.q);
      c.Q += ps.b.values[i] * std::pow(ua, ps.lstar);
    }
  }
  const double measure = g.cell_measure();
  c.A *= measure;
  c.B *= measure;
  c.P *= measure;
  c.Q *= measure;
  return c;
}

double j_value(const ProblemSpec& ps, const EnergyComponents& c) {
  return c.A - ps.lambda / ps.q * c.P - c.Q / ps.lstar;
}

double j_value(const ProblemSpec& ps, const Field& u) {
  return j_value(ps, components(ps, u));
}

std::vector<double> j_gradient(const ProblemSpec& ps, const Field& u) {
  const Grid& g = ps.grid;
  const int dim = g.dim();
  const int n_corners = 1 << dim;
  const double h = g.spacing();
  const double measure = g.cell_measure();
  const double grad_scale = 1.0 / ((n_corners / 2) * h);
  const double avg_scale = 1.0 / n_corners;

  std::vector<double> out(g.node_count(), 0.0);
  std::int64_t corners[8];
  const auto s = sample_cells(u);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    g.cell_corners(c, corners);
    const double gm = s.grad_mag[c];
    const double phi_c = gm > 0.0 ? ps.nf.phi(gm) : 0.0;
    const double ua = s.average[c];
    const double lower =
        ps.lambda * ps.a.values[c] * sgnpow(ua, ps.q - 1.0) +
        ps.b.values[c] * sgnpow(ua, ps.lstar - 1.0);
    for (int bit = 0; bit < n_corners; ++bit) {
      double dot = 0.0;
      if (gm > 0.0) {
        for (int d = 0; d < dim; ++d) {
          const double sign = (bit & (1 << d)) ? 1.0 : -1.0;
          dot += s.gradient[c][d] * sign;
        }
        dot *= grad_scale * phi_c;
      }
      out[corners[bit]] += measure * (dot - lower * avg_scale);
    }
  }
  for (std::int64_t i = 0; i < g.node_count(); ++i)
    if (g.is_boundary_node(i)) out[i] = 0.0;
  return out;
}

double residual_scale(const ProblemSpec& ps, const EnergyComponents& c) {
  return 1.0 + c.B + ps.lambda * std::abs(c.P) + std::abs(c.Q);
}

DirectionProfile::DirectionProfile(const ProblemSpec& ps, const Field& u) : ps_(&ps) {
  if (u.is_zero()) fail(errc::degenerate_direction, "fibering direction is identically zero");
  const Grid& g = ps.grid;
  measure_ = g.cell_measure();
  const auto s = sample_cells(u);
  grad_mag_ = s.grad_mag;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    const double ua = std::abs(s.average[c]);
    if (ua > 0.0) {
      P_ += ps.a.values[c] * std::pow(ua, ps.q);
      Q_ += ps.b.values[c] * std::pow(ua, ps.lstar);
    }
  }
  P_ *= measure_;
  Q_ *= measure_;

  if (const auto* terms = ps.nf.power_terms()) {
    terms_ = *terms;
    moments_.assign(terms_.size(), 0.0);
    for (size_t j = 0; j < terms_.size(); ++j) {
      double acc = 0.0;
      for (double gm : grad_mag_)
        if (gm > 0.0) acc += std::pow(gm, terms_[j].e);
      moments_[j] = acc * measure_;
    }
    use_terms_ = true;
  }
}

double DirectionProfile::big_phi_integral(double t) const {
  if (t == 0.0) return 0.0;
  if (use_terms_) {
    double acc = 0.0;
    for (size_t j = 0; j < terms_.size(); ++j)
      acc += terms_[j].coef_big_phi * std::pow(t, terms_[j].e) * moments_[j];
    return acc;
  }
  double acc = 0.0;
  for (double gm : grad_mag_) acc += ps_->nf.big_phi(t * gm);
  return acc * measure_;
}

double DirectionProfile::density_integral(double t) const {
  if (t == 0.0) return 0.0;  // limit through the product form
  if (use_terms_) {
    double acc = 0.0;
    for (size_t j = 0; j < terms_.size(); ++j)
      acc += terms_[j].coef_c * std::pow(t, terms_[j].e) * moments_[j];
    return acc / (t * t);
  }
  double acc = 0.0;
  for (double gm : grad_mag_) acc += ps_->nf.product2(t * gm);
  return acc * measure_ / (t * t);
}

double DirectionProfile::density_derivative_integral(double t) const {
  if (use_terms_) {
    double acc = 0.0;
    for (size_t j = 0; j < terms_.size(); ++j)
      acc += terms_[j].coef_d * std::pow(t, terms_[j].e) * moments_[j];
    return acc / (t * t * t);
  }
  double acc = 0.0;
  for (double gm : grad_mag_) acc += ps_->nf.product3(t * gm);
  return acc * measure_ / (t * t * t);
}

double DirectionProfile::gamma(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "gamma: t must be >= 0");
  if (t == 0.0) return 0.0;
  return big_phi_integral(t) - ps_->lambda * std::pow(t, ps_->q) / ps_->q * P_ -
         std::pow(t, ps_->lstar) / ps_->lstar * Q_;
}

double DirectionProfile::gamma1(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "gamma1: t must be >= 0");
  if (t == 0.0) return 0.0;  // q > 1 and the product form both vanish
  return t * density_integral(t) - ps_->lambda * std::pow(t, ps_->q - 1.0) * P_ -
         std::pow(t, ps_->lstar - 1.0) * Q_;
}

double DirectionProfile::gamma2(double t) const {
  if (!(t > 0.0)) fail(errc::invalid_argument, "gamma2: t must be > 0");
  return t * density_derivative_integral(t) + density_integral(t) -
         ps_->lambda * (ps_->q - 1.0) * std::pow(t, ps_->q - 2.0) * P_ -
         (ps_->lstar - 1.0) * std::pow(t, ps_->lstar - 2.0) * Q_;
}

double DirectionProfile::m_aux(double t) const {
  if (!(t > 0.0)) fail(errc::invalid_argument, "m_aux: t must be > 0");
  return std::pow(t, 2.0 - ps_->q) * density_integral(t) -
         std::pow(t, ps_->lstar - ps_->q) * Q_;
}

double DirectionProfile::m_aux_prime(double t) const {
  if (!(t > 0.0)) fail(errc::invalid_argument, "m_aux_prime: t must be > 0");
  return (2.0 - ps_->q) * std::pow(t, 1.0 - ps_->q) * density_integral(t) +
         std::pow(t, 2.0 - ps_->q) * density_derivative_integral(t) -
         (ps_->lstar - ps_->q) * std::pow(t, ps_->lstar - ps_->q - 1.0) * Q_;
}

double DirectionProfile::eta_aux(double t) const {
  if (!(t > 0.0)) fail(errc::invalid_argument, "eta_aux: t must be > 0");
  return (2.0 - ps_->q) * std::pow(t, 2.0 - ps_->lstar) * density_integral(t) +
         std::pow(t, 3.0 - ps_->lstar) * density_derivative_integral(t);
}

EnergyComponents DirectionProfile::components_at(double t) const {
  EnergyComponents c;
  c.A = big_phi_integral(t);
  // density_integral is int phi(t g) g^2; B of the scaled field carries t^2.
  c.B = t > 0.0 ? t * t * density_integral(t) : 0.0;
  c.P = std::pow(t, ps_->q) * P_;
  c.Q = std::pow(t, ps_->lstar) * Q_;
  return c;
}

double gamma(const ProblemSpec& ps, const Field& u, double t) {
  return DirectionProfile(ps, u).gamma(t);
}
double gamma1(const ProblemSpec& ps, const Field& u, double t) {
  return DirectionProfile(ps, u).gamma1(t);
}
double gamma2(const ProblemSpec& ps, const Field& u, double t) {
  return DirectionProfile(ps, u).gamma2(t);
}
double m_aux(const ProblemSpec& ps, const Field& u, double t) {
  return DirectionProfile(ps, u).m_aux(t);
}
double m_aux_prime(const ProblemSpec& ps, const Field& u, double t) {
  return DirectionProfile(ps, u).m_aux_prime(t);
}
double eta_aux(const ProblemSpec& ps, const Field& u, double t) {
  return DirectionProfile(ps, u).eta_aux(t);
}

}  // namespace nehari
