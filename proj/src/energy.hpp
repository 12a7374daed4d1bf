#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "nfunction.hpp"

namespace nehari {

/// Full problem data: density, grid, weights, exponents and the parameter
/// lambda. The critical exponent defaults to N*ell/(N-ell).
struct ProblemSpec {
  NFunction nf;
  Grid grid;
  Weight a;
  Weight b;
  double q = 0.0;
  double lstar = 0.0;
  bool lstar_defaulted = true;
  double lambda = 0.0;

  ProblemSpec(NFunction f, Grid g, Weight a_in, Weight b_in, double q_in,
              std::optional<double> lstar_override, double lambda_in);

  /// Re-checks the standing hypotheses; returns human-readable violations,
  /// empty when everything holds. Each entry names the violated inequality.
  std::vector<std::string> hypothesis_violations() const;
  /// Throws errc::hypothesis when violations exist.
  void require_hypotheses() const;
};

/// The four quadrature sums every identity in the method is built from:
///   A = int Phi(|grad u|), B = int phi(|grad u|)|grad u|^2,
///   P = int a |u|^q,       Q = int b |u|^{l*}.
struct EnergyComponents {
  double A = 0.0;
  double B = 0.0;
  double P = 0.0;
  double Q = 0.0;
};

EnergyComponents components(const ProblemSpec& ps, const Field& u);

/// J(u) = A - (lambda/q) P - (1/l*) Q.
double j_value(const ProblemSpec& ps, const Field& u);
double j_value(const ProblemSpec& ps, const EnergyComponents& c);

/// Assembled nodal gradient of J (one entry per node, boundary forced 0):
/// entry k is the pairing of J'(u) with the k-th nodal basis function.
std::vector<double> j_gradient(const ProblemSpec& ps, const Field& u);

/// Scale-free residual magnitude used by the manifold tolerances:
/// 1 + B + lambda|P| + |Q|.
double residual_scale(const ProblemSpec& ps, const EnergyComponents& c);

/// Cached per-direction data making every fibering quantity an O(cells)
/// (or O(terms) for power-sum families) function of the scaling t.
class DirectionProfile {
public:
  DirectionProfile(const ProblemSpec& ps, const Field& u);

  const ProblemSpec& problem() const { return *ps_; }
  double P() const { return P_; }
  double Q() const { return Q_; }

  /// int Phi(t |grad u|).
  double big_phi_integral(double t) const;
  /// int phi(t |grad u|) |grad u|^2.
  double density_integral(double t) const;
  /// int phi'(t |grad u|) |grad u|^3.
  double density_derivative_integral(double t) const;

  /// gamma_u(t) = J(t u).
  double gamma(double t) const;
  /// gamma_u'(t); defined for t >= 0 via the product forms.
  double gamma1(double t) const;
  /// gamma_u''(t); requires t > 0.
  double gamma2(double t) const;
  /// m_u(t) = t^{2-q} int phi(t|grad u|)|grad u|^2 - t^{l*-q} Q; t > 0.
  double m_aux(double t) const;
  double m_aux_prime(double t) const;
  /// eta_u(t) = (2-q) t^{2-l*} int phi(t g) g^2 + t^{3-l*} int phi'(t g) g^3.
  double eta_aux(double t) const;

  /// Energy components of the scaled field t*u without re-differencing.
  EnergyComponents components_at(double t) const;

  /// Forces the generic per-cell path even for power-sum families (used by
  /// the dual-route consistency tests).
  void disable_fast_path() { use_terms_ = false; }

private:
  const ProblemSpec* ps_;
  std::vector<double> grad_mag_;
  double measure_ = 0.0;
  double P_ = 0.0;
  double Q_ = 0.0;
  // Power-sum moments: for each family term, sum_c g_c^{e} * h^dim.
  bool use_terms_ = false;
  std::vector<PowerTerm> terms_;
  std::vector<double> moments_;
};

/// Convenience single-shot evaluations (each builds a profile).
double gamma(const ProblemSpec& ps, const Field& u, double t);
double gamma1(const ProblemSpec& ps, const Field& u, double t);
double gamma2(const ProblemSpec& ps, const Field& u, double t);
double m_aux(const ProblemSpec& ps, const Field& u, double t);
double m_aux_prime(const ProblemSpec& ps, const Field& u, double t);
double eta_aux(const ProblemSpec& ps, const Field& u, double t);

}  // namespace nehari
