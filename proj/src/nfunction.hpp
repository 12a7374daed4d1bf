#pragma once

#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nehari {

/// Growth indices of a Young function: ell-2 and m-2 are the inf and sup of
/// t(t*phi(t))''/(t*phi(t))' over t > 0. For the built-in families these are
/// closed-form; otherwise they are sampled bounds (flagged by `exact`).
struct Indices {
  double ell = 0.0;
  double m = 0.0;
  bool exact = false;
};

/// One monomial of a sum-of-powers density. Contributes
///   coef_big_phi * s^e  to Phi(s),
///   coef_c       * s^e  to phi(s) s^2,
///   coef_d       * s^e  to phi'(s) s^3.
/// Families made of such terms admit O(#terms) fibering sweeps.
struct PowerTerm {
  double e = 0.0;
  double coef_big_phi = 0.0;
  double coef_c = 0.0;
  double coef_d = 0.0;
};

struct ConditionCheck {
  bool passed = true;
  double violating_t = 0.0;  // first violating sample when !passed
  std::string detail;
};

struct ConditionReport {
  ConditionCheck phi1;  // s*phi(s) -> 0 at 0 and -> inf at infinity
  ConditionCheck phi2;  // s -> s*phi(s) strictly increasing
  ConditionCheck phi3;  // -1 < ell-2 <= m-2
  ConditionCheck dimension;  // m - 2 < N - 2
  Indices indices;
  bool indices_exact = false;
  bool all_passed() const {
    return phi1.passed && phi2.passed && phi3.passed && dimension.passed;
  }
};

/// A Young function Phi(t) = int_0^t s*phi(s) ds described by its density phi.
///
/// The built-in families (power, sum of two powers, anisotropic power sum,
/// t^p ln(1+t)) carry closed-form phi', Phi and exact growth indices; custom
/// densities fall back to finite differences and adaptive quadrature.
class NFunction {
public:
  enum class Family { power, sumpower, aniso, plog, custom };

  static NFunction power(double p);
  static NFunction sum_power(double p1, double p2);
  static NFunction anisotropic(std::vector<double> exponents);
  static NFunction power_log(double p);
  static NFunction custom(std::string name, std::function<double(double)> phi,
                          std::function<double(double)> dphi = {},
                          std::function<double(double)> big_phi = {});

  /// Parses a family spec string: power:p | sumpower:p1,p2 | aniso:p1,...,pK
  /// | plog:p. Throws errc::parse on malformed input.
  static NFunction parse(const std::string& spec);

  const std::string& name() const { return name_; }
  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::string spec_string() const;

  /// Density value; t = 0 may be singular (use the product forms there).
  double phi(double t) const;
  double dphi(double t) const;
  double big_phi(double t) const;

  /// t*phi(t) with the (phi1) limit 0 at t = 0.
  double product1(double t) const;
  /// t^2*phi(t), 0 at t = 0.
  double product2(double t) const;
  /// t^3*phi'(t), 0 at t = 0.
  double product3(double t) const;

  /// Convex conjugate: max_{s>=0} (t s - Phi(s)), via the monotone root of
  /// s*phi(s) = t.
  double complementary(double t) const;

  /// Closed-form indices for built-in families, sampled bounds otherwise.
  Indices indices() const;
  /// Sampled estimate regardless of family (the cross-check route).
  Indices sampled_indices() const;

  /// Power-term expansion when the density is a finite sum of powers,
  /// nullptr otherwise.
  const std::vector<PowerTerm>* power_terms() const {
    return terms_.empty() ? nullptr : &terms_;
  }

  /// Samples (phi1)-(phi3) and the m < N constraint; failures are report
  /// content, not errors.
  ConditionReport verify(int dim) const;

private:
  NFunction() = default;

  std::string name_;
  Family family_ = Family::custom;
  std::vector<double> params_;
  std::vector<PowerTerm> terms_;
  std::function<double(double)> phi_fn_;
  std::function<double(double)> dphi_fn_;
  std::function<double(double)> big_phi_fn_;
  Indices exact_indices_;
  bool has_exact_indices_ = false;
};

/// sign(u)*|u|^r with the removable singularity |u|^{r}*sign(u) -> 0 at 0.
double sgnpow(double u, double r);

}  // namespace nehari
