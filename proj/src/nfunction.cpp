#include "nfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "quadrature.hpp"
#include "rootfind.hpp"

namespace nehari {

double sgnpow(double u, double r) {
  if (u == 0.0) return 0.0;
  const double mag = std::pow(std::abs(u), r);
  return u > 0.0 ? mag : -mag;
}

namespace {

// log1p keeps the plog formulas accurate for small arguments.
double plog_phi(double p, double t) {
  return p * std::pow(t, p - 2.0) * std::log1p(t) + std::pow(t, p - 1.0) / (1.0 + t);
}

double plog_dphi(double p, double t) {
  const double one_plus = 1.0 + t;
  return p * (p - 2.0) * std::pow(t, p - 3.0) * std::log1p(t) +
         (2.0 * p - 1.0) * std::pow(t, p - 2.0) / one_plus -
         std::pow(t, p - 1.0) / (one_plus * one_plus);
}

void require_exponent(double p, const char* family) {
  if (!(p > 1.0) || !std::isfinite(p))
    fail(errc::parse, std::string(family) + ": exponent must be finite and > 1");
}

std::vector<double> parse_number_list(const std::string& body, const char* family) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const double v = std::stod(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(errc::parse, std::string(family) + ": bad number '" + item + "'");
    }
  }
  if (out.empty()) fail(errc::parse, std::string(family) + ": empty parameter list");
  return out;
}

}  // namespace

NFunction NFunction::power(double p) {
  require_exponent(p, "power");
  NFunction f;
  f.family_ = Family::power;
  f.params_ = {p};
  std::ostringstream os;
  os << "power:" << p;
  f.name_ = os.str();
  f.phi_fn_ = [p](double t) { return p * std::pow(t, p - 2.0); };
  f.dphi_fn_ = [p](double t) { return p * (p - 2.0) * std::pow(t, p - 3.0); };
  f.big_phi_fn_ = [p](double t) { return std::pow(t, p); };
  f.terms_ = {{p, 1.0, p, p * (p - 2.0)}};
  f.exact_indices_ = {p, p, true};
  f.has_exact_indices_ = true;
  return f;
}

NFunction NFunction::sum_power(double p1, double p2) {
  require_exponent(p1, "sumpower");
  require_exponent(p2, "sumpower");
  if (!(p1 < p2)) fail(errc::parse, "sumpower: requires p1 < p2");
  NFunction f;
  f.family_ = Family::sumpower;
  f.params_ = {p1, p2};
  std::ostringstream os;
  os << "sumpower:" << p1 << "," << p2;
  f.name_ = os.str();
  f.phi_fn_ = [p1, p2](double t) {
    return p1 * std::pow(t, p1 - 2.0) + p2 * std::pow(t, p2 - 2.0);
  };
  f.dphi_fn_ = [p1, p2](double t) {
    return p1 * (p1 - 2.0) * std::pow(t, p1 - 3.0) + p2 * (p2 - 2.0) * std::pow(t, p2 - 3.0);
  };
  f.big_phi_fn_ = [p1, p2](double t) { return std::pow(t, p1) + std::pow(t, p2); };
  f.terms_ = {{p1, 1.0, p1, p1 * (p1 - 2.0)}, {p2, 1.0, p2, p2 * (p2 - 2.0)}};
  f.exact_indices_ = {p1, p2, true};
  f.has_exact_indices_ = true;
  return f;
}

NFunction NFunction::anisotropic(std::vector<double> exponents) {
  if (exponents.size() < 2) fail(errc::parse, "aniso: needs at least two exponents");
  for (double p : exponents) require_exponent(p, "aniso");
  for (size_t i = 1; i < exponents.size(); ++i)
    if (!(exponents[i - 1] < exponents[i]))
      fail(errc::parse, "aniso: exponents must be strictly increasing");
  NFunction f;
  f.family_ = Family::aniso;
  f.params_ = exponents;
  std::ostringstream os;
  os << "aniso:";
  for (size_t i = 0; i < exponents.size(); ++i) os << (i ? "," : "") << exponents[i];
  f.name_ = os.str();
  auto exps = exponents;
  f.phi_fn_ = [exps](double t) {
    double s = 0.0;
    for (double p : exps) s += std::pow(t, p - 2.0);
    return s;
  };
  f.dphi_fn_ = [exps](double t) {
    double s = 0.0;
    for (double p : exps) s += (p - 2.0) * std::pow(t, p - 3.0);
    return s;
  };
  f.big_phi_fn_ = [exps](double t) {
    double s = 0.0;
    for (double p : exps) s += std::pow(t, p) / p;
    return s;
  };
  for (double p : exponents) f.terms_.push_back({p, 1.0 / p, 1.0, p - 2.0});
  f.exact_indices_ = {exponents.front(), exponents.back(), true};
  f.has_exact_indices_ = true;
  return f;
}

NFunction NFunction::power_log(double p) {
  require_exponent(p, "plog");
  NFunction f;
  f.family_ = Family::plog;
  f.params_ = {p};
  std::ostringstream os;
  os << "plog:" << p;
  f.name_ = os.str();
  f.phi_fn_ = [p](double t) { return plog_phi(p, t); };
  f.dphi_fn_ = [p](double t) { return plog_dphi(p, t); };
  f.big_phi_fn_ = [p](double t) { return std::pow(t, p) * std::log1p(t); };
  f.exact_indices_ = {p, p + 1.0, true};
  f.has_exact_indices_ = true;
  return f;
}

NFunction NFunction::custom(std::string name, std::function<double(double)> phi,
                            std::function<double(double)> dphi,
                            std::function<double(double)> big_phi) {
  if (!phi) fail(errc::invalid_argument, "custom N-function needs a density");
  NFunction f;
  f.family_ = Family::custom;
  f.name_ = std::move(name);
  f.phi_fn_ = std::move(phi);
  f.dphi_fn_ = std::move(dphi);
  f.big_phi_fn_ = std::move(big_phi);
  return f;
}

NFunction NFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    fail(errc::parse, "family spec '" + spec + "' has no ':'");
  const std::string head = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (head == "power") {
    auto v = parse_number_list(body, "power");
    if (v.size() != 1) fail(errc::parse, "power: expects one exponent");
    return power(v[0]);
  }
  if (head == "sumpower") {
    auto v = parse_number_list(body, "sumpower");
    if (v.size() != 2) fail(errc::parse, "sumpower: expects two exponents");
    return sum_power(v[0], v[1]);
  }
  if (head == "aniso") {
    return anisotropic(parse_number_list(body, "aniso"));
  }
  if (head == "plog") {
    auto v = parse_number_list(body, "plog");
    if (v.size() != 1) fail(errc::parse, "plog: expects one exponent");
    return power_log(v[0]);
  }
  fail(errc::parse, "unknown family '" + head + "'");
}

std::string NFunction::spec_string() const { return name_; }

double NFunction::phi(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "phi: negative argument");
  return phi_fn_(t);
}

double NFunction::dphi(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "dphi: negative argument");
  if (dphi_fn_) return dphi_fn_(t);
  // 5-point central stencil with relative step.
  const double h = 1e-5 * std::max(t, 1e-30);
  auto& f = phi_fn_;
  return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

double NFunction::big_phi(double t) const {
  if (t < 0.0) t = -t;  // even extension
  if (t == 0.0) return 0.0;
  if (big_phi_fn_) return big_phi_fn_(t);
  auto& f = phi_fn_;
  return integrate_adaptive([&f](double s) { return s == 0.0 ? 0.0 : s * f(s); }, 0.0, t);
}

double NFunction::product1(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "product1: negative argument");
  if (t == 0.0) return 0.0;
  return t * phi_fn_(t);
}

double NFunction::product2(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "product2: negative argument");
  if (t == 0.0) return 0.0;
  return t * t * phi_fn_(t);
}

double NFunction::product3(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "product3: negative argument");
  if (t == 0.0) return 0.0;
  return t * t * t * dphi(t);
}

double NFunction::complementary(double t) const {
  if (t < 0.0) fail(errc::invalid_argument, "complementary: negative argument");
  if (t == 0.0) return 0.0;
  // Invert the strictly increasing s*phi(s) = t, then evaluate t*s - Phi(s).
  const double hi = expand_up(1.0, [&](double s) { return product1(s) >= t; });
  double lo = hi > 1.0 ? hi * 0.5 : 0.0;
  const double s_star = bisect([&](double s) { return product1(s) - t; }, lo, hi,
                               product1(lo) - t, product1(hi) - t, 1e-14, 300);
  return t * s_star - big_phi(s_star);
}

Indices NFunction::indices() const {
  if (has_exact_indices_) return exact_indices_;
  return sampled_indices();
}

Indices NFunction::sampled_indices() const {
  // inf/sup of r(t) = t*G''(t)/G'(t) + 2 with G(t) = t*phi(t), over a
  // 600-point log grid. G'' by 5-point stencil, G' analytic via dphi.
  constexpr int n = 600;
  const double lo = 1e-6, hi = 1e6;
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = -std::numeric_limits<double>::infinity();
  auto G = [this](double t) { return product1(t); };
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    const double h = 1e-4 * t;
    const double g2 = (-G(t + 2 * h) + 16 * G(t + h) - 30 * G(t) + 16 * G(t - h) -
                       G(t - 2 * h)) /
                      (12 * h * h);
    const double g1 = phi(t) + t * dphi(t);
    const double r = t * g2 / g1;
    if (!std::isfinite(r))
      fail(errc::ill_conditioned, "index sampling: non-finite quotient at t=" + std::to_string(t));
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  }
  return {r_min + 2.0, r_max + 2.0, false};
}

ConditionReport NFunction::verify(int dim) const {
  ConditionReport rep;
  constexpr int n = 600;
  const double lo = 1e-6, hi = 1e6;

  // (phi1): product form trends to 0 at the origin and grows unboundedly.
  {
    const double near0 = product1(1e-12);
    const double at1 = product1(1.0);
    const double far = product1(1e12);
    if (!(near0 >= 0.0) || !(near0 < at1)) {
      rep.phi1 = {false, 1e-12, "s*phi(s) does not decay toward 0"};
    } else if (!(far > 100.0 * at1)) {
      rep.phi1 = {false, 1e12, "s*phi(s) does not grow toward infinity"};
    }
  }

  // (phi2): strict monotonicity of s*phi(s) on the sample grid.
  {
    double prev = product1(lo);
    for (int i = 1; i < n; ++i) {
      const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
      const double cur = product1(t);
      if (!(cur > prev)) {
        rep.phi2 = {false, t, "s*phi(s) not strictly increasing"};
        break;
      }
      prev = cur;
    }
  }

  // (phi3): finite sampled indices with -1 < ell-2; plus the Remark
  // consequences ell <= phi t^2/Phi <= m and ell-2 <= phi' t/phi <= m-2.
  Indices idx;
  bool idx_ok = true;
  try {
    idx = indices();
    rep.indices = idx;
    rep.indices_exact = idx.exact;
  } catch (const error& e) {
    rep.phi3 = {false, 0.0, e.what()};
    idx_ok = false;
  }
  if (idx_ok) {
    if (!(idx.ell - 2.0 > -1.0)) {
      rep.phi3 = {false, 0.0, "ell-2 <= -1"};
    } else {
      constexpr double slack = 1e-7;
      for (int i = 0; i < n && rep.phi3.passed; ++i) {
        const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        const double ratio_phi = product2(t) / big_phi(t);
        if (!(ratio_phi >= idx.ell - slack && ratio_phi <= idx.m + slack)) {
          rep.phi3 = {false, t, "phi(t)t^2/Phi(t) outside [ell, m]"};
          break;
        }
        const double ratio_dphi = t * dphi(t) / phi(t);
        if (!(ratio_dphi >= idx.ell - 2.0 - slack && ratio_dphi <= idx.m - 2.0 + slack)) {
          rep.phi3 = {false, t, "phi'(t)t/phi(t) outside [ell-2, m-2]"};
          break;
        }
      }
    }
  }

  if (idx_ok && !(idx.m - 2.0 < dim - 2.0)) {
    rep.dimension = {false, 0.0, "m < N fails (m=" + std::to_string(idx.m) +
                                     ", N=" + std::to_string(dim) + ")"};
  }
  return rep;
}

}  // namespace nehari
