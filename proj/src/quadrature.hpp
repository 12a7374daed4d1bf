#pragma once

#include <cmath>

#include "errors.hpp"

namespace nehari {

namespace detail {

template <typename F>
double simpson(F&& f, double a, double fa, double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double abs_tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0) fail(errc::ill_conditioned, "adaptive quadrature depth exhausted");
  if (std::abs(delta) <= 15.0 * abs_tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * abs_tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b], tolerance
/// abs_tol + rel_tol * |estimate|.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                          double rel_tol = 1e-10, int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
  const double tol = abs_tol + rel_tol * std::abs(whole);
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace nehari
