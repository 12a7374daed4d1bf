#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "errors.hpp"

namespace nehari {

/// Cap on bracket doublings/halvings before reporting bracket_overflow.
inline constexpr int kMaxBracketSteps = 1024;

/// Bisection for a continuous f with f(lo) and f(hi) of opposite sign.
/// Stops at relative interval width `rel_tol` or `max_iter` halvings.
template <typename F>
double bisect(F&& f, double lo, double hi, double f_lo, double f_hi,
              double rel_tol = 1e-12, int max_iter = 200) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    fail(errc::internal, "bisect: endpoints do not bracket a root");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::abs(mid)) return mid;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <typename F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-12, int max_iter = 200) {
  return bisect(f, lo, hi, f(lo), f(hi), rel_tol, max_iter);
}

/// Expands `hi` by doubling until pred(hi) holds. Throws bracket_overflow
/// after kMaxBracketSteps doublings.
template <typename Pred>
double expand_up(double hi, Pred&& pred) {
  for (int i = 0; i < kMaxBracketSteps; ++i) {
    if (pred(hi)) return hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) break;
  }
  fail(errc::bracket_overflow, "bracket expansion exceeded representable range");
}

/// Shrinks `lo` by halving until pred(lo) holds.
template <typename Pred>
double shrink_down(double lo, Pred&& pred) {
  for (int i = 0; i < kMaxBracketSteps; ++i) {
    if (pred(lo)) return lo;
    lo *= 0.5;
    if (lo == 0.0) break;
  }
  fail(errc::bracket_overflow, "bracket shrink reached zero");
}

/// Golden-section search for the maximum of a unimodal f on [a, b].
/// Returns (argmax, max). Tolerance is relative in the argument.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double rel_tol = 1e-10) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > rel_tol * (std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

/// Brackets a maximum of f on (0, inf) by geometric marching from t0.
/// Returns (a, b) with an interior point beating both endpoints.
template <typename F>
std::pair<double, double> bracket_max(F&& f, double t0 = 1.0) {
  double a = 0.5 * t0, b = t0, c = 2.0 * t0;
  double fa = f(a), fb = f(b), fc = f(c);
  int steps = 0;
  while (!(fb >= fa && fb >= fc)) {
    if (++steps > kMaxBracketSteps)
      fail(errc::bracket_overflow, "maximum bracket expansion exceeded cap");
    if (fc > fb) {  // still ascending to the right
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      c *= 2.0;
      fc = f(c);
      if (!std::isfinite(c)) fail(errc::bracket_overflow, "maximum bracket overflow");
    } else {  // descending already at a: march left
      c = b;
      fc = fb;
      b = a;
      fb = fa;
      a *= 0.5;
      fa = f(a);
      if (a == 0.0) fail(errc::bracket_overflow, "maximum bracket underflow");
    }
  }
  return {a, c};
}

}  // namespace nehari
