#pragma once

/// \file
/// Scalar bracketing root finders shared by every analysis module.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "hvi/errors.hpp"

namespace hvi::roots {

inline constexpr double kDefaultTol = 1e-12;

/// Bisection on a sign-changing bracket [lo, hi]. Stops when the bracket is
/// narrower than `tol` or an exact zero is hit. Returns the midpoint of the
/// final bracket.
template <typename Fn>
double bisect(Fn&& fn, double lo, double hi, double tol = kDefaultTol,
              int max_iter = 200) {
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw NumericError("bisect: bracket does not change sign");
  }
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Bisection followed by a few guarded Newton steps. `dfn` is the analytic
/// derivative; a Newton iterate that leaves the final bracket is discarded.
template <typename Fn, typename DFn>
double bisect_newton(Fn&& fn, DFn&& dfn, double lo, double hi,
                     double tol = kDefaultTol) {
  const double coarse = std::max(tol, 1e-9);
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw NumericError("bisect_newton: bracket does not change sign");
  }
  // Shrink the bracket first, then polish.
  while (hi - lo > coarse) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 6; ++i) {
    const double d = dfn(x);
    if (!(std::abs(d) > 1e-14)) break;
    const double next = x - fn(x) / d;
    if (next < lo || next > hi) break;
    if (std::abs(next - x) < tol) {
      x = next;
      break;
    }
    x = next;
  }
  if (std::abs(fn(x)) > std::abs(fn(0.5 * (lo + hi)))) {
    return bisect(fn, lo, hi, tol);
  }
  return x;
}

/// Scans [lo, hi] upward with step `step` (the step may grow geometrically
/// with `growth` > 0 as `step * (1 + growth * x)`) and returns the first
/// bracket whose endpoints change sign, or nullopt.
template <typename Fn>
std::optional<std::pair<double, double>> first_bracket(Fn&& fn, double lo,
                                                       double hi, double step,
                                                       double growth = 0.0) {
  double a = lo;
  double fa = fn(a);
  while (a < hi) {
    const double b = std::min(hi, a + step * (1.0 + growth * std::abs(a)));
    const double fb = fn(b);
    if (fa == 0.0) return std::pair{a, a};
    if ((fa < 0.0) != (fb < 0.0)) return std::pair{a, b};
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

/// First root of `fn` on (lo, hi], located by scanning then bisection.
template <typename Fn>
std::optional<double> first_root(Fn&& fn, double lo, double hi, double step,
                                 double growth = 0.0,
                                 double tol = kDefaultTol) {
  auto br = first_bracket(fn, lo, hi, step, growth);
  if (!br) return std::nullopt;
  if (br->first == br->second) return br->first;
  return bisect(fn, br->first, br->second, tol);
}

/// Golden-section minimisation of a unimodal function on [lo, hi].
template <typename Fn>
double golden_min(Fn&& fn, double lo, double hi, double tol = 1e-10) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - r * (hi - lo);
  double d = lo + r * (hi - lo);
  double fc = fn(c);
  double fd = fn(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = fn(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = fn(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hvi::roots
