#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "finquant/error.hpp"

namespace finquant::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kRootTol = 1e-13;

// Smallest t in [lo, hi] at which a monotone (false..true) predicate holds,
// up to tol. pred(hi) is assumed true; returns the upper end of the final bracket.
template <class Pred>
double threshold(Pred&& pred, double lo, double hi, double tol = kRootTol,
                 int max_iter = 400) {
  if (pred(lo)) return lo;
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Same as threshold but never evaluates pred(lo); useful when lo is singular.
template <class Pred>
double threshold_open(Pred&& pred, double lo, double hi, double tol = kRootTol,
                      int max_iter = 400) {
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// First value of start * 2^k (k >= 0) at which pred holds.
template <class Pred>
std::optional<double> expand_until(Pred&& pred, double start, int max_doublings = 1100) {
  double t = start;
  for (int k = 0; k < max_doublings; ++k) {
    if (pred(t)) return t;
    t *= 2.0;
    if (!std::isfinite(t)) break;
  }
  return std::nullopt;
}

namespace detail {

template <class Fn>
double simpson_step(Fn& f, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps || !(lm > a && rm < b))
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b]. The error target is
// max(abs_tol, rel_tol * |coarse estimate|).
template <class Fn>
double adaptive_simpson(Fn&& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 1e-300, int max_depth = 50) {
  if (!(b > a)) return 0.0;
  constexpr int kPanels = 8;
  double h = (b - a) / kPanels;
  double fx[2 * kPanels + 1];
  for (int i = 0; i <= 2 * kPanels; ++i) {
    double t = (i == 2 * kPanels) ? b : a + 0.5 * h * i;
    fx[i] = f(t);
  }
  double coarse = 0.0;
  double pieces[kPanels];
  for (int k = 0; k < kPanels; ++k) {
    pieces[k] = h / 6.0 * (fx[2 * k] + 4.0 * fx[2 * k + 1] + fx[2 * k + 2]);
    coarse += pieces[k];
  }
  double eps = std::max(abs_tol, rel_tol * std::abs(coarse)) / kPanels;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    double lo = a + h * k, hi = (k == kPanels - 1) ? b : a + h * (k + 1);
    total += detail::simpson_step(f, lo, hi, fx[2 * k], fx[2 * k + 1], fx[2 * k + 2],
                                  pieces[k], eps, max_depth);
  }
  return total;
}

// Integral over [a, b] split at the given interior points.
template <class Fn>
double integrate_split(Fn&& f, double a, double b, std::vector<double> cuts,
                       double rel_tol = 1e-10, double abs_tol = 1e-300) {
  if (!(b > a)) return 0.0;
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0, lo = a;
  for (double c : cuts) {
    if (c <= lo || c >= b) continue;
    total += adaptive_simpson(f, lo, c, rel_tol, abs_tol);
    lo = c;
  }
  return total + adaptive_simpson(f, lo, b, rel_tol, abs_tol);
}

// Adaptive Simpson after y = a + (b - a)(3u^2 - 2u^3); the flat ends tame
// square-root type endpoint behaviour.
template <class Fn>
double smoothed_simpson(Fn&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 1e-300) {
  if (!(b > a)) return 0.0;
  const double w = b - a;
  auto g = [&](double u) {
    const double d = 6.0 * u * (1.0 - u);
    if (d == 0.0) return 0.0;
    const double y = u < 0.5 ? a + w * u * u * (3.0 - 2.0 * u) : b - w * (1.0 - u) * (1.0 - u) * (1.0 + 2.0 * u);
    return f(y) * d * w;
  };
  return adaptive_simpson(g, 0.0, 1.0, rel_tol, abs_tol);
}

inline double clamp01(double y) { return std::min(1.0, std::max(0.0, y)); }

}  // namespace finquant::numeric
