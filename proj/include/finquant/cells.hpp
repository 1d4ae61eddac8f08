#pragma once

#include <cmath>
#include <concepts>

#include "finquant/dist.hpp"
#include "finquant/error.hpp"
#include "finquant/numeric.hpp"

namespace finquant {

// Non-decreasing f on the extended reals, given by its one-sided limits.
template <class F>
concept MonotoneFunction = requires(const F& f, double x) {
  { f.left(x) } -> std::convertible_to<double>;
  { f.right(x) } -> std::convertible_to<double>;
};

struct CdfOf {
  const Dist* mu;
  double left(double x) const { return mu->cdf_left(x); }
  double right(double x) const { return mu->cdf(x); }
};

struct QuantileOf {
  const Dist* mu;
  double left(double y) const { return mu->quantile_left(y); }
  double right(double y) const { return mu->quantile(y); }
};

template <MonotoneFunction F>
struct Scaled {
  F f;
  double factor;
  double left(double x) const { return factor * f.left(x); }
  double right(double x) const { return factor * f.right(x); }
};

// Minimum of the cell function together with the interval of minimisers.
struct CellOptimum {
  double value;
  double lo;
  double hi;
};

namespace detail {

template <class Pred>
double smallest_nonneg(Pred&& pred, double guess, double tol) {
  if (pred(0.0)) return 0.0;
  double hi = (std::isfinite(guess) && guess > 0.0) ? guess : 1.0;
  if (!pred(hi)) {
    auto grown = numeric::expand_until(pred, hi * 2.0, 200);
    if (!grown) throw InvalidInput("cell function unbounded on this interval");
    hi = *grown;
  }
  return numeric::threshold(pred, 0.0, hi, tol);
}

inline void check_span(Span I) {
  if (std::isnan(I.lo) || std::isnan(I.hi) || !(I.lo <= I.hi))
    throw InvalidInput("cell needs lo <= hi");
}

}  // namespace detail

// inf{ y >= 0 : f_-(sup I - y) - y <= x <= f_+(inf I + y) + y }
template <MonotoneFunction F>
double ell(const F& f, Span I, double x, double tol = numeric::kRootTol) {
  detail::check_span(I);
  if (std::isnan(x)) throw InvalidInput("NaN argument");
  auto above = [&](double y) { return f.left(I.hi - y) - y <= x; };
  auto below = [&](double y) { return x <= f.right(I.lo + y) + y; };
  const double ya = detail::smallest_nonneg(above, f.left(I.hi) - x, tol);
  const double yb = detail::smallest_nonneg(below, x - f.right(I.lo), tol);
  return std::max(ya, yb);
}

// min over x of ell(f, I, x), with the set of minimisers.
template <MonotoneFunction F>
CellOptimum ell_star(const F& f, Span I, double tol = numeric::kRootTol) {
  detail::check_span(I);
  auto meets = [&](double y) { return f.left(I.hi - y) - y <= f.right(I.lo + y) + y; };
  const double v = detail::smallest_nonneg(meets, 0.5 * (f.left(I.hi) - f.right(I.lo)), tol);
  return {v, f.left(I.hi - v) - v, f.right(I.lo + v) + v};
}

// max{ |f_-(x) - inf I|, |f_+(x) - sup I| }
template <MonotoneFunction F>
double kappa(const F& f, Span I, double x) {
  detail::check_span(I);
  return std::max(std::abs(f.left(x) - I.lo), std::abs(f.right(x) - I.hi));
}

}  // namespace finquant
