#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "finquant/approx.hpp"
#include "finquant/error.hpp"
#include "finquant/metric.hpp"
#include "finquant/result.hpp"

namespace finquant::coefficients {

// lim n * d(beta_b, best n-point approximation) for mode Unconstrained,
// or with uniform weights for mode Uniform.
inline double benford_coefficient(const Metric& m, double b, Mode mode) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidParameter("Benford base must be > 1");
  if (mode != Mode::Unconstrained && mode != Mode::Uniform)
    throw InvalidParameter("coefficients exist for unconstrained and uniform modes");
  const bool best = mode == Mode::Unconstrained;
  const double lnb = std::log(b), bm1 = b - 1.0;
  switch (m.kind) {
    case Metric::Kind::Kolmogorov: return 0.5;
    case Metric::Kind::Levy: {
      const double scale = (std::max(b, 2.0) - 1.0) / (2.0 * bm1);
      if (best) return scale * std::log1p(bm1 * lnb / (1.0 + lnb)) / lnb;
      return scale * b * lnb / (1.0 + b * lnb);
    }
    case Metric::Kind::Kantorovich: {
      const double r = m.r;
      if (best)
        return (r + 1.0) / (2.0 * bm1 * std::pow(lnb, 1.0 / r)) *
               std::pow(std::expm1(r / (r + 1.0) * lnb) / r, 1.0 + 1.0 / r);
      // (b^r - 1)^{1/r} written as b (1 - b^{-r})^{1/r} so large b does not overflow
      return std::pow(lnb, 1.0 - 1.0 / r) * b / (2.0 * bm1) *
             std::pow(-std::expm1(-r * lnb) / (r * (r + 1.0)), 1.0 / r);
    }
    case Metric::Kind::FortetMourier: break;
  }
  throw InvalidParameter("no coefficient for this metric");
}

// Limit of the coefficient as b -> 1, and of the rescaled coefficient as b -> inf.
struct Limits {
  double near_one;
  double large_base;
  std::string scaling;  // factor applied before b -> inf
};

inline Limits limiting_behavior(const Metric& m, Mode mode) {
  if (mode != Mode::Unconstrained && mode != Mode::Uniform)
    throw InvalidParameter("limits exist for unconstrained and uniform modes");
  switch (m.kind) {
    case Metric::Kind::Levy:
    case Metric::Kind::Kolmogorov: return {0.5, 0.5, "1"};
    case Metric::Kind::Kantorovich: {
      const double r = m.r;
      const double near = 0.5 * std::pow(r + 1.0, -1.0 / r);
      if (mode == Mode::Unconstrained)
        return {near, 0.5 * (r + 1.0) * std::pow(r, -(r + 1.0) / r), "(log b)^(1/r)"};
      return {near, 0.5 * std::pow(r * (r + 1.0), -1.0 / r), "(log b)^(1/r-1)"};
    }
    case Metric::Kind::FortetMourier: break;
  }
  throw InvalidParameter("no coefficient for this metric");
}

struct CoefficientPoint {
  std::size_t n;
  double distance;
  double scaled;  // n^exponent * distance
};

inline std::vector<CoefficientPoint> estimate_coefficient(const Dist& mu, const Metric& m, Mode mode,
                                                          const std::vector<std::size_t>& ns,
                                                          double exponent = 1.0) {
  std::vector<CoefficientPoint> out;
  for (std::size_t n : ns) {
    const double d = solve(mu, m, mode, n).distance;
    out.push_back({n, d, std::pow(static_cast<double>(n), exponent) * d});
  }
  return out;
}

}  // namespace finquant::coefficients
