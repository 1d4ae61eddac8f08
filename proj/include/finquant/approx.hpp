#pragma once

#include <vector>

#include "finquant/dist.hpp"
#include "finquant/kantorovich.hpp"
#include "finquant/kolmogorov.hpp"
#include "finquant/levy.hpp"
#include "finquant/metric.hpp"
#include "finquant/result.hpp"

namespace finquant {

// One entry point for all metrics and modes. `given` holds the fixed positions
// or weights in the two constrained modes and is ignored otherwise. `opt`
// limits the alternating iteration used for d_r on general distributions.
inline ApproxResult solve(const Dist& mu, const Metric& metric, Mode mode, std::size_t n,
                          const std::vector<double>& given = {}, kantorovich::SolverOptions opt = {}) {
  if (mode == Mode::PositionsGiven || mode == Mode::WeightsGiven) {
    if (given.empty()) throw InvalidInput("this mode needs the fixed positions or weights");
  } else if (n == 0) {
    throw InvalidParameter("n must be >= 1");
  }
  switch (metric.kind) {
    case Metric::Kind::Levy:
      switch (mode) {
        case Mode::PositionsGiven: return levy::best_given_positions(mu, given);
        case Mode::WeightsGiven: return levy::best_given_weights(mu, given);
        case Mode::Uniform: return levy::best_uniform(mu, n);
        case Mode::Unconstrained: return levy::best_unconstrained(mu, n);
      }
      break;
    case Metric::Kind::Kolmogorov:
      switch (mode) {
        case Mode::PositionsGiven: return kolmogorov::best_given_positions(mu, given);
        case Mode::WeightsGiven: return kolmogorov::best_given_weights(mu, given);
        case Mode::Uniform: return kolmogorov::best_uniform(mu, n);
        case Mode::Unconstrained: return kolmogorov::best_unconstrained(mu, n);
      }
      break;
    case Metric::Kind::Kantorovich:
      switch (mode) {
        case Mode::PositionsGiven: return kantorovich::best_given_positions(mu, given, metric.r);
        case Mode::WeightsGiven: return kantorovich::best_given_weights(mu, given, metric.r);
        case Mode::Uniform: return kantorovich::best_uniform(mu, n, metric.r);
        case Mode::Unconstrained:
          if (mu.kind() == DistKind::Benford && metric.r > 1.0)
            return kantorovich::benford_best_dr_shooting(*mu.parameter(), n, metric.r);
          return kantorovich::best_dr_general(mu, n, metric.r, opt);
      }
      break;
    case Metric::Kind::FortetMourier:
      throw InvalidParameter("Fortet-Mourier distance is available for evaluation only");
  }
  throw InvalidParameter("unsupported metric/mode combination");
}

}  // namespace finquant
