#pragma once

#include <string>
#include <vector>

#include "finquant/error.hpp"
#include "finquant/finite_measure.hpp"

namespace finquant {

enum class Mode { PositionsGiven, WeightsGiven, Uniform, Unconstrained };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::PositionsGiven: return "positions-given";
    case Mode::WeightsGiven: return "weights-given";
    case Mode::Uniform: return "uniform";
    case Mode::Unconstrained: return "unconstrained";
  }
  return "";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "positions-given") return Mode::PositionsGiven;
  if (s == "weights-given") return Mode::WeightsGiven;
  if (s == "uniform") return Mode::Uniform;
  if (s == "unconstrained" || s == "best") return Mode::Unconstrained;
  throw InvalidParameter("unknown mode '" + s + "'");
}

struct Box {
  double lo;
  double hi;
  bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

// Evidence that a result is optimal. Slacks are <= 0 up to solver tolerance;
// boxes hold every optimal value of the free coordinates (positions or cuts).
struct Certificate {
  Mode mode = Mode::Unconstrained;
  double value = 0.0;  // L or K before scaling, or the d_r value
  std::vector<double> slacks;
  std::vector<Box> position_boxes;
  std::vector<Box> cut_boxes;
  bool distinct_positions = true;
  std::size_t reduced_n = 0;

  double max_slack() const {
    double m = -1e300;
    for (double s : slacks) m = std::max(m, s);
    return slacks.empty() ? 0.0 : m;
  }
};

struct Diagnostics {
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  std::string optimality = "global";  // or "stationary"
  std::string method;
};

struct ApproxResult {
  FiniteMeasure measure;
  double distance = 0.0;
  Certificate certificate;
  Diagnostics diagnostics;
};

}  // namespace finquant
