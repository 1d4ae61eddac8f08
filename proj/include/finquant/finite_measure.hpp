#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "finquant/error.hpp"

namespace finquant {

// Closed interval with lo < hi; hi may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  Interval() = default;
  Interval(double a, double b) : lo(a), hi(b) {
    if (std::isnan(a) || std::isnan(b) || !(a < b) || std::isinf(a))
      throw InvalidParameter("interval needs finite lo < hi");
  }
  bool bounded() const { return std::isfinite(hi); }
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return std::min(hi, std::max(lo, x)); }
  bool operator==(const Interval&) const = default;
};

// Closed cell [lo, hi] with lo <= hi, either end possibly infinite.
struct Span {
  double lo;
  double hi;
};

// delta_x^p: positions x_1 <= ... <= x_n, weights p on the simplex.
// Cumulative weights P_0 = 0, ..., P_n = 1 are cached.
class FiniteMeasure {
 public:
  FiniteMeasure() = default;

  FiniteMeasure(std::vector<double> x, std::vector<double> p) : x_(std::move(x)), p_(std::move(p)) {
    if (x_.empty()) throw InvalidInput("finite measure needs at least one atom");
    if (x_.size() != p_.size()) throw InvalidInput("positions and weights differ in length");
    double sum = 0.0;
    for (std::size_t j = 0; j < x_.size(); ++j) {
      if (!std::isfinite(x_[j])) throw InvalidInput("positions must be finite");
      if (j > 0 && x_[j] < x_[j - 1]) throw InvalidInput("positions must be non-decreasing");
      if (!(p_[j] >= 0.0) || !std::isfinite(p_[j])) throw InvalidInput("weights must be non-negative");
      sum += p_[j];
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("weights must sum to 1");
    build_cumulative();
  }

  static FiniteMeasure uniform(std::vector<double> x) {
    std::vector<double> p(x.size(), x.empty() ? 0.0 : 1.0 / static_cast<double>(x.size()));
    FiniteMeasure m;
    m.x_ = std::move(x);
    m.p_ = std::move(p);
    m.validate_positions();
    m.P_.resize(m.x_.size() + 1);
    for (std::size_t j = 0; j <= m.x_.size(); ++j)
      m.P_[j] = static_cast<double>(j) / static_cast<double>(m.x_.size());
    return m;
  }

  // Interior cuts P_1..P_{n-1}. Rounding-level decreases are clamped away.
  static FiniteMeasure from_cuts(std::vector<double> x, const std::vector<double>& cuts) {
    if (x.empty() || cuts.size() + 1 != x.size())
      throw InvalidInput("need n positions and n-1 cuts");
    FiniteMeasure m;
    m.x_ = std::move(x);
    m.validate_positions();
    const std::size_t n = m.x_.size();
    m.P_.assign(n + 1, 0.0);
    m.P_[n] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
      double c = cuts[j - 1];
      if (std::isnan(c) || c < -1e-12 || c > 1.0 + 1e-12) throw InvalidInput("cut outside [0,1]");
      if (c < m.P_[j - 1] - 1e-12) throw InvalidInput("cuts must be non-decreasing");
      m.P_[j] = std::min(1.0, std::max(m.P_[j - 1], c));
    }
    m.p_.resize(n);
    for (std::size_t j = 0; j < n; ++j) m.p_[j] = m.P_[j + 1] - m.P_[j];
    return m;
  }

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& p() const { return p_; }
  // P()[j] = p_1 + ... + p_j, j = 0..n
  const std::vector<double>& P() const { return P_; }
  std::vector<double> cuts() const { return {P_.begin() + 1, P_.end() - 1}; }

  bool distinct_positions() const {
    for (std::size_t j = 1; j < x_.size(); ++j)
      if (!(x_[j] > x_[j - 1])) return false;
    return true;
  }

  // Same measure with coincident positions combined.
  FiniteMeasure merged() const {
    FiniteMeasure m;
    m.P_.push_back(0.0);
    for (std::size_t j = 0; j < x_.size(); ++j) {
      if (!m.x_.empty() && x_[j] == m.x_.back()) {
        m.P_.back() = P_[j + 1];
      } else {
        m.x_.push_back(x_[j]);
        m.P_.push_back(P_[j + 1]);
      }
    }
    m.p_.resize(m.x_.size());
    for (std::size_t j = 0; j < m.x_.size(); ++j) m.p_[j] = m.P_[j + 1] - m.P_[j];
    return m;
  }

  FiniteMeasure without_zero_weights() const {
    FiniteMeasure m;
    m.P_.push_back(0.0);
    for (std::size_t j = 0; j < x_.size(); ++j) {
      if (!(p_[j] > 0.0)) continue;
      m.x_.push_back(x_[j]);
      m.P_.push_back(P_[j + 1]);
    }
    m.P_.back() = 1.0;
    m.p_.resize(m.x_.size());
    for (std::size_t j = 0; j < m.x_.size(); ++j) m.p_[j] = m.P_[j + 1] - m.P_[j];
    return m;
  }

  // Distribution function of the measure itself.
  double cdf(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return P_[static_cast<std::size_t>(it - x_.begin())];
  }

 private:
  void validate_positions() const {
    if (x_.empty()) throw InvalidInput("finite measure needs at least one atom");
    for (std::size_t j = 0; j < x_.size(); ++j) {
      if (!std::isfinite(x_[j])) throw InvalidInput("positions must be finite");
      if (j > 0 && x_[j] < x_[j - 1]) throw InvalidInput("positions must be non-decreasing");
    }
  }

  void build_cumulative() {
    P_.assign(x_.size() + 1, 0.0);
    for (std::size_t j = 0; j < x_.size(); ++j) P_[j + 1] = std::min(1.0, P_[j] + p_[j]);
    P_.back() = 1.0;
  }

  std::vector<double> x_;
  std::vector<double> p_;
  std::vector<double> P_;
};

}  // namespace finquant
