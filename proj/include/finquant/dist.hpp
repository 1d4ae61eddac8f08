#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "finquant/error.hpp"
#include "finquant/finite_measure.hpp"
#include "finquant/numeric.hpp"

namespace finquant {

struct Atom {
  double position;
  double mass;
};

enum class DistKind { Benford, Beta21, InverseCantor, Exponential, Piecewise, Transformed };

// Interface for a probability measure on an interval. Callers go through Dist,
// which handles arguments outside the support and the extended-real conventions.
class DistModel {
 public:
  virtual ~DistModel() = default;
  virtual DistKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual Interval support() const = 0;
  // x in [lo, hi)
  virtual double cdf(double x) const = 0;
  virtual double atom_mass(double) const { return 0.0; }
  virtual double cdf_left(double x) const { return cdf(x) - atom_mass(x); }
  // y in [0, 1): upper quantile sup{x : F(x) <= y}
  virtual double quantile(double y) const = 0;
  // y in (0, 1]: left limit of the upper quantile
  virtual double quantile_left(double y) const = 0;
  // Integral of Q^k over [a, b] for k = 1, 2 when known exactly.
  virtual std::optional<double> quantile_moment(int, double, double) const { return std::nullopt; }
  virtual bool has_atoms() const { return false; }
  virtual std::vector<Atom> atoms() const { return {}; }
  virtual std::optional<double> parameter() const { return std::nullopt; }
  virtual const FiniteMeasure* finite() const { return nullptr; }
  // Optimal quantizers are known to be unique.
  virtual bool unique_quantizers() const { return false; }
};

class Dist {
 public:
  Dist() = default;
  explicit Dist(std::shared_ptr<const DistModel> m) : m_(std::move(m)) {
    if (!m_) throw InvalidInput("null distribution model");
  }

  const DistModel& model() const { return *m_; }
  DistKind kind() const { return m_->kind(); }
  std::string name() const { return m_->name(); }
  Interval support() const { return m_->support(); }

  double cdf(double x) const {
    check(x);
    const Interval s = m_->support();
    if (x < s.lo) return 0.0;
    if (x >= s.hi) return 1.0;
    return m_->cdf(x);
  }

  double cdf_left(double x) const {
    check(x);
    const Interval s = m_->support();
    if (x <= s.lo) return 0.0;
    if (x > s.hi || x == numeric::kInf) return 1.0;
    if (x == s.hi) return 1.0 - m_->atom_mass(x);
    return std::max(0.0, m_->cdf_left(x));
  }

  double atom_mass(double x) const {
    check(x);
    const Interval s = m_->support();
    if (x < s.lo || x > s.hi || std::isinf(x)) return 0.0;
    return m_->atom_mass(x);
  }

  double quantile(double y) const {
    check(y);
    if (y < 0.0) return -numeric::kInf;
    if (y >= 1.0) return numeric::kInf;
    return m_->quantile(y);
  }

  double quantile_left(double y) const {
    check(y);
    if (y <= 0.0) return -numeric::kInf;
    if (y > 1.0) return numeric::kInf;
    return m_->quantile_left(y);
  }

  std::optional<double> quantile_moment(int k, double a, double b) const {
    return m_->quantile_moment(k, a, b);
  }
  bool has_atoms() const { return m_->has_atoms(); }
  std::vector<Atom> atoms() const { return m_->atoms(); }
  std::optional<double> parameter() const { return m_->parameter(); }
  const FiniteMeasure* finite() const { return m_->finite(); }
  bool unique_quantizers() const { return m_->unique_quantizers(); }

  // Scale factor max{1, length}/length turning d_L(F, G) into d_L(mu, nu).
  double omega() const {
    const Interval s = support();
    if (!s.bounded()) return 1.0;
    return std::max(1.0, s.length()) / s.length();
  }

  // Normalising length for d_r (1 on unbounded supports).
  double norm_length() const {
    const Interval s = support();
    return s.bounded() ? s.length() : 1.0;
  }

 private:
  static void check(double v) {
    if (std::isnan(v)) throw InvalidInput("NaN argument");
  }
  std::shared_ptr<const DistModel> m_;
};

namespace detail {

class BenfordModel final : public DistModel {
 public:
  explicit BenfordModel(double b) : b_(b), lnb_(std::log(b)) {
    if (!(b > 1.0) || !std::isfinite(b)) throw InvalidParameter("Benford base must be > 1");
  }
  DistKind kind() const override { return DistKind::Benford; }
  std::string name() const override { return "benford:" + fmt(b_); }
  Interval support() const override { return {1.0, b_}; }
  double cdf(double x) const override { return std::min(1.0, std::log(x) / lnb_); }
  double quantile(double y) const override { return std::min(b_, std::exp(y * lnb_)); }
  double quantile_left(double y) const override { return std::min(b_, std::exp(y * lnb_)); }
  std::optional<double> quantile_moment(int k, double a, double b) const override {
    if (!(b > a)) return 0.0;
    const double c = k * lnb_;
    return std::exp(a * c) * std::expm1((b - a) * c) / c;
  }
  std::optional<double> parameter() const override { return b_; }
  bool unique_quantizers() const override { return true; }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

 private:
  double b_, lnb_;
};

class Beta21Model final : public DistModel {
 public:
  DistKind kind() const override { return DistKind::Beta21; }
  std::string name() const override { return "beta21"; }
  Interval support() const override { return {0.0, 1.0}; }
  double cdf(double x) const override { return x * x; }
  double quantile(double y) const override { return std::sqrt(y); }
  double quantile_left(double y) const override { return std::sqrt(y); }
  std::optional<double> quantile_moment(int k, double a, double b) const override {
    if (!(b > a)) return 0.0;
    if (k == 1) return 2.0 / 3.0 * (b * std::sqrt(b) - a * std::sqrt(a));
    return 0.5 * (b - a) * (b + a);
  }
  bool unique_quantizers() const override { return true; }
};

class ExponentialModel final : public DistModel {
 public:
  DistKind kind() const override { return DistKind::Exponential; }
  std::string name() const override { return "exponential"; }
  Interval support() const override { return {0.0, numeric::kInf}; }
  double cdf(double x) const override { return -std::expm1(-x); }
  double quantile(double y) const override { return -std::log1p(-y); }
  double quantile_left(double y) const override {
    return y >= 1.0 ? numeric::kInf : -std::log1p(-y);
  }
  std::optional<double> quantile_moment(int k, double a, double b) const override {
    if (!(b > a)) return 0.0;
    return k == 1 ? first(b) - first(a) : second(b) - second(a);
  }

 private:
  static double first(double y) {
    if (y >= 1.0) return 1.0;
    return y + (1.0 - y) * std::log1p(-y);
  }
  static double second(double y) {
    if (y >= 1.0) return 2.0;
    const double s = 1.0 - y, l = std::log1p(-y);
    return 2.0 - s * (l * l - 2.0 * l + 2.0);
  }
};

// mu = lambda o C^{-1} for the Cantor function C. Every dyadic rational in (0,1)
// k/2^m (k odd) is an atom of mass 3^{-m}; the quantile function is C itself.
class InverseCantorModel final : public DistModel {
 public:
  explicit InverseCantorModel(int depth) : depth_(depth) {
    if (depth < 1 || depth > 30) throw InvalidParameter("inverse Cantor depth must be in 1..30");
  }
  DistKind kind() const override { return DistKind::InverseCantor; }
  std::string name() const override { return "inverse-cantor:" + std::to_string(depth_); }
  Interval support() const override { return {0.0, 1.0}; }

  double cdf(double x) const override { return binary(x).value; }
  double cdf_left(double x) const override { return binary(x).left; }
  double atom_mass(double x) const override { return binary(x).mass; }
  double quantile(double y) const override { return cantor(y); }
  double quantile_left(double y) const override { return y >= 1.0 ? 1.0 : cantor(y); }

  std::optional<double> quantile_moment(int k, double a, double b) const override {
    if (!(b > a)) return 0.0;
    auto [g1, h1] = antiderivatives(b);
    auto [g0, h0] = antiderivatives(a);
    return k == 1 ? g1 - g0 : h1 - h0;
  }

  bool has_atoms() const override { return true; }
  std::vector<Atom> atoms() const override {
    std::vector<Atom> out;
    const std::uint64_t top = std::uint64_t{1} << depth_;
    out.reserve(top - 1);
    for (std::uint64_t i = 1; i < top; ++i) {
      int m = depth_;
      std::uint64_t k = i;
      while ((k & 1u) == 0) {
        k >>= 1;
        --m;
      }
      out.push_back({std::ldexp(static_cast<double>(i), -depth_), std::pow(3.0, -m)});
    }
    return out;
  }
  std::optional<double> parameter() const override { return depth_; }

  // Cantor function, evaluated from the exact ternary expansion of y.
  static double cantor(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    Ternary t = ternary(y);
    double acc = 0.0, scale = 0.5;
    for (int k = 0; k < t.count; ++k, scale *= 0.5) {
      if (t.digit[k] == 1) return acc + scale;
      if (t.digit[k] == 2) acc += scale;
    }
    return acc;
  }

  // (integral of C, integral of C^2) over [0, y]
  static std::pair<double, double> antiderivatives(double y) {
    if (y <= 0.0) return {0.0, 0.0};
    if (y >= 1.0) return {0.5, 0.3};
    Ternary t = ternary(y);
    double g = 0.0, h = 0.0;
    for (int k = t.count - 1; k >= 0; --k) {
      const double r = t.rest[k];
      switch (t.digit[k]) {
        case 0:
          g = g / 6.0;
          h = h / 12.0;
          break;
        case 1:
          g = 1.0 / 12.0 + r / 6.0;
          h = 1.0 / 40.0 + r / 12.0;
          break;
        default:
          h = 1.0 / 40.0 + 1.0 / 12.0 + r / 12.0 + g / 6.0 + h / 12.0;
          g = 0.25 + r / 6.0 + g / 6.0;
          break;
      }
    }
    return {g, h};
  }

 private:
  static constexpr int kDigits = 72;
  struct Ternary {
    int digit[kDigits];
    double rest[kDigits];  // 3^k y - (first k digits), in [0, 1]
    int count = 0;
  };

  static Ternary ternary(double y) {
    Ternary t;
    int e = 0;
    const double f = std::frexp(y, &e);
    const int shift = 53 - e;
    if (shift <= 124) {
      using u128 = unsigned __int128;
      u128 r = static_cast<u128>(static_cast<std::uint64_t>(std::ldexp(f, 53)));
      for (int k = 0; k < kDigits; ++k) {
        r *= 3u;
        const u128 d = r >> shift;
        r -= d << shift;
        t.digit[k] = static_cast<int>(d);
        t.rest[k] = std::ldexp(static_cast<double>(r), -shift);
        t.count = k + 1;
        if (r == 0) break;
      }
    } else {
      long double v = y;
      for (int k = 0; k < kDigits; ++k) {
        v *= 3.0L;
        const int d = v >= 2.0L ? 2 : (v >= 1.0L ? 1 : 0);
        v -= d;
        t.digit[k] = d;
        t.rest[k] = static_cast<double>(v);
        t.count = k + 1;
      }
    }
    return t;
  }

  struct Binary {
    double value, left, mass;
  };

  // F(x) from the binary digits of x; doubling a double is exact.
  static Binary binary(double x) {
    if (x <= 0.0) return {0.0, 0.0, 0.0};
    if (x >= 1.0) return {1.0, 1.0, 0.0};
    double v = x, sum = 0.0, prefix = 0.0, third = 1.0;
    int last = 0;
    for (int k = 1; v > 0.0 && k <= 1100; ++k) {
      v *= 2.0;
      third /= 3.0;
      if (v >= 1.0) {
        v -= 1.0;
        prefix = sum;
        sum += 2.0 * third;
        last = k;
      }
    }
    const double mass = std::pow(3.0, -last);
    return {sum, prefix + mass, mass};
  }

  int depth_;
};

// Piecewise-linear distribution function with jumps at the knots.
// On (t_i, t_{i+1}) F rises linearly from right_[i] to left_[i+1].
class PiecewiseModel final : public DistModel {
 public:
  PiecewiseModel(Interval support, std::vector<double> knots, std::vector<double> left,
                 std::vector<double> right, std::string name,
                 std::optional<FiniteMeasure> finite = std::nullopt)
      : s_(support), t_(std::move(knots)), fl_(std::move(left)), fr_(std::move(right)),
        name_(std::move(name)), finite_(std::move(finite)) {
    const std::size_t k = t_.size();
    if (k == 0 || fl_.size() != k || fr_.size() != k) throw InvalidInput("bad piecewise knots");
    for (std::size_t i = 0; i < k; ++i) {
      if (!std::isfinite(t_[i]) || t_[i] < s_.lo || t_[i] > s_.hi)
        throw InvalidInput("knot outside support");
      if (i > 0 && !(t_[i] > t_[i - 1])) throw InvalidInput("knots must increase");
      if (!(fl_[i] <= fr_[i]) || (i > 0 && fr_[i - 1] > fl_[i]))
        throw InvalidInput("distribution function must be non-decreasing");
    }
    if (fl_[0] != 0.0 || std::abs(fr_[k - 1] - 1.0) > 1e-12)
      throw InvalidInput("distribution function must run from 0 to 1");
    fr_[k - 1] = 1.0;
  }

  DistKind kind() const override { return DistKind::Piecewise; }
  std::string name() const override { return name_; }
  Interval support() const override { return s_; }

  double cdf(double x) const override {
    if (x < t_.front()) return 0.0;
    if (x >= t_.back()) return 1.0;
    const std::size_t i = segment(x);
    if (x == t_[i]) return fr_[i];
    const double w = (x - t_[i]) / (t_[i + 1] - t_[i]);
    return fr_[i] + (fl_[i + 1] - fr_[i]) * w;
  }
  double cdf_left(double x) const override {
    if (x <= t_.front()) return x == t_.front() ? fl_[0] : 0.0;
    if (x > t_.back()) return 1.0;
    auto it = std::lower_bound(t_.begin(), t_.end(), x);
    if (it != t_.end() && *it == x) return fl_[static_cast<std::size_t>(it - t_.begin())];
    return cdf(x);
  }
  double atom_mass(double x) const override {
    auto it = std::lower_bound(t_.begin(), t_.end(), x);
    if (it == t_.end() || *it != x) return 0.0;
    const std::size_t i = static_cast<std::size_t>(it - t_.begin());
    return fr_[i] - fl_[i];
  }

  double quantile(double y) const override {
    // largest i with F(t_i) <= y
    auto it = std::upper_bound(fr_.begin(), fr_.end(), y);
    if (it == fr_.begin()) return t_.front();
    const std::size_t i = static_cast<std::size_t>(it - fr_.begin()) - 1;
    if (i + 1 >= t_.size()) return t_.back();
    if (fl_[i + 1] <= y) return t_[i + 1];
    const double w = (y - fr_[i]) / (fl_[i + 1] - fr_[i]);
    return t_[i] + w * (t_[i + 1] - t_[i]);
  }

  double quantile_left(double y) const override {
    // smallest i with F(t_i) >= y
    auto it = std::lower_bound(fr_.begin(), fr_.end(), y);
    if (it == fr_.end()) return t_.back();
    const std::size_t i = static_cast<std::size_t>(it - fr_.begin());
    if (i == 0 || fl_[i] < y) return t_[i];
    if (fl_[i] == y) return t_[i];
    const double w = (y - fr_[i - 1]) / (fl_[i] - fr_[i - 1]);
    return t_[i - 1] + w * (t_[i] - t_[i - 1]);
  }

  std::optional<double> quantile_moment(int k, double a, double b) const override {
    if (!(b > a)) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      // jump piece
      total += overlap(a, b, fl_[i], fr_[i], t_[i], t_[i], k);
      if (i + 1 < t_.size()) total += overlap(a, b, fr_[i], fl_[i + 1], t_[i], t_[i + 1], k);
    }
    return total;
  }

  bool has_atoms() const override {
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (fr_[i] > fl_[i]) return true;
    return false;
  }
  std::vector<Atom> atoms() const override {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (fr_[i] > fl_[i]) out.push_back({t_[i], fr_[i] - fl_[i]});
    return out;
  }
  const FiniteMeasure* finite() const override { return finite_ ? &*finite_ : nullptr; }
  bool unique_quantizers() const override {
    return t_.size() == 2 && t_.front() == s_.lo && t_.back() == s_.hi && !has_atoms();
  }

 private:
  std::size_t segment(double x) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), x);
    return static_cast<std::size_t>(it - t_.begin()) - 1;
  }

  // Integral of Q^k over [a,b] intersected with [y0,y1], where Q runs linearly from q0 to q1.
  static double overlap(double a, double b, double y0, double y1, double q0, double q1, int k) {
    const double u = std::max(a, y0), v = std::min(b, y1);
    if (!(v > u) || !(y1 > y0)) return 0.0;
    const double qu = q0 + (q1 - q0) * (u - y0) / (y1 - y0);
    const double qv = q0 + (q1 - q0) * (v - y0) / (y1 - y0);
    if (k == 1) return (v - u) * 0.5 * (qu + qv);
    return (v - u) * (qu * qu + qu * qv + qv * qv) / 3.0;
  }

  Interval s_;
  std::vector<double> t_, fl_, fr_;
  std::string name_;
  std::optional<FiniteMeasure> finite_;
};

// Image of a base distribution under an increasing continuous bijection.
class TransformedModel final : public DistModel {
 public:
  TransformedModel(Dist base, std::function<double(double)> fwd, std::function<double(double)> inv,
                   std::string name)
      : base_(std::move(base)), fwd_(std::move(fwd)), inv_(std::move(inv)), name_(std::move(name)) {
    const Interval s = base_.support();
    s_ = Interval(fwd_(s.lo), s.bounded() ? fwd_(s.hi) : numeric::kInf);
  }
  DistKind kind() const override { return DistKind::Transformed; }
  std::string name() const override { return name_; }
  Interval support() const override { return s_; }
  double cdf(double z) const override { return base_.cdf(inv_(z)); }
  double cdf_left(double z) const override { return base_.cdf_left(inv_(z)); }
  double atom_mass(double z) const override { return base_.atom_mass(inv_(z)); }
  double quantile(double y) const override { return std::min(s_.hi, fwd_(base_.quantile(y))); }
  double quantile_left(double y) const override {
    return std::min(s_.hi, fwd_(base_.quantile_left(y)));
  }
  bool has_atoms() const override { return base_.has_atoms(); }
  std::vector<Atom> atoms() const override {
    auto a = base_.atoms();
    for (auto& at : a) at.position = fwd_(at.position);
    return a;
  }

 private:
  Dist base_;
  std::function<double(double)> fwd_, inv_;
  std::string name_;
  Interval s_;
};

}  // namespace detail

inline Dist benford(double b) { return Dist(std::make_shared<detail::BenfordModel>(b)); }
inline Dist beta21() { return Dist(std::make_shared<detail::Beta21Model>()); }
inline Dist exponential() { return Dist(std::make_shared<detail::ExponentialModel>()); }
inline Dist inverse_cantor(int depth = 20) {
  return Dist(std::make_shared<detail::InverseCantorModel>(depth));
}

struct UniformPiece {
  double lo, hi, mass;
};

// Mixture of point masses and uniform pieces on the given support.
inline Dist mixture(Interval support, const std::vector<Atom>& atoms,
                    const std::vector<UniformPiece>& pieces, std::string name = "mixture") {
  std::vector<double> knots;
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.mass >= 0.0)) throw InvalidInput("negative atom mass");
    knots.push_back(a.position);
    total += a.mass;
  }
  for (const auto& p : pieces) {
    if (!(p.hi > p.lo) || !(p.mass >= 0.0)) throw InvalidInput("bad uniform piece");
    knots.push_back(p.lo);
    knots.push_back(p.hi);
    total += p.mass;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("mixture masses must sum to 1");
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> fl(knots.size()), fr(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double t = knots[i];
    double cont = 0.0, jump = 0.0, below = 0.0;
    for (const auto& p : pieces) cont += p.mass * std::clamp((t - p.lo) / (p.hi - p.lo), 0.0, 1.0);
    for (const auto& a : atoms) {
      if (a.position < t) below += a.mass;
      if (a.position == t) jump += a.mass;
    }
    fl[i] = std::min(1.0, cont + below);
    fr[i] = std::min(1.0, cont + below + jump);
  }
  fl[0] = 0.0;
  return Dist(std::make_shared<detail::PiecewiseModel>(support, std::move(knots), std::move(fl),
                                                       std::move(fr), std::move(name)));
}

inline Dist uniform(double lo, double hi) {
  Interval s(lo, hi);
  char buf[80];
  std::snprintf(buf, sizeof buf, "uniform:%.12g,%.12g", lo, hi);
  return mixture(s, {}, {{lo, hi, 1.0}}, buf);
}

// The finite measure as a distribution on the given support.
inline Dist finite_to_dist(const FiniteMeasure& nu, Interval support) {
  const FiniteMeasure m = nu.merged();
  std::vector<double> knots = m.x(), fl(m.size()), fr(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    fl[i] = m.P()[i];
    fr[i] = m.P()[i + 1];
  }
  return Dist(std::make_shared<detail::PiecewiseModel>(support, std::move(knots), std::move(fl),
                                                       std::move(fr), "finite", nu));
}

// Image of mu under x -> x^r (support inside [0, inf)).
inline Dist power_pushforward(const Dist& mu, double r) {
  if (!(r >= 1.0)) throw InvalidParameter("order r must be >= 1");
  if (mu.support().lo < 0.0) throw InvalidInput("power pushforward needs a non-negative support");
  return Dist(std::make_shared<detail::TransformedModel>(
      mu, [r](double x) { return std::pow(x, r); }, [r](double z) { return std::pow(z, 1.0 / r); },
      mu.name() + "^" + detail::BenfordModel::fmt(r)));
}

// Empirical measure: atoms at the distinct sample values, weight = multiplicity / count.
inline FiniteMeasure from_samples(std::vector<double> data, Interval support) {
  if (data.empty()) throw InvalidInput("empty sample");
  for (double v : data)
    if (!std::isfinite(v) || !support.contains(v)) throw InvalidInput("sample value outside the support");
  std::sort(data.begin(), data.end());
  return FiniteMeasure::uniform(std::move(data)).merged();
}

// Base-b significand b^{frac(log_b |x|)} in [1, b); 0 maps to 0.
inline double significand(double x, double b) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidParameter("significand base must be > 1");
  if (!std::isfinite(x)) throw InvalidInput("significand of a non-finite value");
  if (x == 0.0) return 0.0;
  const double a = std::abs(x);
  const double k = std::floor(std::log(a) / std::log(b));
  double s = a / std::pow(b, k);
  if (s >= b) s /= b;
  if (s < 1.0) s *= b;
  if (s >= b) s = 1.0;
  return s;
}

inline std::vector<double> significand(const std::vector<double>& data, double b) {
  std::vector<double> out;
  out.reserve(data.size());
  for (double v : data) out.push_back(significand(v, b));
  return out;
}

}  // namespace finquant
