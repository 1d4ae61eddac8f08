#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

// Derivative-free pattern search over sorted vectors in [lo, hi]^n. Moves
// single coordinates, pairs of coordinates and a fixed set of random
// directions, so it also walks along the ridges of max-type objectives.
inline double pattern_search(const std::function<double(const std::vector<double>&)>& f, std::vector<double> v,
                             double lo, double hi, double step, double min_step = 1e-8) {
  const std::size_t n = v.size();
  auto clampsort = [&](std::vector<double> w) {
    for (double& x : w) x = std::clamp(x, lo, hi);
    std::sort(w.begin(), w.end());
    return w;
  };
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d(n, 0.0);
    d[i] = 1.0;
    dirs.push_back(d);
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<double> e = d, g = d;
      e[j] = 1.0;
      g[j] = -1.0;
      dirs.push_back(e);
      dirs.push_back(g);
    }
  }
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 40 && n > 2; ++k) {
    std::vector<double> d(n);
    double len = 0.0;
    for (double& c : d) {
      c = g(rng);
      len += c * c;
    }
    for (double& c : d) c /= std::sqrt(len);
    dirs.push_back(d);
  }
  v = clampsort(v);
  double best = f(v);
  while (step > min_step) {
    bool moved = false;
    for (const auto& d : dirs)
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> w = v;
        for (std::size_t i = 0; i < n; ++i) w[i] += sgn * step * d[i];
        w = clampsort(w);
        const double val = f(w);
        if (val < best) {
          best = val;
          v = w;
          moved = true;
        }
      }
    if (!moved) step *= 0.5;
  }
  return best;
}

// Cuts 0 < P_1 <= ... <= P_{n-1} < 1 turned into weights.
inline std::vector<double> weights_from_cuts(const std::vector<double>& cuts) {
  std::vector<double> p;
  double prev = 0.0;
  for (double c : cuts) {
    p.push_back(c - prev);
    prev = c;
  }
  p.push_back(1.0 - prev);
  return p;
}

// Best point of the sorted grid lo + (hi - lo) k / m in dimension d, as a
// starting point for pattern_search on objectives with plateaus.
inline std::vector<double> sorted_grid_start(const std::function<double(const std::vector<double>&)>& f,
                                             std::size_t d, double lo, double hi, std::size_t m) {
  std::vector<std::size_t> k(d, 0);
  std::vector<double> v(d), best_v(d, lo);
  double best = 1e300;
  while (true) {
    for (std::size_t i = 0; i < d; ++i) v[i] = lo + (hi - lo) * static_cast<double>(k[i]) / static_cast<double>(m);
    if (const double val = f(v); val < best) best = val, best_v = v;
    std::size_t i = d;
    while (i > 0 && k[i - 1] == m) --i;
    if (i == 0) break;
    ++k[i - 1];
    for (std::size_t j = i; j < d; ++j) k[j] = k[i - 1];
  }
  return best_v;
}
