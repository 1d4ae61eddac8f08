#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "finquant/dist.hpp"
#include "finquant/error.hpp"
#include "finquant/metric.hpp"
#include "finquant/result.hpp"

namespace finquant::config {

constexpr double kDefaultTol = 1e-12;

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline double parse_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidParameter("cannot parse " + what + " '" + s + "'");
  }
  if (used != s.size()) throw InvalidParameter("trailing characters in " + what + " '" + s + "'");
  return v;
}

inline std::size_t parse_count(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw InvalidParameter("cannot parse " + what + " '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

// One real per line; '#' starts a comment line, blank lines are skipped.
inline std::vector<double> read_data_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open data file '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v))
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": not a real number");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput("data file '" + path + "' holds no values");
  return out;
}

struct DistSpec {
  std::string family;           // benford, beta21, inverse-cantor, exponential, uniform, file
  std::vector<double> params;   // b; depth; lo, hi
  std::string path;
};

inline DistSpec parse_dist_spec(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
  const bool has_tail = colon != std::string::npos;
  DistSpec d{head, {}, {}};
  if (head == "benford") {
    if (!has_tail) throw InvalidParameter("benford needs a base, e.g. benford:10");
    const double b = parse_real(tail, "Benford base");
    if (!(b > 1.0) || !std::isfinite(b)) throw InvalidParameter("Benford base must be > 1");
    d.params = {b};
  } else if (head == "beta21" || head == "exponential") {
    if (has_tail) throw InvalidParameter(head + " takes no parameters");
  } else if (head == "inverse-cantor") {
    const std::size_t depth = has_tail ? parse_count(tail, "depth") : 20;
    if (depth < 1 || depth > 30) throw InvalidParameter("inverse-cantor depth must be in 1..30");
    d.params = {static_cast<double>(depth)};
  } else if (head == "uniform") {
    const auto comma = tail.find(',');
    if (!has_tail || comma == std::string::npos) throw InvalidParameter("uniform needs lo,hi");
    const double lo = parse_real(tail.substr(0, comma), "lower end");
    const double hi = parse_real(tail.substr(comma + 1), "upper end");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw InvalidParameter("uniform needs finite lo < hi");
    d.params = {lo, hi};
  } else if (head == "file") {
    if (tail.empty()) throw InvalidParameter("file needs a path");
    d.path = tail;
  } else {
    throw InvalidParameter("unknown distribution '" + s + "'");
  }
  return d;
}

inline std::string canonical(const DistSpec& d) {
  if (d.family == "benford") return "benford:" + fmt(d.params.at(0));
  if (d.family == "inverse-cantor") return "inverse-cantor:" + fmt(d.params.at(0));
  if (d.family == "uniform") return "uniform:" + fmt(d.params.at(0)) + "," + fmt(d.params.at(1));
  if (d.family == "file") return "file:" + d.path;
  return d.family;
}

// Samples from a file become their empirical measure on [min, max]
// (a single distinct value gets the unit interval above it).
inline Dist make_dist(const DistSpec& d) {
  if (d.family == "benford") return benford(d.params.at(0));
  if (d.family == "beta21") return beta21();
  if (d.family == "exponential") return exponential();
  if (d.family == "inverse-cantor") return inverse_cantor(static_cast<int>(d.params.at(0)));
  if (d.family == "uniform") return uniform(d.params.at(0), d.params.at(1));
  if (d.family == "file") {
    const std::vector<double> v = read_data_file(d.path);
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    const Interval s(*mn, *mx > *mn ? *mx : *mn + 1.0);
    return finite_to_dist(from_samples(v, s), s);
  }
  throw InvalidParameter("unknown distribution family '" + d.family + "'");
}

inline Metric parse_metric(const std::string& s) {
  if (s == "L" || s == "levy" || s == "dL") return Metric::levy();
  if (s == "K" || s == "dK" || s == "kolmogorov") return Metric::kolmogorov();
  if (s.size() > 1 && s[0] == 'd') return Metric::kantorovich(parse_real(s.substr(1), "order r"));
  if (s.size() > 2 && s.compare(0, 2, "fm") == 0)
    return Metric::fortet_mourier(parse_real(s.substr(2), "order r"));
  throw InvalidParameter("unknown metric '" + s + "'");
}

// "3", "1..64" or "1,2,4,8".
inline std::vector<std::size_t> parse_ns(const std::string& s) {
  std::vector<std::size_t> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const std::size_t a = parse_count(s.substr(0, dots), "n");
    const std::size_t b = parse_count(s.substr(dots + 2), "n");
    if (a > b) throw InvalidParameter("empty n range '" + s + "'");
    for (std::size_t n = a; n <= b; ++n) out.push_back(n);
  } else {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_count(tok, "n"));
  }
  if (out.empty()) throw InvalidParameter("no n given");
  for (std::size_t n : out)
    if (n == 0) throw InvalidParameter("n must be >= 1");
  return out;
}

inline std::string canonical_ns(const std::vector<std::size_t>& ns) {
  bool range = ns.size() > 2;
  for (std::size_t i = 1; i < ns.size() && range; ++i) range = ns[i] == ns[i - 1] + 1;
  if (range) return std::to_string(ns.front()) + ".." + std::to_string(ns.back());
  std::string out;
  for (std::size_t i = 0; i < ns.size(); ++i) out += (i ? "," : "") + std::to_string(ns[i]);
  return out;
}

// Tolerance default, overridable through FINQUANT_TOL.
inline double default_tol() {
  if (const char* e = std::getenv("FINQUANT_TOL")) {
    const double v = parse_real(e, "FINQUANT_TOL");
    if (!(v > 0.0)) throw InvalidParameter("FINQUANT_TOL must be positive");
    return v;
  }
  return kDefaultTol;
}

struct RunConfig {
  std::string command = "approx";
  std::string dist;        // canonical spec
  std::string metric = "levy";
  std::vector<std::size_t> ns{1};
  Mode mode = Mode::Unconstrained;
  std::vector<double> given;
  double tol = kDefaultTol;
  double exponent = 1.0;
  int max_iter = 100000;   // cap for the alternating d_r iteration
  std::string format = "json";
  std::string out;         // empty: stdout
  bool timing = false;

  bool operator==(const RunConfig&) const = default;
};

// Checks fields and rewrites dist, metric and the rest into canonical form.
inline RunConfig normalized(RunConfig c) {
  if (c.command != "approx" && c.command != "coeff") throw InvalidParameter("unknown command '" + c.command + "'");
  c.dist = canonical(parse_dist_spec(c.dist));
  c.metric = parse_metric(c.metric).name();
  if (c.ns.empty()) throw InvalidParameter("no n given");
  for (std::size_t n : c.ns)
    if (n == 0) throw InvalidParameter("n must be >= 1");
  if (c.command == "approx" && c.ns.size() != 1) throw InvalidParameter("approx takes a single n");
  if (!(c.tol > 0.0)) throw InvalidParameter("tolerance must be positive");
  if (!std::isfinite(c.exponent)) throw InvalidParameter("exponent must be finite");
  if (c.max_iter < 1) throw InvalidParameter("max_iter must be >= 1");
  if (c.format != "json" && c.format != "csv" && c.format != "text")
    throw InvalidParameter("format must be json, csv or text");
  const bool needs_given = c.mode == Mode::PositionsGiven || c.mode == Mode::WeightsGiven;
  if (needs_given && c.given.empty()) throw InvalidParameter(to_string(c.mode) + " needs --given");
  if (!needs_given) c.given.clear();
  if (needs_given) c.ns = {c.given.size()};
  return c;
}

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},  {"dist", c.dist},     {"metric", c.metric},
          {"n", canonical_ns(c.ns)}, {"mode", to_string(c.mode)}, {"given", c.given},
          {"tol", std::stod(fmt(c.tol))}, {"exponent", c.exponent}, {"max_iter", c.max_iter},
          {"format", c.format},
          {"out", c.out},          {"timing", c.timing}};
}

inline RunConfig from_json(const nlohmann::json& j) {
  try {
    RunConfig c;
    c.command = j.value("command", c.command);
    c.dist = j.at("dist").get<std::string>();
    c.metric = j.value("metric", c.metric);
    c.ns = parse_ns(j.contains("n") ? j.at("n").get<std::string>() : "1");
    c.mode = parse_mode(j.value("mode", std::string("unconstrained")));
    c.given = j.value("given", std::vector<double>{});
    c.tol = j.value("tol", kDefaultTol);
    c.exponent = j.value("exponent", 1.0);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.format = j.value("format", c.format);
    c.out = j.value("out", c.out);
    c.timing = j.value("timing", false);
    return normalized(c);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("bad config: ") + e.what());
  }
}

inline std::string serialize(const RunConfig& c) { return to_json(c).dump(); }

inline RunConfig parse(const std::string& s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("config is not JSON: ") + e.what());
  }
  return from_json(j);
}

inline std::string canonical_config(const std::string& s) { return serialize(parse(s)); }

}  // namespace finquant::config
