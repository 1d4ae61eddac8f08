#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "finquant/config.hpp"
#include "finquant/metric.hpp"
#include "finquant/result.hpp"

namespace finquant::report {

using nlohmann::json;

// Doubles are printed with 12 significant digits so that reports are
// byte-identical across runs; infinite box ends become "inf" / "-inf".
inline json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return std::stod(config::fmt(v));
}

inline json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double d : v) a.push_back(num(d));
  return a;
}

inline json boxes(const std::vector<Box>& v) {
  json a = json::array();
  for (const Box& b : v) a.push_back(json::array({num(b.lo), num(b.hi)}));
  return a;
}

// Certificate slacks are accepted when they do not exceed the run tolerance.
inline bool certificate_ok(const Certificate& c, double tol) { return c.max_slack() <= tol; }

inline json to_json(const config::RunConfig& cfg, const Metric& metric, const ApproxResult& r,
                    double wall_ms) {
  const auto& m = r.measure;
  json cert = {{"mode", to_string(r.certificate.mode)},
               {"L_or_K", metric.kind == Metric::Kind::Kantorovich ? json(nullptr) : num(r.certificate.value)},
               {"slacks", nums(r.certificate.slacks)},
               {"max_slack", num(r.certificate.max_slack())},
               {"satisfied", certificate_ok(r.certificate, cfg.tol)},
               {"position_boxes", boxes(r.certificate.position_boxes)},
               {"cut_boxes", boxes(r.certificate.cut_boxes)},
               {"distinct_positions", r.certificate.distinct_positions},
               {"reduced_n", r.certificate.reduced_n}};
  json diag = {{"iterations", r.diagnostics.iterations},
               {"residual", num(r.diagnostics.residual)},
               {"wall_time_ms", num(wall_ms)},  // NaN when untimed -> null
               {"converged", r.diagnostics.converged},
               {"optimality", r.diagnostics.optimality},
               {"method", r.diagnostics.method}};
  return {{"config", config::to_json(cfg)},
          {"result", {{"x", nums(m.x())}, {"p", nums(m.p())}, {"P", nums(m.P())}, {"distance", num(r.distance)}}},
          {"certificate", cert},
          {"diagnostics", diag}};
}

inline std::string g12(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return config::fmt(v);
}

inline std::string to_csv(const config::RunConfig& cfg, const ApproxResult& r) {
  std::ostringstream o;
  o << "# dist: " << cfg.dist << "\n# metric: " << cfg.metric << "\n# mode: " << to_string(cfg.mode)
    << "\n# n: " << r.measure.size() << "\n# distance: " << g12(r.distance)
    << "\n# max_slack: " << g12(r.certificate.max_slack())
    << "\n# converged: " << (r.diagnostics.converged ? "true" : "false")
    << "\n# optimality: " << r.diagnostics.optimality << "\n";
  o << "j,x,p,P\n";
  const auto& m = r.measure;
  for (std::size_t j = 0; j < m.size(); ++j)
    o << j + 1 << ',' << g12(m.x()[j]) << ',' << g12(m.p()[j]) << ',' << g12(m.P()[j + 1]) << '\n';
  return o.str();
}

inline std::string to_text(const config::RunConfig& cfg, const ApproxResult& r) {
  std::ostringstream o;
  o << cfg.dist << "  " << cfg.metric << "  " << to_string(cfg.mode) << "  n=" << r.measure.size() << '\n';
  o << "distance   " << g12(r.distance) << '\n';
  o << "max slack  " << g12(r.certificate.max_slack()) << '\n';
  o << "method     " << r.diagnostics.method << " (" << r.diagnostics.optimality << ", "
    << (r.diagnostics.converged ? "converged" : "NOT converged") << ")\n";
  const auto& m = r.measure;
  for (std::size_t j = 0; j < m.size(); ++j) {
    char line[128];
    std::snprintf(line, sizeof line, "%4zu  x=%-20s p=%s\n", j + 1, g12(m.x()[j]).c_str(), g12(m.p()[j]).c_str());
    o << line;
  }
  return o.str();
}

}  // namespace finquant::report
