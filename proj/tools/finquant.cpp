#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "finquant/approx.hpp"
#include "finquant/coefficients.hpp"
#include "finquant/config.hpp"
#include "finquant/report.hpp"
#include "finquant/verify.hpp"

namespace fq = finquant;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadConfig = 2;
constexpr int kNoConvergence = 3;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw fq::InvalidInput("cannot write '" + path + "'");
  out << text;
}

// Rebuilds a full result from the last iterate of a stalled alternating
// iteration so the report can still be written.
fq::ApproxResult from_stalled(const fq::Dist& mu, const fq::Metric& m, const fq::kantorovich::LloydConvergenceError& e) {
  const auto& s = e.state();
  std::vector<double> cuts(s.P.begin() + 1, s.P.end() - 1);
  auto res = fq::kantorovich::detail::finish(mu, fq::FiniteMeasure::from_cuts(s.x, cuts), m.r,
                                             fq::Mode::Unconstrained, true, true);
  res.diagnostics.iterations = s.iterations;
  res.diagnostics.residual = s.residual;
  res.diagnostics.converged = false;
  res.diagnostics.optimality = "none";
  res.diagnostics.method = "alternating";
  return res;
}

int run_approx(const fq::config::RunConfig& cfg) {
  const fq::Dist mu = fq::config::make_dist(fq::config::parse_dist_spec(cfg.dist));
  const fq::Metric metric = fq::config::parse_metric(cfg.metric);
  const auto t0 = std::chrono::steady_clock::now();
  fq::ApproxResult res;
  try {
    res = fq::solve(mu, metric, cfg.mode, cfg.ns.front(), cfg.given, {1e-10, cfg.max_iter});
  } catch (const fq::kantorovich::LloydConvergenceError& e) {
    res = from_stalled(mu, metric, e);
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const double wall = cfg.timing ? ms : std::nan("");

  std::string text;
  if (cfg.format == "json")
    text = fq::report::to_json(cfg, metric, res, wall).dump(2) + "\n";
  else if (cfg.format == "csv")
    text = fq::report::to_csv(cfg, res);
  else
    text = fq::report::to_text(cfg, res);
  emit(text, cfg.out);
  return res.diagnostics.converged ? kOk : kNoConvergence;
}

int run_coeff(const fq::config::RunConfig& cfg) {
  const auto spec = fq::config::parse_dist_spec(cfg.dist);
  const fq::Dist mu = fq::config::make_dist(spec);
  const fq::Metric metric = fq::config::parse_metric(cfg.metric);
  std::optional<double> limit;
  if (spec.family == "benford" && cfg.exponent == 1.0 && metric.kind != fq::Metric::Kind::FortetMourier &&
      (cfg.mode == fq::Mode::Unconstrained || cfg.mode == fq::Mode::Uniform))
    limit = fq::coefficients::benford_coefficient(metric, spec.params[0], cfg.mode);

  const auto pts = fq::coefficients::estimate_coefficient(mu, metric, cfg.mode, cfg.ns, cfg.exponent);
  std::ostringstream o;
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& p : pts) {
      json row = {{"n", p.n}, {"d", fq::report::num(p.distance)}, {"scaled", fq::report::num(p.scaled)}};
      if (limit) row["limit"] = fq::report::num(*limit);
      rows.push_back(row);
    }
    o << json{{"config", fq::config::to_json(cfg)}, {"rows", rows}}.dump(2) << "\n";
  } else {
    o << "# dist: " << cfg.dist << "\n# metric: " << cfg.metric << "\n# mode: " << fq::to_string(cfg.mode)
      << "\n# exponent: " << fq::config::fmt(cfg.exponent) << "\n";
    o << (limit ? "n,d,scaled,limit\n" : "n,d,scaled\n");
    for (const auto& p : pts) {
      o << p.n << ',' << fq::report::g12(p.distance) << ',' << fq::report::g12(p.scaled);
      if (limit) o << ',' << fq::report::g12(*limit);
      o << '\n';
    }
  }
  emit(o.str(), cfg.out);
  return kOk;
}

int run_audit(const std::string& data, double b, const std::vector<std::string>& metrics, const std::string& out) {
  const fq::Dist mu = fq::benford(b);
  const std::vector<double> raw = fq::config::read_data_file(data);
  std::vector<double> s;
  for (double v : fq::significand(raw, b))
    if (v != 0.0) s.push_back(v);
  if (s.empty()) throw fq::InvalidInput("no non-zero values in '" + data + "'");
  const std::size_t dropped = raw.size() - s.size();
  const fq::FiniteMeasure emp = fq::from_samples(s, mu.support());
  json rows = json::array();
  for (const auto& name : metrics) {
    const fq::Metric m = fq::config::parse_metric(name);
    if (m.kind == fq::Metric::Kind::FortetMourier) throw fq::InvalidParameter("audit supports L, d_r and d_K");
    const double d = fq::distance(mu, emp, m);
    const double best = fq::solve(mu, m, fq::Mode::Uniform, s.size()).distance;
    rows.push_back({{"metric", m.name()},
                    {"empirical", fq::report::num(d)},
                    {"uniform_minimum", fq::report::num(best)},
                    {"ratio", best > 0.0 ? fq::report::num(d / best) : json(nullptr)}});
  }
  json rep = {{"data", data},
              {"base", fq::report::num(b)},
              {"n", s.size()},
              {"dropped_zeros", dropped},
              {"distinct", emp.size()},
              {"metrics", rows}};
  emit(rep.dump(2) + "\n", out);
  return kOk;
}

int run_verify(const std::string& suite) {
  const auto& all = fq::verify::suites();
  std::vector<std::string> names;
  if (suite == "all") {
    for (const auto& [k, v] : all) names.push_back(k);
  } else if (all.count(suite)) {
    names.push_back(suite);
  } else {
    throw fq::InvalidParameter("unknown suite '" + suite + "'");
  }
  json out = json::array();
  bool ok = true;
  for (const auto& n : names) {
    const auto rep = all.at(n)();
    ok = ok && rep.passed();
    out.push_back(rep.to_json());
  }
  std::cout << (out.size() == 1 ? out[0] : out).dump(2) << "\n";
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best finitely supported approximations of one-dimensional distributions"};
  app.require_subcommand(1);

  fq::config::RunConfig cfg;
  std::string mode = "unconstrained", ns = "1", config_file;
  std::optional<double> tol;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--dist", cfg.dist, "benford:<b> | beta21 | inverse-cantor[:depth] | exponential | "
                                      "uniform:<lo>,<hi> | file:<path>");
    c->add_option("--metric", cfg.metric, "levy | dK | d<r> (default levy)");
    c->add_option("--mode", mode, "positions-given | weights-given | uniform | unconstrained");
    c->add_option("--tol", tol, "certificate tolerance (default 1e-12, env FINQUANT_TOL)");
    c->add_option("--out", cfg.out, "output path (default stdout)");
    c->add_option("--config", config_file, "read the run configuration from a JSON file");
  };

  auto* approx = app.add_subcommand("approx", "best approximation for one n");
  add_common(approx);
  approx->add_option("--n", ns, "number of atoms");
  approx->add_option("--given", cfg.given, "fixed positions or weights")->delimiter(',');
  approx->add_option("--format", cfg.format, "json | csv | text");
  approx->add_flag("--timing", cfg.timing, "record wall time in the report");
  approx->add_option("--max-iter", cfg.max_iter, "iteration cap for d_r on general distributions");

  auto* coeff = app.add_subcommand("coeff", "n-scaled distances over a range of n");
  add_common(coeff);
  coeff->add_option("--n", ns, "range a..b or list");
  coeff->add_option("--exponent", cfg.exponent, "scale by n^exponent (default 1)");
  std::string coeff_format = "csv";
  coeff->add_option("--format", coeff_format, "csv | json");

  auto* audit = app.add_subcommand("audit", "compare significands of data with Benford's law");
  std::string data, audit_out;
  double base = 10.0;
  std::vector<std::string> metrics{"levy", "d1", "dK"};
  audit->add_option("--data", data, "one value per line")->required();
  audit->add_option("--base", base, "significand base (default 10)");
  audit->add_option("--metrics", metrics, "comma separated")->delimiter(',');
  audit->add_option("--out", audit_out, "output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "run a self-check suite");
  std::string suite;
  verify->add_option("suite", suite, "metric-inequalities | fig1-fig2 | oracle-n2 | rate-example | "
                                     "inversion | atomic-kolmogorov | all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*audit) return run_audit(data, base, metrics, audit_out);
    if (*verify) return run_verify(suite);

    const bool is_coeff = static_cast<bool>(*coeff);
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw fq::InvalidInput("cannot open config '" + config_file + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = fq::config::parse(ss.str());
    } else {
      if (cfg.dist.empty()) throw fq::InvalidParameter("--dist is required");
      cfg.command = is_coeff ? "coeff" : "approx";
      cfg.ns = fq::config::parse_ns(ns);
      cfg.mode = fq::parse_mode(mode);
      cfg.tol = tol ? *tol : fq::config::default_tol();
      if (is_coeff) cfg.format = coeff_format;
      cfg = fq::config::normalized(cfg);
    }
    if (cfg.command == "coeff" && cfg.format == "text") throw fq::InvalidParameter("coeff writes csv or json");
    return cfg.command == "coeff" ? run_coeff(cfg) : run_approx(cfg);
  } catch (const fq::ConvergenceError& e) {
    std::cerr << "finquant: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "finquant: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "finquant: " << e.what() << "\n";
    return kBadConfig;
  }
}
