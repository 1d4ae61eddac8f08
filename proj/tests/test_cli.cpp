#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "finquant/config.hpp"
#include "json.hpp"

using finquant::InvalidInput;
using finquant::InvalidParameter;
using nlohmann::json;
namespace cfg = finquant::config;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(FINQUANT_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "finquant_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Config, RoundTripIsIdempotent) {
  cfg::RunConfig c;
  c.dist = "benford:10";
  c.metric = "d2";
  c.ns = {5};
  c.mode = finquant::Mode::Uniform;
  c.tol = 1e-9;
  c = cfg::normalized(c);
  const std::string s = cfg::serialize(c);
  EXPECT_EQ(cfg::parse(s), c);
  EXPECT_EQ(cfg::canonical_config(s), s);
  EXPECT_EQ(cfg::canonical_config(cfg::canonical_config(s)), s);
}

TEST(Config, CanonicalSpelling) {
  const auto c = cfg::parse(R"({"dist":"benford:10.0","metric":"L","n":"1,2,3,4","command":"coeff"})");
  EXPECT_EQ(c.metric, cfg::parse_metric("levy").name());
  EXPECT_EQ(cfg::to_json(c)["n"], "1..4");
  EXPECT_EQ(cfg::parse(cfg::serialize(c)), c);
  const auto given = cfg::parse(R"({"dist":"beta21","mode":"positions-given","given":[0.2,0.7],"n":"9"})");
  EXPECT_EQ(given.ns, std::vector<std::size_t>{2});
}

TEST(Config, Rejects) {
  for (const char* bad : {"not json", R"({"metric":"L"})", R"({"dist":"benford:1"})", R"({"dist":"nope"})",
                          R"({"dist":"beta21","metric":"q"})", R"({"dist":"beta21","n":"0"})",
                          R"({"dist":"beta21","n":"1,2"})", R"({"dist":"beta21","tol":-1})",
                          R"({"dist":"beta21","mode":"positions-given"})", R"({"dist":"beta21","format":"xml"})",
                          R"({"dist":"beta21","max_iter":0})", R"({"dist":"beta21","n":3})"})
    EXPECT_THROW(cfg::parse(bad), InvalidParameter) << bad;
}

TEST(Config, ParseNs) {
  EXPECT_EQ(cfg::parse_ns("3"), std::vector<std::size_t>{3});
  EXPECT_EQ(cfg::parse_ns("2..5"), (std::vector<std::size_t>{2, 3, 4, 5}));
  EXPECT_EQ(cfg::parse_ns("1,8,64"), (std::vector<std::size_t>{1, 8, 64}));
  for (const char* bad : {"", "0", "5..2", "a", "1,,2", "-3", "1.5"})
    EXPECT_THROW(cfg::parse_ns(bad), InvalidParameter) << bad;
}

TEST(Config, ToleranceFromEnvironment) {
  unsetenv("FINQUANT_TOL");
  EXPECT_EQ(cfg::default_tol(), 1e-12);
  setenv("FINQUANT_TOL", "1e-6", 1);
  EXPECT_EQ(cfg::default_tol(), 1e-6);
  setenv("FINQUANT_TOL", "-1", 1);
  EXPECT_THROW(cfg::default_tol(), InvalidParameter);
  setenv("FINQUANT_TOL", "x", 1);
  EXPECT_THROW(cfg::default_tol(), InvalidParameter);
  unsetenv("FINQUANT_TOL");
}

TEST(Config, DataFile) {
  const fs::path p = scratch("data.txt");
  write(p, "# header\n1.5\n\n  30 \n-0.002\n");
  EXPECT_EQ(cfg::read_data_file(p), (std::vector<double>{1.5, 30.0, -0.002}));
  write(p, "1\nabc\n");
  EXPECT_THROW(cfg::read_data_file(p), InvalidInput);
  write(p, "# only a comment\n");
  EXPECT_THROW(cfg::read_data_file(p), InvalidInput);
  EXPECT_THROW(cfg::read_data_file(scratch("missing.txt")), InvalidInput);
}

TEST(Cli, ApproxLevyBest) {
  const Outcome r = run("approx --dist benford:10 --metric levy --n 3");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["result"]["distance"].get<double>(), 0.1439, 1e-4);
  EXPECT_EQ(j["result"]["x"].size(), 3u);
  EXPECT_TRUE(j["certificate"]["satisfied"].get<bool>());
  EXPECT_TRUE(j["diagnostics"]["wall_time_ms"].is_null());
  EXPECT_TRUE(j["diagnostics"]["converged"].get<bool>());
}

TEST(Cli, Deterministic) {
  const std::string a = "approx --dist beta21 --metric d2 --n 4";
  EXPECT_EQ(run(a).out, run(a).out);
  const json t = json::parse(run(a + " --timing").out);
  EXPECT_TRUE(t["diagnostics"]["wall_time_ms"].is_number());
}

TEST(Cli, ConfigFileReproducesRun) {
  const Outcome direct = run("approx --dist benford:10 --metric dK --mode uniform --n 4");
  ASSERT_EQ(direct.code, 0);
  const fs::path c = scratch("run.json");
  write(c, json::parse(direct.out)["config"].dump());
  const Outcome again = run("approx --config " + c.string());
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, direct.out);
}

TEST(Cli, OutputFileAndFormats) {
  const fs::path o = scratch("out.csv");
  fs::remove(o);
  EXPECT_EQ(run("approx --dist benford:10 --metric d1 --n 2 --format csv --out " + o.string()).code, 0);
  EXPECT_NE(slurp(o).find("0.1128066"), std::string::npos);
  EXPECT_EQ(run("approx --dist benford:10 --n 2 --format text").code, 0);
}

TEST(Cli, BadInputExitsTwo) {
  EXPECT_EQ(run("approx --dist benford:0.5").code, 2);
  EXPECT_EQ(run("approx --dist beta21 --metric zz").code, 2);
  EXPECT_EQ(run("approx --metric levy").code, 2);
  EXPECT_EQ(run("approx --dist beta21 --bogus").code, 2);
  EXPECT_EQ(run("approx --config " + scratch("missing.json").string()).code, 2);
  const fs::path bad = scratch("bad.json");
  write(bad, "{\"dist\": ");
  EXPECT_EQ(run("approx --config " + bad.string()).code, 2);
  const fs::path empty = scratch("empty.txt");
  write(empty, "# nothing\n");
  EXPECT_EQ(run("audit --data " + empty.string()).code, 2);
  EXPECT_EQ(run("verify no-such-suite").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, NonConvergenceStillReports) {
  const fs::path o = scratch("stalled.json");
  fs::remove(o);
  EXPECT_EQ(run("approx --dist inverse-cantor --metric d2 --n 5 --max-iter 1 --out " + o.string()).code, 3);
  const json j = json::parse(slurp(o));
  EXPECT_FALSE(j["diagnostics"]["converged"].get<bool>());
  EXPECT_EQ(j["result"]["x"].size(), 5u);
}

TEST(Cli, Verify) {
  const Outcome r = run("verify fig1-fig2");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>());
}

TEST(Cli, CoeffLimitColumn) {
  Outcome r = run("coeff --dist benford:10 --metric d1 --mode uniform --n 1..4");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n,d,scaled,limit"), std::string::npos);
  EXPECT_NE(r.out.find(",0.25\n"), std::string::npos);
  r = run("coeff --dist benford:10 --metric levy --n 8,16 --format json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_NEAR(j["rows"][1]["limit"].get<double>(), 0.43091, 1e-5);
  r = run("coeff --dist inverse-cantor --metric levy --n 1..3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("limit"), std::string::npos);
}

TEST(Cli, AuditExactAtoms) {
  const fs::path d = scratch("ones.txt");
  write(d, "1\n10\n100\n");
  const Outcome r = run("audit --data " + d.string() + " --metrics dK,levy");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["distinct"], 1);
  EXPECT_NEAR(j["metrics"][0]["empirical"].get<double>(), 1.0, 1e-12);

  // significands at the uniform-optimal positions reproduce the optimum
  const fs::path q = scratch("quantiles.txt");
  std::ofstream out(q);
  for (int j = 1; j <= 4; ++j) out << cfg::fmt(std::pow(10.0, (2.0 * j - 1.0) / 8.0) * 1e3) << "\n";
  out.close();
  const json k = json::parse(run("audit --data " + q.string() + " --metrics dK,d1").out);
  for (const auto& m : k["metrics"]) EXPECT_NEAR(m["ratio"].get<double>(), 1.0, 1e-9) << m["metric"];
}
