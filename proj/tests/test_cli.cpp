#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"
#include "json.hpp"

using sinekernel::cli::run;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find("\r\n")); }

}  // namespace

TEST(FormatNumber, RoundTripsAndSpecials) {
  using sinekernel::cli::format_number;
  for (double v : {0.1, -2.5e-300, 1.0 / 3.0, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(ParseGrid, Inclusive) {
  using sinekernel::cli::parse_grid;
  const auto g = parse_grid("0.5:2.5:5");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.5);
  EXPECT_EQ(g.back(), 2.5);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
  EXPECT_EQ(parse_grid("1:1:1"), std::vector<double>{1.0});
  for (const char* bad : {"", "1:2", "1:2:x", "1:2:0", "a:2:3", "1:2:3:4", "2:1:3"})
    EXPECT_THROW(parse_grid(bad), std::invalid_argument) << bad;
}

TEST(Cli, DetCsv) {
  const Result r = invoke({"det", "--zeta", "1.0", "--lambda", "1.0", "--variant", "all"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), "zeta,lambda,variant,log_det");
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_NE(r.out.find(",plus,"), std::string::npos);
}

TEST(Cli, DetJsonSchema) {
  const Result r = invoke({"--format", "json", "det", "--zeta-grid", "0.5:1.5:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "det");
  EXPECT_EQ(j["columns"].size(), 4u);
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_LT(j["rows"][2]["log_det"].get<double>(), j["rows"][0]["log_det"].get<double>());
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"det", "--zeta", "0"},
           {"det", "--zeta", "4", "--lambda", "1"},
           {"det", "--zeta", "1", "--lambda", "2"},
           {"det", "--zeta", "1", "--zeta-grid", "1:2:3"},
           {"det", "--zeta-grid", "1:2"},
           {"frobnicate"},
           {"--format", "xml", "det", "--zeta", "1"},
           {"det", "--bogus", "1"},
           {"asym", "--quantity", "qdiag", "--u-min", "8", "--u-max", "15", "--terms", "3"},
           {"verify", "--suite", "nope"},
           {"canon", "--system", "1", "--z-re", "0.5", "--x-max", "1"},
       }) {
    const Result r = invoke(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? std::string("<none>") : args[0]) << " " << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(r.err.empty());
  }
}

TEST(Cli, UnknownFlagPrintsHelp) {
  const Result r = invoke({"det", "--bogus", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--zeta"), std::string::npos);
}

TEST(Cli, VerifyExitCodes) {
  const Result ok = invoke({"--format", "json", "verify", "--suite", "sumrule", "--zeta", "1.0"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const json j = json::parse(ok.out);
  EXPECT_EQ(j["passed"], true);
  EXPECT_GT(j["rows"].size(), 0u);
  for (const auto& row : j["rows"]) EXPECT_EQ(row["suite"], "sumrule");

  const Result bad = invoke({"verify", "--suite", "corollary47", "--zeta", "1.0"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("false"), std::string::npos);

  const Result tight = invoke({"--tol", "1e-30", "verify", "--suite", "sumrule", "--zeta", "1.0"});
  EXPECT_EQ(tight.code, 1);
}

TEST(Cli, VerifyAllIncludesFailingSuite) {
  const Result r = invoke({"--format", "json", "verify", "--suite", "all"});
  EXPECT_EQ(r.code, 1);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["passed"], false);
  std::set<std::string> suites;
  for (const auto& row : j["rows"]) suites.insert(row["suite"].get<std::string>());
  for (const char* s : {"symmetry", "lemma32", "jmms", "identities", "lemma41", "lemma42", "lemma43", "thm45",
                        "corollary47", "sumrule", "pmgap", "krein", "canon-invariants"})
    EXPECT_EQ(suites.count(s), 1u) << s;
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"resolvent", "--zeta-grid", "0.5:2.0:4"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(first_line(a.out), "zeta,u,q_diag,q_anti,r_re,r_im,q_2zeta_re,q_2zeta_im");
}

TEST(Cli, OrderFromEnvironmentAndFlag) {
  const std::vector<std::string> args{"det", "--zeta", "1.0"};
  const Result base = invoke(args);
  ::setenv("SINEKERNEL_ORDER", "20", 1);
  const Result env = invoke(args);
  const Result flag = invoke({"--order", "48", "det", "--zeta", "1.0"});
  ::setenv("SINEKERNEL_ORDER", "abc", 1);
  const Result garbage = invoke(args);
  ::unsetenv("SINEKERNEL_ORDER");
  EXPECT_EQ(env.code, 0);
  EXPECT_NE(env.out, base.out);
  EXPECT_EQ(flag.out, base.out);
  EXPECT_EQ(garbage.code, 2);
  EXPECT_EQ(invoke(args).out, base.out);
  EXPECT_EQ(invoke({"--order", "2", "det", "--zeta", "1.0"}).code, 2);
}

TEST(Cli, AsymHeadersAndWindow) {
  const Result real = invoke({"asym", "--quantity", "qanti", "--u-min", "8", "--u-max", "16", "--terms", "2"});
  ASSERT_EQ(real.code, 0) << real.err;
  EXPECT_EQ(first_line(real.out), "u,numeric,series,abs_err,rel_err");
  // u = 16 lies past the window, so only the series is tabulated
  EXPECT_NE(real.out.find("\r\n16,,"), std::string::npos);

  const Result cplx = invoke({"asym", "--quantity", "rsq", "--u-min", "8", "--u-max", "15", "--terms", "2"});
  ASSERT_EQ(cplx.code, 0) << cplx.err;
  EXPECT_EQ(first_line(cplx.out), "u,numeric_re,numeric_im,series_re,series_im,abs_err,rel_err");
}

TEST(Cli, HamiltonianAndCanon) {
  const Result h = invoke({"--format", "json", "hamiltonian", "--x-grid", "0:2:3"});
  ASSERT_EQ(h.code, 0) << h.err;
  const json j = json::parse(h.out);
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][0]["q1_sq"], 1.0);
  EXPECT_NEAR(j["rows"][1]["q1_sq"].get<double>() * j["rows"][1]["q2_sq"].get<double>(), 0.25, 1e-14);

  const Result c = invoke({"--format", "json", "canon", "--system", "2", "--z-re", "1", "--x-max", "1"});
  ASSERT_EQ(c.code, 0) << c.err;
  const json row = json::parse(c.out)["rows"][0];
  EXPECT_NEAR(row["det_re"].get<double>(), row["liouville_re"].get<double>(), 1e-8);
  EXPECT_NEAR(row["det_im"].get<double>(), row["liouville_im"].get<double>(), 1e-8);
}

TEST(Cli, HelpExitsCleanly) {
  const Result r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}
