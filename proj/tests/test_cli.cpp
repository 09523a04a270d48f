#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + LEVLAB_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, KappaReport) {
  const auto r = run("kappa --theta 1 --r 1.1111111111111112 --R 0.83");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["tool"], "levlab");
  EXPECT_EQ(j["config"]["subcommand"], "kappa");
  EXPECT_NEAR(j["result"]["c"].get<double>(), 1.4407896845, 1e-9);
  EXPECT_NEAR(j["result"]["kappaPrime"].get<double>(), 0.5600104153, 1e-9);
  EXPECT_FALSE(j["result"].contains("cExplicitR1"));
  const auto r1 = json::parse(run("kappa --theta 0.5 --r 1 --R 1").out);
  EXPECT_NEAR(r1["result"]["cExplicitR1"].get<double>(), r1["result"]["c"].get<double>(), 1e-12);
}

TEST(Cli, ValidationErrorsAreStructured) {
  for (const char* args : {"kappa --theta 1 --r 1 --R 0", "kappa --theta 1.5 --r 1 --R 1", "zeros --q 6 --T 10",
                           "kappa --theta 1 --r 1", "nonsense", "count --q 5 --T 10 --format csv"}) {
    const auto r = run(args);
    EXPECT_EQ(r.status, 2) << args;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["error"]["kind"], "validation") << args;
  }
}

TEST(Cli, ThreadVariableIsValidated) {
  EXPECT_EQ(run("kappa --theta 1 --r 1 --R 1", "LEVLAB_THREADS=zero").status, 2);
  EXPECT_EQ(run("kappa --theta 1 --r 1 --R 1", "LEVLAB_THREADS=0").status, 2);
  EXPECT_EQ(run("kappa --theta 1 --r 1 --R 1", "LEVLAB_THREADS=2").status, 0);
}

TEST(Cli, CostGuard) {
  const auto r = run("sums --X 1e6");
  EXPECT_EQ(r.status, 4);
  EXPECT_EQ(json::parse(r.out)["error"]["kind"], "cost-guard");
}

TEST(Cli, SurfaceTable) {
  const auto r = run("surface --theta 1 --grid 50");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2501u);
  EXPECT_EQ(ls[0], "r,R,kappaPrime");
}

TEST(Cli, ZetaZerosTable) {
  const auto r = run("zeros --q 1 --T 15");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "gamma,simple");
  double g0 = 0, g1 = 0;
  int s0 = 0, s1 = 0;
  ASSERT_EQ(std::sscanf(ls[1].c_str(), "%lf,%d", &g0, &s0), 2);
  ASSERT_EQ(std::sscanf(ls[2].c_str(), "%lf,%d", &g1, &s1), 2);
  EXPECT_NEAR(g0, -14.134725141734693, 1e-8);
  EXPECT_NEAR(g1, 14.134725141734693, 1e-8);
  EXPECT_EQ(s0 + s1, 2);
}

TEST(Cli, CountAgreesWithZeroTable) {
  const auto count = json::parse(run("count --q 3 --chi 1 --T 30").out)["result"]["count"].get<long>();
  const auto table = lines(run("zeros --q 3 --chi 1 --T 30").out);
  EXPECT_EQ(static_cast<long>(table.size()) - 1, count);
}

TEST(Cli, OutputIsDeterministic) {
  const std::string args = "zeros --q 7 --T 25 --format json";
  const auto a = run(args, "LEVLAB_THREADS=1");
  const auto b = run(args, "LEVLAB_THREADS=3");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("sums --X 300 --X 600").out, run("sums --X 300 --X 600").out);
}

TEST(Cli, OptimizeSmallTheta) {
  const auto j = json::parse(run("optimize --theta 0.1666667 --R-hi 4").out);
  EXPECT_GT(j["result"]["kappaPrime"].get<double>(), 0.0);
}

TEST(Cli, SumsTableHeader) {
  const auto r = run("sums --X 200 --X 400 --format csv");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "X,direct,asymptotic,relError");
}

TEST(Cli, BoundExample) {
  const auto r = run("bound --q 5 --T 50 --theta 0.5 --r 1 --R 1.2");
  ASSERT_EQ(r.status, 0);
  const auto rep = json::parse(r.out)["result"]["report"];
  EXPECT_GT(rep["lowerBoundJ"].get<double>(), 0.0);
  EXPECT_LE(rep["lowerBoundJ"].get<double>(), rep["actualN0"].get<double>());
  EXPECT_EQ(rep["chainSlack"].get<double>(), 0.0);
}

TEST(Cli, MomentSingleModulus) {
  const auto j = json::parse(run("moment --q 5 --T 10 --theta 0.9").out);
  EXPECT_EQ(j["result"]["perCharacter"].size(), 3u);
  EXPECT_GT(j["result"]["ratio"].get<double>(), 0.0);
}
