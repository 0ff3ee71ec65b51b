#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "meanflow/cli.hpp"

using namespace meanflow;
using namespace meanflow::cli;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "meanflow_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

int run_argv(std::vector<std::string> args) {
  std::vector<char*> argv;
  static std::string prog = "meanflow";
  argv.push_back(prog.data());
  for (auto& a : args) argv.push_back(a.data());
  return main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(Csv, HeaderOnlyForEmptyRows) {
  std::ostringstream os;
  emit_csv({{"target", "params", "lhs", "rhs", "margin", "pass"}, {}}, os);
  EXPECT_EQ(os.str(), "target,params,lhs,rhs,margin,pass\n");
}

TEST(Csv, QuotesFieldsWithCommas) {
  std::ostringstream os;
  emit_csv({{"a", "b"}, {{"x,y", "say \"hi\""}}}, os);
  EXPECT_EQ(os.str(), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

TEST(Run, ZeroCouplingScanIsAllZeros) {
  RunConfig c;
  c.command = "scan";
  c.c02 = "0";
  c.c04 = "0";
  c.mu_max = {"10", "100"};
  c.n_max = 6;
  c.out = scratch("zero.csv").string();
  std::ostringstream err;
  ASSERT_EQ(run(c, err), 0) << err.str();
  const auto ls = lines(slurp(c.out));
  ASSERT_EQ(ls.size(), 1u + 2u * 3u);
  EXPECT_EQ(ls[0], "mu_max,n,f_n");
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_NE(ls[i].find(",0.000"), std::string::npos) << ls[i];
}

TEST(Run, NegativeQuarticCouplingIsUsageError) {
  RunConfig c;
  c.command = "scan";
  c.c04 = "-1";
  std::ostringstream err;
  EXPECT_EQ(run(c, err), 2);
  EXPECT_NE(err.str().find("c04"), std::string::npos);
}

TEST(Run, ExhaustiveEq54Passes) {
  RunConfig c;
  c.command = "bounds";
  c.target = "eq54";
  c.exhaustive = true;
  c.out = scratch("eq54.csv").string();
  std::ostringstream err;
  ASSERT_EQ(run(c, err), 0) << err.str();
  const auto ls = lines(slurp(c.out));
  EXPECT_EQ(ls[0], "target,params,lhs,rhs,margin,pass");
  EXPECT_EQ(ls.size(), 1u + 13u * 13u * 13u);
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_EQ(ls[i].back(), '1');
}

TEST(Run, ExitCodeFollowsReports) {
  std::vector<BoundReport> r = {linear_report("x", {}, ExtReal(0), ExtReal(1))};
  EXPECT_EQ(exit_code_for(r), 0);
  r.push_back(linear_report("y", {}, ExtReal(2), ExtReal(1)));
  EXPECT_EQ(exit_code_for(r), 1);
  EXPECT_EQ(exit_code_for({}), 0);
}

TEST(Run, BadInputsAreUsageErrors) {
  std::ostringstream err;
  RunConfig c;
  c.command = "frobnicate";
  EXPECT_EQ(run(c, err), 2);
  c.command = "scan";
  c.c02 = "zero";
  EXPECT_EQ(run(c, err), 2);
  c = RunConfig{};
  c.command = "bounds";
  c.target = "lemma34";
  c.params = {{"n1", "12"}, {"n2", "12"}, {"k", "4"}, {"a", "1"}, {"l", "2"}};
  EXPECT_EQ(run(c, err), 2);
  c = RunConfig{};
  c.command = "table";
  c.out = "/nonexistent-dir/x.csv";
  EXPECT_EQ(run(c, err), 2);
}

TEST(Run, DeterministicOutput) {
  RunConfig c;
  c.command = "table";
  c.n_max = 12;
  c.k_max = 12;
  c.out = scratch("t1.csv").string();
  std::ostringstream err;
  ASSERT_EQ(run(c, err), 0);
  c.out = scratch("t2.csv").string();
  ASSERT_EQ(run(c, err), 0);
  EXPECT_EQ(slurp(scratch("t1.csv")), slurp(scratch("t2.csv")));
}

TEST(Run, PrecisionControlsDigits) {
  RunConfig c;
  c.command = "table";
  c.n_max = 4;
  c.k_max = 1;
  c.prec_bits = 128;
  c.out = scratch("p128.csv").string();
  std::ostringstream err;
  ASSERT_EQ(run(c, err), 0);
  const auto ls = lines(slurp(c.out));
  // 128 bits -> 40 significant digits, enough to expose that 0.1 is not a binary fraction
  EXPECT_EQ(ls[1], "2,0,1.000000000000000000000000000000000000001e-01");
}

TEST(Config, JsonRealsMustBeStrings) {
  const RunConfig c = config_from_json(R"({"command":"scan","c04":"0.5","mu_max":["10","20"],"N":2,"seed":9})");
  EXPECT_EQ(c.command, "scan");
  EXPECT_EQ(c.c04, "0.5");
  EXPECT_EQ(c.mu_max.size(), 2u);
  EXPECT_EQ(c.N, 2);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_THROW(config_from_json(R"({"c04":0.5})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"mu_max":[10]})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"bogus":"1"})"), ConfigError);
  EXPECT_THROW(config_from_json("{not json"), ConfigError);
  EXPECT_THROW(config_from_json("[1,2]"), ConfigError);
}

TEST(MainEntry, ConfigFileAndOverrides) {
  const fs::path cfg = scratch("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"command":"bounds","target":"eq194","params":{"n":"14"}})";
  }
  const fs::path out = scratch("main.csv");
  EXPECT_EQ(run_argv({"bounds", "--config", cfg.string(), "--out", out.string()}), 0);
  const auto ls = lines(slurp(out));
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1].rfind("eq194,n=14,", 0), 0u);

  EXPECT_EQ(run_argv({"bounds", "--config", cfg.string(), "--param", "n=16", "--out", out.string()}), 0);
  EXPECT_EQ(lines(slurp(out))[1].rfind("eq194,n=16,", 0), 0u);
}

TEST(MainEntry, UsageErrors) {
  EXPECT_EQ(run_argv({"scan", "--config", "/nonexistent/cfg.json"}), 2);
  EXPECT_EQ(run_argv({}), 2);
  EXPECT_EQ(run_argv({"scan", "--no-such-flag"}), 2);
  EXPECT_EQ(run_argv({"bounds", "--target", "eq54", "--param", "novalue"}), 2);
}

TEST(Binary, RunsEndToEnd) {
  const fs::path out = scratch("bin.csv");
  const std::string cmd = std::string(MEANFLOW_CLI_PATH) + " tensors --N 2 --rank 4 --out " + out.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const auto ls = lines(slurp(out));
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1].back(), '1');
}
