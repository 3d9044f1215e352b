#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lowcolor/cli.hpp"

using namespace lowcolor;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lowcolor_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

}  // namespace

TEST(Cli, AdvReportsExactRationals) {
  auto r = run({"adv", "--n", "4", "--q", "2", "--ell", "1", "--D", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["command"], "adv");
  const auto rep = adv_bound(4, 2, 1, 2);
  EXPECT_EQ(j["total"], to_fraction_string(rep.total));
  EXPECT_EQ(j["tail"], to_fraction_string(rep.tail));
  EXPECT_NEAR(j["total_float"].get<double>(), rep.total.get_d(), 1e-15);
  EXPECT_EQ(j["subsets"], 22);
  EXPECT_EQ(j["config"]["q"], "2");
}

TEST(Cli, AdvExactFlag) {
  auto r = run({"adv", "--n", "4", "--q", "2", "--ell", "1", "--D", "1", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_NEAR(j["adv_exact"].get<double>(), adv_exact(Distribution::mc(2), Distribution::mc(3), 4, 1), 1e-12);
  EXPECT_EQ(j["config"]["exact"], "true");
}

TEST(Cli, MissingRequiredOptionIsUsageError) {
  auto r = run({"recover", "--model", "mc", "--n", "30", "--seed", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("q"), std::string::npos);
  EXPECT_EQ(run({"nosuch"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, SamplingWithoutSeedIsAnError) {
  auto r = run({"refute", "--n", "20", "--q", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("seed"), std::string::npos);
  EXPECT_EQ(run({"appendix", "--n", "10", "--q", "2"}).code, 2);
}

TEST(Cli, ParameterErrorsExitTwo) {
  EXPECT_EQ(run({"adv", "--n", "6", "--q", "1", "--ell", "1", "--D", "3"}).code, 2);
  EXPECT_EQ(run({"adv", "--n", "40", "--q", "5", "--ell", "5", "--D", "8"}).code, 2);
  EXPECT_EQ(run({"refute", "--n", "x", "--q", "2", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"refute", "--n", "20", "--q", "2", "--seed", "-3x"}).code, 2);
}

TEST(Cli, RecoverReportsRate) {
  auto r = run({"recover", "--model", "mc", "--n", "300", "--q", "2", "--trials", "3", "--seed", "4", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  ASSERT_EQ(j["records"].size(), 1u);
  EXPECT_EQ(j["records"][0]["metric"], "exact_recovery_rate");
  EXPECT_EQ(j["records"][0]["value"], 1.0);
  EXPECT_EQ(j["records"][0]["wall_ms"], 0.0);
  EXPECT_EQ(j["records"][0]["trials"], 3);
}

TEST(Cli, SampleThenRecoverFromFiles) {
  const auto g = temp_path("g.txt"), t = temp_path("t.txt");
  ASSERT_EQ(run({"sample", "--model", "mc:3", "--n", "300", "--seed", "9", "--out", g, "--truth", t}).code, 0);
  auto r = run({"recover", "--graph", g, "--truth", t, "--q", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_TRUE(j["exact_match"].get<bool>());
  EXPECT_EQ(j["groups"].size(), 3u);
  auto rf = run({"refute", "--graph", g, "--q", "3"});
  ASSERT_EQ(rf.code, 0) << rf.err;
  EXPECT_EQ(Json::parse(rf.out)["m"], default_m(300));
  std::remove(g.c_str());
  std::remove(t.c_str());
}

TEST(Cli, SampleToStdoutIsAGraphFile) {
  auto r = run({"sample", "--model", "gnp", "--n", "5", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  EXPECT_EQ(read_graph(in), sample_gnp_half(5, 2));
}

TEST(Cli, SweepCrossesGrids) {
  auto r = run({"sweep", "--task", "adv", "--grid", "q=2,3", "--grid", "ell=1,2", "--set", "n=4", "--set", "D=1",
                "--seed", "1", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], "param_D,param_ell,param_n,param_q,metric,value,trials,seed,wall_ms");
  std::set<std::string> points;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::size_t cut = 0;
    for (int f = 0; f < 4; ++f) cut = rows[i].find(',', cut) + 1;
    points.insert(rows[i].substr(0, cut));
  }
  EXPECT_EQ(points.size(), 4u);
  EXPECT_EQ(rows.size(), 1 + 4 * 3u);  // three metrics per point
}

TEST(Cli, SweepEmptyGridIsHeaderOnly) {
  auto r = run({"sweep", "--task", "adv", "--grid", "q=", "--set", "n=4", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], "param_n,param_q,metric,value,trials,seed,wall_ms");
}

TEST(Cli, SweepFailingPointKeepsGoing) {
  auto r = run({"sweep", "--task", "adv", "--grid", "q=1,2", "--set", "n=4", "--set", "ell=1", "--set", "D=2",
                "--seed", "1", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(",error,nan,"), std::string::npos);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, RerunsAreByteIdenticalWithoutTiming) {
  std::vector<std::string> args{"sweep", "--task", "refute", "--grid", "q=2,4", "--set", "n=64", "--trials", "4",
                                "--seed", "12345", "--no-timing"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CsvHeaderReplaysAsConfig) {
  std::vector<std::string> args{"sweep", "--task", "appendix", "--grid", "n=10,12", "--set", "q=2",
                                "--trials", "3", "--seed", "7", "--no-timing"};
  auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  const auto cfg = temp_path("replay.cfg");
  {
    std::ofstream f(cfg);
    std::istringstream in(a.out);
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("# ", 0) == 0) f << line.substr(2) << '\n';
  }
  auto b = run({"--config", cfg});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  std::remove(cfg.c_str());
}

TEST(Cli, CommandLineOverridesConfigFile) {
  const auto cfg = temp_path("override.cfg");
  {
    std::ofstream f(cfg);
    f << "# comment\nn=4\nq=2\nell=1\nD=1\n";
  }
  auto r = run({"adv", "--config", cfg, "--q", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["config"]["q"], "3");
  EXPECT_EQ(j["config"]["n"], "4");
  EXPECT_EQ(j["total"], to_fraction_string(adv_bound(4, 3, 1, 1).total));
  EXPECT_EQ(run({"adv", "--config", temp_path("missing.cfg")}).code, 2);
  std::remove(cfg.c_str());
}

TEST(Cli, DualityReport) {
  auto r = run({"duality", "--nv", "3", "--q", "1", "--D", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_NEAR(j["primal"].get<double>(), std::sqrt(3.0), 1e-6);
  EXPECT_NEAR(j["dual_adv"].get<double>(), 2.0, 1e-6);
  EXPECT_EQ(j["property_size"], 1);
  EXPECT_EQ(j["certificate"]["coefficients"].size(), 3u);
}

TEST(Cli, StatSeparation) {
  auto r = run({"stat", "--stat", "edges", "--planted", "mc:5", "--null", "gnp", "--n", "100", "--trials", "10",
                "--seed", "3", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  bool found = false;
  for (const auto& rec : j["records"])
    if (rec["metric"] == "separation_ratio") {
      found = true;
      EXPECT_GT(rec["value"].get<double>(), 3.0);
    }
  EXPECT_TRUE(found);
}

TEST(Cli, InstalledBinaryRuns) {
  const auto out = temp_path("bin.json");
  const std::string cmd = std::string("\"") + LOWCOLOR_CLI_PATH + "\" adv --n 4 --q 2 --ell 1 --D 1 > \"" + out + "\"";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  auto j = Json::parse(slurp(out));
  EXPECT_EQ(j["total"], to_fraction_string(adv_bound(4, 2, 1, 1).total));
  const std::string bad = std::string("\"") + LOWCOLOR_CLI_PATH + "\" adv --n 4 > /dev/null 2>&1";
  EXPECT_NE(std::system(bad.c_str()), 0);
  std::remove(out.c_str());
}
