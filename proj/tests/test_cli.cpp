#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(SHUTTLEC_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) r.out += buf;
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("shuttlec_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string data(const std::string& f) { return std::string(TEST_DATA_DIR) + "/" + f; }

} // namespace

TEST(Cli, CompileGeneratedAllStrategies) {
  const auto dir = scratch("ghz");
  const auto r = run("compile --gen ghz --n 16 --strategy all --placement spectral --out " + dir.string());
  ASSERT_EQ(r.code, 0);
  for (auto s : {"baseline", "parallel", "min_return", "tunable_velocity", "swap_return"}) {
    const auto path = dir / (std::string("ghz_n16_") + s + ".schedule.json");
    ASSERT_TRUE(fs::exists(path)) << path;
    const auto j = nlohmann::json::parse(slurp(path));
    EXPECT_EQ(j.at("strategy"), s);
    EXPECT_NE(r.out.find(std::string("ghz_n16 ") + s + " spectral"), std::string::npos);
  }
  const auto csv = slurp(dir / "ghz_n16_report.csv");
  EXPECT_EQ(csv.rfind("placement,seed,strategy,total_time_ns", 0), 0u);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir / "ghz_n16_report.json")).contains("comparison"));
  EXPECT_NE(r.out.find("time_x"), std::string::npos);
}

TEST(Cli, CompileQasmWithMeasurements) {
  const auto dir = scratch("bell");
  const auto r = run("compile --input " + data("bell.qasm") + " --keep-measure --strategy min_return --out " +
                     dir.string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(slurp(dir / "bell_min_return.schedule.json"));
  int measures = 0;
  for (const auto& op : j.at("ops"))
    if (op.at("type") == "gate" && op.at("kind") == "measure") ++measures;
  EXPECT_EQ(measures, 4);
}

TEST(Cli, RandomPlacementAggregatesSeeds) {
  const auto dir = scratch("random");
  const auto r = run("compile --gen qft --n 8 --placement random --runs 10 --format csv --out " + dir.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("+-"), std::string::npos);
  const auto csv = slurp(dir / "qft_n8_report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 5 * 10);
  EXPECT_FALSE(fs::exists(dir / "qft_n8_report.json"));
}

TEST(Cli, ParseErrorExitsOne) {
  EXPECT_EQ(run("compile --input " + data("broken.qasm") + " --out " + scratch("bad").string()).code, 1);
  EXPECT_EQ(run("compile --input " + data("unsupported.qasm") + " --out " + scratch("bad2").string()).code, 1);
}

TEST(Cli, InvalidConfigExitsTwo) {
  const auto dir = scratch("cfg");
  EXPECT_EQ(run("compile --gen nope --out " + dir.string()).code, 2);
  EXPECT_EQ(run("compile --out " + dir.string()).code, 2);
  EXPECT_EQ(run("compile --gen ghz --input x.qasm --out " + dir.string()).code, 2);
  EXPECT_EQ(run("compile --gen ghz --strategy fastest --out " + dir.string()).code, 2);
  EXPECT_EQ(run("compile --gen ghz --placement random --runs 0 --out " + dir.string()).code, 2);
  EXPECT_EQ(run("compile --input /nonexistent.qasm --out " + dir.string()).code, 2);
  EXPECT_EQ(run("bench --n 1 --out " + dir.string()).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  std::ofstream(dir / "arch.json") << R"({"n_sites": 16, "site_pitch_um": -2})";
  EXPECT_EQ(run("compile --gen ghz --arch-config " + (dir / "arch.json").string() + " --out " + dir.string()).code, 2);
  std::ofstream(dir / "bad.json") << R"({"warp": 9})";
  EXPECT_EQ(run("compile --gen ghz --config " + (dir / "bad.json").string() + " --out " + dir.string()).code, 2);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto dir = scratch("config");
  std::ofstream(dir / "run.json") << R"({"gen": "dj", "n": 6, "strategy": "baseline",
    "format": "csv", "architecture": {"t_2q_ns": 90}})";
  const auto r = run("compile --config " + (dir / "run.json").string() + " --n 5 --out " + dir.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir / "dj_n5_report.csv"));
  EXPECT_FALSE(fs::exists(dir / "dj_n6_report.csv"));
}

TEST(Cli, BenchAndSweepWriteCsv) {
  const auto dir = scratch("bench");
  ASSERT_EQ(run("bench --n 6 --runs 2 --families ghz,qft --out " + dir.string()).code, 0);
  const auto bench = slurp(dir / "bench.csv");
  EXPECT_EQ(bench.rfind("family,strategy,placement,seed,total_time_ns,mean_dC,std_dC\n", 0), 0u);
  EXPECT_EQ(std::count(bench.begin(), bench.end(), '\n'), 1 + 2 * 5 * 3);

  ASSERT_EQ(run("sweep --n-min 10 --n-max 12 --n-step 1 --runs 2 --families graph_state --out " + dir.string()).code, 0);
  const auto sweep = slurp(dir / "sweep.csv");
  EXPECT_EQ(sweep.rfind("family,n,depth,strategy,time_ratio,error_ratio\n", 0), 0u);
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 1 + 3 * 5);
}

TEST(Cli, BenchIsByteDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  ASSERT_EQ(run("bench --n 8 --runs 3 --seed 5 --out " + a.string()).code, 0);
  ASSERT_EQ(run("bench --n 8 --runs 3 --seed 5 --serial --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a / "bench.csv"), slurp(b / "bench.csv"));
}
