#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "herglotz/cli.hpp"
#include "herglotz/config.hpp"

using namespace herglotz;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("herglotz-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with `-o <dir>` prepended and captures stdout and stderr.
  int run(std::vector<std::string> args) {
    args.insert(args.begin(), {"herglotz", "-o", dir_.string()});
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    ::testing::internal::CaptureStdout();
    ::testing::internal::CaptureStderr();
    const int code = cli_main(static_cast<int>(argv.size()), argv.data());
    out_ = ::testing::internal::GetCapturedStdout();
    err_ = ::testing::internal::GetCapturedStderr();
    return code;
  }

  std::string write_config(const std::string& text) {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::string out_, err_;
};

}  // namespace

TEST_F(Cli, CheckEqPassesOnFirstOrderShift) {
  EXPECT_EQ(run({"check-eq", "--lagrangian", "drag", "--lagrangian-bar", "drag_bar1", "--zeta", "zplusv"}), 0);
  ASSERT_TRUE(fs::exists(dir_ / "check-eq.json"));
  const auto j = nlohmann::json::parse(slurp(dir_ / "check-eq.json"));
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["sample_plan"]["count"], 200);
}

TEST_F(Cli, CheckEqReportsZetaRegularityViolation) {
  EXPECT_EQ(run({"check-eq", "--lagrangian", "drag_gam05", "--lagrangian-bar", "drag_bar2_gam05", "--zeta", "zplusv2"}),
            2);
  EXPECT_NE((out_ + err_).find("zeta-regularity violated"), std::string::npos);
}

TEST_F(Cli, SimulateWritesResidualColumn) {
  EXPECT_EQ(run({"simulate", "--system", "parachute", "--t", "5", "--dt", "0.001"}), 0);
  std::ifstream csv(dir_ / "simulate.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,q1,v1,z,residual");
  std::string line;
  int rows = 0;
  double worst = 0.0;
  while (std::getline(csv, line)) {
    worst = std::max(worst, std::abs(std::stod(line.substr(line.rfind(',') + 1))));
    ++rows;
  }
  EXPECT_EQ(rows, 5001);
  EXPECT_LE(worst, 1e-9);
}

TEST_F(Cli, ExitCodesFollowVerdicts) {
  EXPECT_EQ(run({"check-dynamical", "--system-a", "flip_H", "--system-b", "flip_Hbar"}), 0);
  EXPECT_EQ(run({"check-conformal", "--system-a", "flip_H", "--system-b", "flip_Hbar"}), 1);
  EXPECT_EQ(run({"check-inverse", "--sode", "parachute_sode"}), 0);
  EXPECT_EQ(run({"check-inverse", "--sode", "parachute_sode_perturbed"}), 1);
  EXPECT_EQ(run({"check-inverse-ext", "--sode", "drag_sode", "--zeta", "z"}), 0);
  EXPECT_EQ(run({"check-strong-eq", "--lagrangian", "oscillator", "--lagrangian-bar", "oscillator_bar", "--zeta", "z2_plus_sinq"}), 0);
  EXPECT_EQ(run({"check-horizontal", "--field", "hs_xi", "--field-bar", "hs_xihat", "--zeta", "z_minus_half_v2"}), 0);
  EXPECT_EQ(run({"check-projectable", "--field", "parachute"}), 0);
  EXPECT_EQ(run({"check-di-ei", "--sode", "parachute_sode"}), 0);
  EXPECT_EQ(run({"check-zero-set", "--system-a", "flip_H", "--system-b", "flip_Hbar"}), 1);
  EXPECT_EQ(run({"legendre", "--lagrangian", "parachute"}), 0);
  EXPECT_EQ(run({"stationarity", "--lagrangian", "free"}), 0);
}

TEST_F(Cli, HerglotzPrintsFieldComponents) {
  EXPECT_EQ(run({"herglotz", "--lagrangian", "damped"}), 0);
  EXPECT_NE(out_.find("xi[v1]"), std::string::npos);
  EXPECT_NE(out_.find("xi[v1] = -(gam*v1)"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitThreeWithPath) {
  EXPECT_EQ(run({"check-eq", "--lagrangian", "nope", "--lagrangian-bar", "drag_bar1", "--zeta", "zplusv"}), 3);
  EXPECT_NE(err_.find("nope"), std::string::npos);

  const std::string bad = write_config(R"({"lagrangians": {"broken": {"n": 1, "expr": "v2 + q1"}}})");
  EXPECT_EQ(run({"-c", bad, "list"}), 3);
  EXPECT_NE(err_.find("lagrangians.broken"), std::string::npos);

  const std::string tol = write_config(R"({"tolerances": {"pass_tol": 1e-3, "fail_tol": 1e-6}})");
  EXPECT_EQ(run({"-c", tol, "list"}), 3);
  EXPECT_NE(err_.find("tolerances"), std::string::npos);

  const std::string json = write_config("{ not json");
  EXPECT_EQ(run({"-c", json, "list"}), 3);
  EXPECT_EQ(run({"-c", (dir_ / "missing.json").string(), "list"}), 3);
  EXPECT_EQ(run({"no-such-command"}), 3);
}

TEST_F(Cli, UserConfigOverlaysFixtures) {
  const std::string cfg = write_config(R"({
    "lagrangians": {"mine": {"n": 1, "expr": "0.5*v1^2 - c*z", "params": {"c": 0.2}}},
    "sodes": {"mine_sode": {"from_lagrangian": "mine"}},
    "tasks": [{"name": "t1", "command": "check-inverse", "args": {"sode": "mine_sode"}},
              {"name": "t2", "command": "check-eq",
               "args": {"lagrangian": "drag", "lagrangian-bar": "drag_bar1", "zeta": "zplusv"}}]
  })");
  EXPECT_EQ(run({"-c", cfg, "run"}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "t1.json"));
  EXPECT_TRUE(fs::exists(dir_ / "t2.json"));
}

TEST_F(Cli, BuiltinSuiteIsDeterministic) {
  const RunConfig cfg = load_config(std::nullopt);
  ASSERT_GE(cfg.tasks.size(), 20u);
  std::vector<std::string> first;
  for (const auto& t : cfg.tasks) first.push_back(to_json(run_task(cfg, t).report, false).dump());
  std::vector<std::string> second;
  for (const auto& t : cfg.tasks) second.push_back(to_json(run_task(cfg, t).report, false).dump());
  EXPECT_EQ(first, second);
}

TEST_F(Cli, SeedOverrideFromEnvironment) {
  const RunConfig base = load_config(std::nullopt);
  ::setenv("HERGLOTZ_SEED", "777", 1);
  const RunConfig over = load_config(std::nullopt);
  ::setenv("HERGLOTZ_SEED", "-3", 1);
  EXPECT_THROW(load_config(std::nullopt), ConfigError);
  ::unsetenv("HERGLOTZ_SEED");
  EXPECT_EQ(over.plan("default", 1).seed, 777u);
  EXPECT_NE(base.plan("default", 1).seed, 777u);
}

TEST(BatchExit, Aggregation) {
  EXPECT_EQ(batch_exit_code({Verdict::pass, Verdict::pass}), 0);
  EXPECT_EQ(batch_exit_code({Verdict::pass, Verdict::fail}), 1);
  EXPECT_EQ(batch_exit_code({Verdict::fail, Verdict::inconclusive}), 2);
  EXPECT_EQ(batch_exit_code({Verdict::error}), 2);
}

TEST(Config, BuiltinFixturesValidate) {
  const RunConfig cfg = load_config(std::nullopt);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.dimension_of("magnetic"), 3);
  EXPECT_THROW(cfg.lagrangian("drag_bar1"), ConfigError);
  EXPECT_EQ(cfg.plan("grid5", 1).mode, SamplePlan::Mode::grid);
  EXPECT_THROW(cfg.plan("flip_zero", 2), ConfigError);
}
