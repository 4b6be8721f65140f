#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string output;
};

Result run_cli(const std::string& args, const std::string& env = "") {
  const fs::path log = testutil::fresh_dir("cli_log") / "out.txt";
  const std::string cmd = env + " '" + std::string(VHMC_CLI_PATH) + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, testutil::read_file(log)};
}

fs::path small_config(const fs::path& dir) {
  testutil::write_file(dir / "small.cfg",
                       "experiment_id = cli_small\n"
                       "target = mixture\n"
                       "mixture.weights = [0.7, 0.3]\n"
                       "mixture.means = [[2.5, -2.5], [-2.5, 2.5]]\n"
                       "mixture.covariances = [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]\n"
                       "sampler = lhmc\n"
                       "leapfrog_steps = 10\n"
                       "leapfrog_jitter = 2\n"
                       "n_samples = 300\n"
                       "burn_in = 50\n"
                       "n_replicates = 2\n"
                       "metrics = ess, rem\n"
                       "output_dir = " + (dir / "from_config").string() + "\n");
  return dir / "small.cfg";
}

TEST(Cli, SelftestPasses) {
  const Result r = run_cli("selftest");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("PASS"), std::string::npos);
  EXPECT_EQ(r.output.find("FAIL"), std::string::npos) << r.output;
}

TEST(Cli, MissingConfigExitsOne) {
  const Result r = run_cli("run /nonexistent/missing.cfg");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("config not found"), std::string::npos) << r.output;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("run --no-such-flag x.cfg").code, 2);
  EXPECT_EQ(run_cli("run --workers 0 x.cfg").code, 2);
}

TEST(Cli, HelpExitsZero) {
  const Result r = run_cli("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("selftest"), std::string::npos);
}

TEST(Cli, InvalidConfigExitsOne) {
  const fs::path dir = testutil::fresh_dir("cli_invalid");
  testutil::write_file(dir / "bad.cfg", "sampler = gibbs\nwhat = 3\n");
  const Result r = run_cli("run " + (dir / "bad.cfg").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("what"), std::string::npos) << r.output;
}

TEST(Cli, RunThenReport) {
  const fs::path dir = testutil::fresh_dir("cli_run");
  const fs::path out = dir / "flag_out";
  const Result r = run_cli("run --config " + small_config(dir).string() + " --out " + out.string() + " --seed 4");
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"report.csv", "summary.csv", "timing.csv", "errors.csv", "config.cfg", "series_rem_1.csv"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  EXPECT_NE(testutil::read_file(out / "config.cfg").find("master_seed = 4"), std::string::npos);
  const Result rep = run_cli("report " + out.string());
  ASSERT_EQ(rep.code, 0) << rep.output;
  EXPECT_EQ(testutil::read_file(out / "summary.csv"), testutil::read_file(out / "aggregate.csv"));
}

TEST(Cli, OutputDirectoryPrecedence) {
  const fs::path dir = testutil::fresh_dir("cli_prec");
  const fs::path cfg = small_config(dir);
  const std::string env = "VHMC_OUTPUT_DIR='" + (dir / "from_env").string() + "'";
  ASSERT_EQ(run_cli("run " + cfg.string(), env).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from_env" / "report.csv"));
  ASSERT_EQ(run_cli("run " + cfg.string() + " --out " + (dir / "from_flag").string(), env).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from_flag" / "report.csv"));
  ASSERT_EQ(run_cli("run " + cfg.string()).code, 0);
  EXPECT_TRUE(fs::exists(dir / "from_config" / "report.csv"));
}

TEST(Cli, FitWritesLoadableMixture) {
  const fs::path dir = testutil::fresh_dir("cli_fit");
  const fs::path cfg = small_config(dir);
  const Result r = run_cli("fit " + cfg.string() + " --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("modes found: 2"), std::string::npos) << r.output;
  std::string text = testutil::read_file(cfg);
  text.replace(text.find("sampler = lhmc"), 14, "sampler = vhmc");
  testutil::write_file(dir / "vhmc.cfg", text + "varfit.mixture_file = " + (dir / "mixture.cfg").string() + "\n");
  const Result run = run_cli("run " + (dir / "vhmc.cfg").string() + " --out " + (dir / "vhmc_out").string());
  EXPECT_EQ(run.code, 0) << run.output;
}

}  // namespace
