#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("unidos_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  std::string cmd = std::string(UNIDOS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
  auto dir = scratch("codes");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run("paths --n 4" + out), 0);
  EXPECT_EQ(run("paths --n 40" + out), 2);
  EXPECT_EQ(run("dos --phases nonsense" + out), 2);
  EXPECT_EQ(run("dos --r 1.5 --size 20 --realizations 1" + out), 2);
  EXPECT_EQ(run("lyapunov --grid circle:0" + out), 2);
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("analyticity --A 0.5 --B 1" + out), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, OutputsCarryClaimsAndManifest) {
  auto dir = scratch("claims");
  ASSERT_EQ(run("free-exact --size 60 --r 0.6 --out " + dir.string()), 0);
  std::string csv = slurp(dir / "free_exact.csv");
  EXPECT_EQ(csv.rfind("# claim:", 0), 0u);
  auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["command"], "free-exact");
  EXPECT_DOUBLE_EQ(manifest["config"]["r"].get<double>(), 0.6);
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("wall_time_s"));
  auto summary = nlohmann::json::parse(slurp(dir / "free-exact_summary.json"));
  EXPECT_LT(summary["ks_to_N0"].get<double>(), 0.1);
}

TEST(Cli, ReproducibleAcrossRunsAndThreads) {
  auto a = scratch("rep_a"), b = scratch("rep_b");
  const std::string args = "dos --uniform --size 40 --realizations 6 --moments 3 --seed 9";
  ASSERT_EQ(run(args + " --threads 1 --out " + a.string()), 0);
  ASSERT_EQ(run(args + " --threads 3 --out " + b.string()), 0);
  for (const char* f : {"dos_histogram.csv", "dos_phases.csv", "dos_summary.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Cli, ConfigFileMirrorsFlags) {
  auto dir = scratch("config"), other = scratch("config_flags");
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"command": "lyapunov", "phases": "arc:0.4", "grid": "list:0.5,2.0", "steps": 2000,
              "realizations": 2, "seed": 4, "r": 0.6})";
  }
  ASSERT_EQ(run("--config " + (dir / "run.json").string() + " --out " + dir.string()), 0);
  ASSERT_EQ(run("lyapunov --phases arc:0.4 --grid list:0.5,2.0 --steps 2000 --realizations 2 --seed 4 --r 0.6 --out " +
                other.string()),
            0);
  EXPECT_EQ(slurp(dir / "lyapunov.csv"), slurp(other / "lyapunov.csv"));
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"command\": ";
  }
  EXPECT_EQ(run("--config " + (dir / "bad.json").string()), 2);
}

TEST(Cli, EnvironmentOutputDirectory) {
  auto dir = scratch("env");
  std::string cmd = "UNIDOS_OUT_DIR=" + dir.string() + " " + UNIDOS_CLI_PATH + " analyticity --A 1 --B 1 > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  auto s = nlohmann::json::parse(slurp(dir / "analyticity_summary.json"));
  EXPECT_TRUE(s["analytic"].get<bool>());
}

TEST(Cli, SelftestPasses) {
  auto dir = scratch("selftest");
  EXPECT_EQ(run("selftest --out " + dir.string()), 0);
}
