#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "workstats/cli.hpp"

using namespace workstats;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "workstats");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("workstats_test_" + name);
}

} // namespace

TEST(Cli, FcsDistributionSumsToOne) {
  const CliRun r = run({"distribution", "--protocol", "fcs", "--preset", "qubit-fig2", "--beta", "1",
                     "--phi", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"work", "weight"}));
  double total = 0.0, previous = -1e300;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    const double w = std::stod(rows[n][0]);
    EXPECT_GT(w, previous);
    previous = w;
    total += std::stod(rows[n][1]);
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_NE(r.out.find("e-01"), std::string::npos);
}

TEST(Cli, TpmWeightsNonnegative) {
  const CliRun r = run({"distribution", "--protocol", "tpm", "--beta", "1", "--phi", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"work", "probability"}));
  for (std::size_t n = 1; n < rows.size(); ++n) EXPECT_GE(std::stod(rows[n][1]), 0.0);
}

TEST(Cli, PointerDistributionGrid) {
  const CliRun r = run({"distribution", "--protocol", "pointer", "--sigma-ratio", "1.0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4097u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "density", "work_equiv"}));
  double mass = 0.0;
  for (std::size_t n = 2; n < rows.size(); ++n) {
    const double x0 = std::stod(rows[n - 1][0]), x1 = std::stod(rows[n][0]);
    mass += 0.5 * (x1 - x0) * (std::stod(rows[n - 1][1]) + std::stod(rows[n][1]));
    EXPECT_DOUBLE_EQ(std::stod(rows[n][2]), -x1);
  }
  EXPECT_NEAR(mass, 1.0, 1e-6);
}

TEST(Cli, FigurePresetsSelectColumns) {
  CliRun r = run({"sweep", "--figure", "2b", "--beta-points", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(parse_csv(r.out)[0], (std::vector<std::string>{"beta_delta", "label", "mean_work"}));
  EXPECT_EQ(parse_csv(r.out).size(), 1u + 5u * 4u);

  r = run({"sweep", "--figure", "3a", "--beta-points", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(parse_csv(r.out)[0], (std::vector<std::string>{"beta_delta", "label", "exp_work"}));

  r = run({"sweep", "--figure", "3c", "--sigma-points", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"sigma_ratio", "work_diff"}));
  EXPECT_EQ(rows.size(), 8u);
}

TEST(Cli, EmptyPhaseListIsThermalOnly) {
  const CliRun r = run({"sweep", "--sweep", "beta", "--phis", "", "--beta-points", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t n = 1; n < rows.size(); ++n) {
    EXPECT_EQ(rows[n][1], "thermal");
    EXPECT_NEAR(std::stod(rows[n][2]), 1.0, 1e-12);
  }
}

TEST(Cli, ArgumentErrorsExitTwo) {
  EXPECT_EQ(run({"distribution", "--protocol", "bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"distribution", "--no-such-flag"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--phis", "0,abc"}).code, kExitUsage);
  EXPECT_EQ(run({"distribution", "--sigma-ratio", "-1", "--protocol", "pointer"}).code, kExitUsage);
  EXPECT_EQ(run({"distribution", "--config", "/nonexistent/workstats.cfg"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  const CliRun r = run({"sweep", "--beta-min", "0"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, NumericalFailureExitsThree) {
  const CliRun r = run({"sweep", "--sweep", "beta", "--protocol", "pointer", "--sigma-ratio", "100",
                     "--beta-min", "1", "--beta-max", "1", "--beta-points", "1"});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_NE(r.err.find("double range"), std::string::npos);
}

TEST(Cli, SelfcheckPassesAndIsReproducible) {
  const CliRun a = run({"selfcheck", "--seed", "7", "--trials", "10"});
  const CliRun b = run({"selfcheck", "--seed", "7", "--trials", "10"});
  EXPECT_EQ(a.code, kExitOk) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("all checks passed"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = temp_path("override.cfg");
  {
    std::ofstream f(cfg);
    f << "# comment\n[distribution]\nprotocol = tpm\nbeta = 2\nphi = 1\n";
  }
  const CliRun from_file = run({"distribution", "--config", cfg.string()});
  const CliRun explicit_flags = run({"distribution", "--protocol", "tpm", "--beta", "2", "--phi", "1"});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  EXPECT_EQ(from_file.out, explicit_flags.out);

  const CliRun overridden = run({"distribution", "--config", cfg.string(), "--beta", "0.5"});
  const CliRun want = run({"distribution", "--protocol", "tpm", "--beta", "0.5", "--phi", "1"});
  EXPECT_EQ(overridden.out, want.out);
  std::filesystem::remove(cfg);
}

TEST(Cli, OutFileMatchesStdout) {
  const auto path = temp_path("out.csv");
  const CliRun to_stdout = run({"sweep", "--figure", "2a", "--beta-points", "6"});
  const CliRun to_file = run({"sweep", "--figure", "2a", "--beta-points", "6", "--out", path.string()});
  ASSERT_EQ(to_file.code, kExitOk) << to_file.err;
  EXPECT_TRUE(to_file.out.empty());
  std::ifstream f(path, std::ios::binary);
  const std::string contents((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(contents, to_stdout.out);
  std::filesystem::remove(path);
}

TEST(Cli, JsonOutput) {
  const CliRun r = run({"distribution", "--protocol", "fcs", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["columns"], (nlohmann::json{"work", "weight"}));
  EXPECT_EQ(doc["rows"].size(), 5u);
}

TEST(Cli, ThreadBudgetFromEnvironment) {
  ::setenv("WORKSTATS_THREADS", "3", 1);
  const CliRun three = run({"sweep", "--figure", "3b", "--beta-points", "9"});
  ::setenv("WORKSTATS_THREADS", "1", 1);
  const CliRun one = run({"sweep", "--figure", "3b", "--beta-points", "9"});
  EXPECT_EQ(three.code, kExitOk);
  EXPECT_EQ(three.out, one.out);
  ::setenv("WORKSTATS_THREADS", "zero", 1);
  EXPECT_EQ(run({"sweep", "--figure", "3b", "--beta-points", "2"}).code, kExitUsage);
  ::unsetenv("WORKSTATS_THREADS");
}
