// Runs the installed-style binary end to end and checks exit codes and output.

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(FRAMEPOT_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("framepot_cli_" + name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, EnergyOfRepeatedOrtho) {
  const auto path = write_temp("ro.json", R"({"d":3,"vectors":[[1,0,0],[0,1,0],[0,0,1],[1,0,0]]})");
  const CliResult r = run("energy " + path.string() + " --p 1.3");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["result"]["energy"].get<double>(), 2.0);
  EXPECT_EQ(j["result"]["rank"].get<int>(), 3);
  EXPECT_EQ(j["manifest"]["subcommand"], "energy");
}

TEST(Cli, EnergyErrorCodes) {
  const auto bad = write_temp("bad.json", R"({"d":2,"vectors":[[0.5,0],[0,1]]})");
  EXPECT_EQ(run("energy " + bad.string() + " --p 1").code, 3);
  const auto broken = write_temp("broken.json", R"({"d":2,"vectors":[[1,0)");
  EXPECT_EQ(run("energy " + broken.string() + " --p 1").code, 2);
  EXPECT_EQ(run("energy /nonexistent.json --p 1").code, 2);
  EXPECT_EQ(run("energy").code, 2);
}

TEST(Cli, BoundExitCodes) {
  const auto on = write_temp("on.json", R"({"d":2,"vectors":[[1,0],[0,1]]})");
  EXPECT_EQ(run("bound " + on.string() + " --p 1.5").code, 4);
  const auto ro = write_temp("ro2.json", R"({"d":2,"vectors":[[1,0],[0,1],[1,0]]})");
  const CliResult r = run("bound " + ro.string() + " --p 1.1699250014423124");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["result"]["slack"].get<double>(), 0.0, 1e-9);
}

TEST(Cli, VerifyTheoremCodes) {
  EXPECT_EQ(run("verify-theorem --m 5").code, 0);
  EXPECT_EQ(run("verify-theorem --m 1 --p-override 1.5849625007211562").code, 0);
  EXPECT_EQ(run("verify-theorem --m 17").code, 4);
}

TEST(Cli, TransitionFivePoints) {
  const CliResult r = run("transition --n 5 --epsilon 1e-3");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["result"]["solution"]["alpha"].get<double>(), 0.434216900714321, 1e-14);
  EXPECT_NEAR(j["result"]["solution"]["p"].get<double>(), 1.777662518870185, 1e-14);
  EXPECT_LT(j["result"]["witness"]["energy"].get<double>(), 8.0);
  EXPECT_EQ(run("transition --n 6").code, 2);
}

TEST(Cli, MinimizeIsDeterministicAcrossThreads) {
  const std::string args = "minimize --d 2 --n 5 --p 1.9 --seed 7 --restarts 6 --max-iterations 1500";
  const CliResult a = run(args + " --threads 1");
  const CliResult b = run(args + " --threads 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_LT(nlohmann::json::parse(a.out)["result"]["best_energy"].get<double>(), 8.0);
}

TEST(Cli, ScanWritesFourRowCsv) {
  const auto csv = std::filesystem::temp_directory_path() / "framepot_cli_scan.csv";
  const CliResult r = run("scan --d-list 2,3 --k-list 1,2 --m-list 1 --tol 0.05 --restarts 3 "
                    "--max-iterations 600 --csv " + csv.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream in(csv);
  std::string line;
  int data = -1;  // first non-comment line is the column header
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) ++data;
  }
  EXPECT_EQ(data, 4);
}
