#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(IOTAUTHSIM_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe))
    result.output.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("iotauthsim_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config_path(const std::string& name) {
  return std::string(CONFIG_DIR) + "/" + name;
}

// Everything below the timestamp line must be reproducible; the timestamp
// itself is pinned through SOURCE_DATE_EPOCH.
void pin_clock() { setenv("SOURCE_DATE_EPOCH", "1700000000", 1); }

}  // namespace

TEST(CliTest, SimulateLightweightWritesReport) {
  const fs::path out = temp_dir("lw");
  const RunResult r = run_cli("simulate lightweight --config " +
                              config_path("lightweight.conf") + " --out " +
                              out.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "report.txt"));
  EXPECT_TRUE(fs::exists(out / "trajectories.csv"));
  EXPECT_TRUE(fs::exists(out / "transcripts.csv"));
  const std::string report = read_file(out / "report.txt");
  EXPECT_NE(report.find("format_version: 1"), std::string::npos);
  EXPECT_NE(report.find("config_hash: "), std::string::npos);
  EXPECT_NE(report.find("rng_seed: "), std::string::npos);
  EXPECT_NE(report.find("timestamp: "), std::string::npos);
  EXPECT_NE(report.find("scenario: lightweight"), std::string::npos);
}

TEST(CliTest, SimulateHolisticReportsDemotionSteps) {
  const fs::path out = temp_dir("ho");
  const RunResult r = run_cli("simulate holistic --config " +
                              config_path("holistic.conf") + " --out " +
                              out.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("sources=1 demotion_step="), std::string::npos);
  EXPECT_NE(r.output.find("sources=3 demotion_step="), std::string::npos);
  const std::string csv = read_file(out / "trajectories.csv");
  EXPECT_NE(csv.find("step,device_id,evidence_source_count,trust,level"),
            std::string::npos);
  EXPECT_NE(csv.find("0,misdetected-adversary,1,0.9"), std::string::npos);
}

TEST(CliTest, MissingRequiredFieldExitsTwoAndNamesIt) {
  const fs::path out = temp_dir("bad");
  const fs::path cfg = out / "norho.conf";
  std::ofstream(cfg) << "[scenario]\nrng_seed = 1\n";
  const RunResult r =
      run_cli("simulate lightweight --config " + cfg.string() + " --out " +
              out.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("channel.rho"), std::string::npos) << r.output;
}

TEST(CliTest, MalformedValueExitsTwoWithLine) {
  const fs::path out = temp_dir("bad2");
  const fs::path cfg = out / "badval.conf";
  std::ofstream(cfg) << "[channel]\nrho = quite-high\n";
  const RunResult r =
      run_cli("simulate lightweight --config " + cfg.string() + " --out " +
              out.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("channel.rho"), std::string::npos);
  EXPECT_NE(r.output.find("line 2"), std::string::npos) << r.output;
}

TEST(CliTest, SeededRunsAreByteIdentical) {
  pin_clock();
  const fs::path out1 = temp_dir("det1");
  const fs::path out2 = temp_dir("det2");
  const std::string base = "simulate lightweight --config " +
                           config_path("lightweight.conf") + " --seed 7 --out ";
  ASSERT_EQ(run_cli(base + out1.string()).exit_code, 0);
  ASSERT_EQ(run_cli(base + out2.string()).exit_code, 0);
  EXPECT_EQ(read_file(out1 / "report.txt"), read_file(out2 / "report.txt"));
  EXPECT_EQ(read_file(out1 / "trajectories.csv"),
            read_file(out2 / "trajectories.csv"));
  EXPECT_EQ(read_file(out1 / "transcripts.csv"),
            read_file(out2 / "transcripts.csv"));
}

TEST(CliTest, CompareEmitsRowsAndLeakFlags) {
  const fs::path out = temp_dir("cmp");
  const RunResult r =
      run_cli("compare --config " + config_path("compare.conf") +
              " --n-grid 1,10,100 --out " + out.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("crossover_n0="), std::string::npos);
  EXPECT_NE(r.output.find("lightweight privacy_leak_free=true"), std::string::npos);
  EXPECT_NE(r.output.find("baseline privacy_leak_free=false"), std::string::npos);

  const std::string csv = read_file(out / "comparison.csv");
  EXPECT_NE(csv.find("n,scheme,messages,sensor_ops,gateway_ops,privacy_leak_free"),
            std::string::npos);
  int data_rows = 0;
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'n') ++data_rows;
  EXPECT_EQ(data_rows, 6);  // 2 schemes x 3 grid points
}

TEST(CliTest, CompareEmptyGridExitsTwo) {
  const fs::path out = temp_dir("cmpe");
  const fs::path cfg = out / "nogrid.conf";
  std::ofstream(cfg) << "[channel]\nrho = 0.99\n";
  // No compare.n_grid in config, no --n-grid flag.
  const RunResult r =
      run_cli("compare --config " + cfg.string() + " --out " + out.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("compare.n_grid"), std::string::npos);
}

TEST(CliTest, QuantizeDemoNoiselessHasZeroDisagreement) {
  const fs::path out = temp_dir("qd");
  const fs::path cfg = out / "noiseless.conf";
  std::ofstream(cfg) << "[channel]\nrho = 1.0\n[scenario]\nrng_seed = 3\n";
  const RunResult r = run_cli("quantize-demo --config " + cfg.string());
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("svm_guard_disagreement=0\n"), std::string::npos);
  EXPECT_NE(r.output.find("rss_baseline_disagreement=0\n"), std::string::npos);
  EXPECT_NE(r.output.find("seed_establishment=ack"), std::string::npos);
}

TEST(CliTest, QuantizeDemoNoisyGuardBeatsBaselineAndEveNearHalf) {
  const RunResult r =
      run_cli("quantize-demo --config " + config_path("holistic.conf"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  double svm = -1, rss = -1, eve = -1;
  std::istringstream lines(r.output);
  std::string line;
  while (std::getline(lines, line)) {
    std::sscanf(line.c_str(), "svm_guard_disagreement=%lf", &svm);
    std::sscanf(line.c_str(), "rss_baseline_disagreement=%lf", &rss);
    std::sscanf(line.c_str(), "eve_bit_agreement=%lf", &eve);
  }
  ASSERT_GE(svm, 0.0);
  ASSERT_GE(rss, 0.0);
  EXPECT_LE(svm, rss);
  EXPECT_NEAR(eve, 0.5, 0.1);
}

TEST(CliTest, UnknownSubcommandFails) {
  const RunResult r = run_cli("frobnicate");
  EXPECT_NE(r.exit_code, 0);
}
