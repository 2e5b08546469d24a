#include "powershap/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "powershap/stats.hpp"

namespace powershap::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("powershap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string generated_csv() {
    const auto csv = path("data.csv");
    const auto r = call({"generate", "--samples", "300", "--features", "6", "--informative", "2",
                         "--seed", "3", "-o", csv});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return csv;
  }

  fs::path dir_;
};

const std::vector<std::string> kQuick{"--n-estimators", "20", "--max-depth", "3"};

std::vector<std::string> with_quick(std::vector<std::string> args) {
  args.insert(args.end(), kQuick.begin(), kQuick.end());
  return args;
}

TEST_F(CliTest, AutomaticReportEchoesDefaults) {
  const auto csv = generated_csv();
  const auto r = call(with_quick({"select", "--csv", csv, "--target", "y", "--task",
                                  "classification", "--mode", "automatic"}));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto report = json::parse(r.out);
  EXPECT_EQ(report["schema_version"], 1);
  EXPECT_EQ(report["config"]["mode"], "automatic");
  EXPECT_EQ(report["config"]["alpha"], 0.01);
  EXPECT_EQ(report["config"]["required_power"], 0.99);
  ASSERT_EQ(report["features"].size(), 6u);
  for (std::size_t j = 0; j < 6; ++j) {
    EXPECT_EQ(report["features"][j]["name"], "f" + std::to_string(j));
  }
  EXPECT_GE(report["iterations_performed"].get<int>(), 10);
}

TEST_F(CliTest, FixedModePlumbsFlags) {
  const auto csv = generated_csv();
  const auto out = path("report.json");
  const auto r = call(with_quick({"select", "--csv", csv, "--target", "y", "--task",
                                  "classification", "--mode", "fixed", "--iterations", "10",
                                  "--alpha", "0.05", "-o", out}));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(out);
  const auto report = json::parse(in);
  EXPECT_EQ(report["config"]["mode"], "fixed");
  EXPECT_EQ(report["config"]["alpha"], 0.05);
  EXPECT_EQ(report["iterations_performed"], 10);
  EXPECT_FALSE(report["truncated"].get<bool>());
}

TEST_F(CliTest, MalformedCellExitsTwoCitingLine) {
  const auto csv = path("bad.csv");
  {
    std::ofstream f(csv);
    f << "a,b,y\n";
    for (int line = 2; line <= 30; ++line) {
      f << (line == 17 ? "1.2.3" : std::to_string(line)) << ",0.5," << line % 2 << "\n";
    }
  }
  const auto r = call({"select", "--csv", csv, "--target", "y", "--task", "classification"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("1.2.3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("line 17"), std::string::npos) << r.err;
}

TEST_F(CliTest, ValidationErrorsExitTwo) {
  const auto csv = generated_csv();
  auto select = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"select", "--task", "classification"};
    args.insert(args.end(), extra.begin(), extra.end());
    return call(args);
  };
  EXPECT_EQ(select({"--csv", csv, "--target", "y", "--mode", "fixed", "--iterations", "2"}).code,
            kExitOk);
  EXPECT_EQ(select({"--csv", path("missing.csv"), "--target", "y"}).code, kExitValidation);
  const auto missing_target = select({"--csv", csv, "--target", "nope"});
  EXPECT_EQ(missing_target.code, kExitValidation);
  EXPECT_NE(missing_target.err.find("nope"), std::string::npos) << missing_target.err;
  EXPECT_EQ(select({"--csv", csv, "--target", "y", "--alpha", "2"}).code, kExitValidation);
  EXPECT_EQ(select({"--csv", csv, "--target", "y", "--mode", "sideways"}).code, kExitValidation);
  EXPECT_EQ(call({"select", "--csv", csv, "--target", "y"}).code, kExitValidation);
  EXPECT_EQ(call({"bogus"}).code, kExitValidation);
  EXPECT_EQ(call({"power", "--alpha", "0", "-d", "1"}).code, kExitValidation);
}

TEST_F(CliTest, UnwritableOutputExitsTwo) {
  const auto g = call({"generate", "--samples", "50", "--features", "3", "--informative", "1",
                       "-o", path("no/such/dir/out.csv")});
  EXPECT_EQ(g.code, kExitValidation) << g.err;
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(call({"--help"}).code, kExitOk); }

TEST_F(CliTest, SimulateShape) {
  const auto r = call(with_quick({"simulate", "--features", "8", "--ratios", "0.25", "--repeats",
                                  "5", "--samples", "200", "--mode", "fixed", "--iterations", "3"}));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "m,k,repeat,recovered_informative_pct,selected_noise_count,duration_seconds");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string m, k, rep, pct;
    std::getline(cells, m, ',');
    std::getline(cells, k, ',');
    std::getline(cells, rep, ',');
    std::getline(cells, pct, ',');
    EXPECT_EQ(m, "8");
    EXPECT_EQ(k, "2");
    EXPECT_EQ(rep, std::to_string(rows));
    EXPECT_GE(std::stod(pct), 0.0);
    EXPECT_LE(std::stod(pct), 100.0);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST_F(CliTest, GenerateWritesTruth) {
  const auto truth = path("truth.json");
  const auto r = call({"generate", "--samples", "100", "--features", "10", "--informative", "3",
                       "-o", path("g.csv"), "--truth", truth});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(truth);
  EXPECT_EQ(json::parse(in)["informative"].size(), 3u);
}

TEST(Power, ZeroEffectIsUnattainable) {
  const auto r = call({"power", "-d", "0"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "unattainable\n");
}

TEST(Power, PrintedCountSatisfiesBracketing) {
  for (double d : {0.8, 1.5, 3.0, 6.0}) {
    const auto r = call({"power", "--alpha", "0.01", "--power", "0.99", "-d", std::to_string(d)});
    ASSERT_EQ(r.code, kExitOk);
    const double n = std::stod(r.out);
    EXPECT_GE(n, 2.0);
    EXPECT_GE(stats::tt_test_power(0.01, n, d), 0.99);
    if (n > 2.0) EXPECT_LT(stats::tt_test_power(0.01, n - 1.0, d), 0.99);
  }
  EXPECT_LE(std::stod(call({"power", "-d", "4"}).out), 6.0);
}

TEST(Binary, ExitCodesFromProcess) {
  const char* exe = POWERSHAP_CLI_PATH;
  const std::string bin = std::string("\"") + exe + "\"";
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status(bin + " power -d 2"), 0);
  EXPECT_EQ(status(bin + " power --alpha 1.5 -d 2"), 2);
  EXPECT_EQ(status(bin + " select --csv /nonexistent.csv --target y --task regression"), 2);
}

}  // namespace
}  // namespace powershap::cli
