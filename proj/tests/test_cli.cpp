#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "app.hpp"

using namespace cfi;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = CFI_DATA_DIR;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cfi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return app::run(static_cast<int>(argv.size()), argv.data());
}

class Cli : public ::testing::Test {
protected:
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() / ("cfi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  json read(const std::string& name) const {
    std::ifstream is(path(name));
    return json::parse(is);
  }
};

} // namespace

TEST_F(Cli, UsageErrors) {
  testing::internal::CaptureStderr();
  testing::internal::CaptureStdout();
  EXPECT_EQ(run_cli({}), 1);
  EXPECT_EQ(run_cli({"bogus"}), 1);
  EXPECT_EQ(run_cli({"verify"}), 1);
  EXPECT_EQ(run_cli({"verify", "--suite", "nope", "--count", "1"}), 1);
  EXPECT_EQ(run_cli({"distance", "--mu", data_dir + "/haar.json", "--nu", data_dir + "/haar.json", "--p", "0.5"}), 1);
  testing::internal::GetCapturedStdout();
  testing::internal::GetCapturedStderr();
}

TEST_F(Cli, EquilibriumOfZeroPotential) {
  ASSERT_EQ(run_cli({"equilibrium", "--potential", data_dir + "/zero.json", "--bandwidth", "16", "--out", path("eq.json")}), 0);
  const auto j = read("eq.json");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "equilibrium");
  EXPECT_EQ(j["energy"].get<double>(), 0.0);
  EXPECT_EQ(j["constant_C"].get<double>(), 0.0);
  EXPECT_EQ(j["min_density"].get<double>(), 1.0);
  for (double v : j["density_samples"]) EXPECT_EQ(v, 1.0);
}

TEST_F(Cli, EquilibriumOfCosine) {
  ASSERT_EQ(run_cli({"equilibrium", "--potential", data_dir + "/cosine.json", "--bandwidth", "16", "--out", path("eq.json")}), 0);
  const auto j = read("eq.json");
  EXPECT_NEAR(j["energy"].get<double>(), -0.01, 1e-15);
  EXPECT_NEAR(j["min_density"].get<double>(), 0.8, 1e-12);
}

TEST_F(Cli, DiracAgainstHaarDistance) {
  ASSERT_EQ(run_cli({"distance", "--mu", data_dir + "/dirac.json", "--nu", data_dir + "/haar.json", "--out", path("d.json")}), 0);
  const auto j = read("d.json");
  EXPECT_NEAR(j["value"].get<double>(), std::sqrt(2.0 * std::pow(std::numbers::pi, 3) / 3.0), 1e-14);
  EXPECT_EQ(j["kind"], "modified");
}

TEST_F(Cli, DistanceCsvHasMapSamples) {
  const auto mu = write("mu.json", R"({"kind":"fourier","coeffs":[[0,1.0],[1,0.2,0.1]]})");
  ASSERT_EQ(run_cli({"distance", "--mu", mu, "--nu", data_dir + "/haar.json", "--bandwidth", "8", "--csv", path("map.csv"),
                     "--out", path("d.json")}),
            0);
  std::ifstream is(path("map.csv"));
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x,theta,weight");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_GE(rows, 1024);
}

TEST_F(Cli, Functionals) {
  const auto mu = write("mu.json", R"({"kind":"fourier","coeffs":[[0,1.0],[1,0.15],[2,0.0,-0.1]]})");
  ASSERT_EQ(run_cli({"functional", "--name", "H", "--mu", mu, "--nu", data_dir + "/haar.json", "--out", path("h.json")}), 0);
  EXPECT_NEAR(read("h.json")["value"].get<double>(), 0.055, 1e-15);
  ASSERT_EQ(run_cli({"functional", "--name", "energy", "--potential", data_dir + "/zero.json", "--mu", data_dir + "/dirac.json",
                     "--out", path("e.json")}),
            0);
  EXPECT_EQ(read("e.json")["value"].dump(), "null");
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"functional", "--name", "entropy", "--mu", mu}), 1);
  testing::internal::GetCapturedStderr();
}

TEST_F(Cli, MalformedInputNamesTheField) {
  const auto bad = write("bad.json", R"({"kind":"fourier","coeffs":[[1,"x"]]})");
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"equilibrium", "--potential", bad}), 1);
  const std::string err = testing::internal::GetCapturedStderr();
  EXPECT_NE(err.find("coeffs[0]"), std::string::npos) << err;
  EXPECT_NE(err.find("bad.json"), std::string::npos) << err;

  const auto broken = write("broken.json", "{\"kind\": ");
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"equilibrium", "--potential", broken}), 1);
  EXPECT_NE(testing::internal::GetCapturedStderr().find("broken.json"), std::string::npos);

  const auto kindless = write("kindless.json", R"({"coeffs":[[1,0.1]]})");
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"equilibrium", "--potential", kindless}), 1);
  EXPECT_NE(testing::internal::GetCapturedStderr().find("kind"), std::string::npos);
}

TEST_F(Cli, PartialSupportIsAnInputError) {
  const auto strong = write("strong.json", R"({"kind":"fourier","coeffs":[[1,0.6]]})");
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"equilibrium", "--potential", strong}), 1);
  testing::internal::GetCapturedStderr();
}

TEST_F(Cli, VerifyPassesAndIsJobIndependent) {
  testing::internal::CaptureStdout();
  ASSERT_EQ(run_cli({"verify", "--suite", "poincare", "--bandwidth", "16", "--count", "40", "--jobs", "1", "--out", path("a.json"),
                     "--csv", path("a.csv")}),
            0);
  ASSERT_EQ(run_cli({"verify", "--suite", "poincare", "--bandwidth", "16", "--count", "40", "--jobs", "3", "--out", path("b.json")}),
            0);
  const std::string summary = testing::internal::GetCapturedStdout();
  EXPECT_NE(summary.find("poincare: 40 passed, 0 failed"), std::string::npos) << summary;
  auto a = read("a.json"), b = read("b.json");
  EXPECT_EQ(a["summary"]["passed"], 40);
  a.erase("timing");
  b.erase("timing");
  a["constants"].erase("jobs");
  b["constants"].erase("jobs");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(Cli, FailingSuiteExitsTwo) {
  testing::internal::CaptureStdout();
  EXPECT_EQ(run_cli({"verify", "--suite", "chain", "--bandwidth", "16", "--count", "60", "--out", path("r.json")}), 2);
  testing::internal::GetCapturedStdout();
  const auto j = read("r.json");
  EXPECT_GT(j["summary"]["failed"].get<int>(), 0);
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"verify", "--suite", "transport", "--bandwidth", "16", "--count", "2", "--rho", "0.9"}), 1);
  EXPECT_NE(testing::internal::GetCapturedStderr().find("Q''"), std::string::npos);
}

TEST_F(Cli, ConfigPrecedence) {
  const auto cfg = write("cfg.json", R"({"bandwidth": 16, "seed": 5, "count": 7})");
  testing::internal::CaptureStdout();
  ASSERT_EQ(run_cli({"verify", "--suite", "hk", "--config", cfg, "--seed", "9", "--out", path("r.json")}), 0);
  testing::internal::GetCapturedStdout();
  const auto j = read("r.json");
  EXPECT_EQ(j["constants"]["bandwidth"], 16);
  EXPECT_EQ(j["constants"]["seed"], 9);
  EXPECT_EQ(j["extras"]["count"], 7);
  const auto bad = write("bad.json", R"({"bandwidth": "wide"})");
  testing::internal::CaptureStderr();
  EXPECT_EQ(run_cli({"verify", "--suite", "hk", "--config", bad}), 1);
  EXPECT_NE(testing::internal::GetCapturedStderr().find("bandwidth"), std::string::npos);
}
