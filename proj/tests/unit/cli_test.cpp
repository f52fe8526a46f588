#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "symnmf/experiment.hpp"
#include "symnmf/matrix_market.hpp"
#include "symnmf/similarity.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string stdout_text;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("symnmf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const std::string out = path("stdout.txt");
    const std::string cmd = env + " " + SYMNMF_CLI_PATH + " " + args + " > " + out + " 2> " + path("stderr.txt");
    const int raw = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    o.stdout_text = ss.str();
    return o;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunWritesReportAndTrace) {
  const auto o = run("run --matrix gen:class1:n=60,p=4 --k 4 --starts 2 --seed 3 --numax 300 --out " +
                     path("r.json") + " --trace " + path("t.csv"));
  ASSERT_TRUE(o.code == 0 || o.code == 2) << o.stdout_text;
  const auto report = symnmf::read_report_json(path("r.json"));
  EXPECT_EQ(report.k, 4);
  EXPECT_EQ(report.n, 60);
  ASSERT_EQ(report.starts.size(), 2u);
  EXPECT_EQ(o.code == 0, report.status == symnmf::SymStatus::Converged);

  std::ifstream csv(path("t.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, report.nu_tot);
}

TEST_F(CliTest, IterationCapExitsWithTwo) {
  const auto o = run("run --matrix gen:class1:n=40,p=6 --k 3 --starts 1 --numax 1 --update g1.01");
  EXPECT_EQ(o.code, 2) << o.stdout_text;
}

TEST_F(CliTest, ConvergedRunExitsWithZero) {
  const auto o = run("run --matrix gen:class1:n=40,p=3 --k 3 --starts 1 --numax 500");
  EXPECT_EQ(o.code, 0) << o.stdout_text;
}

TEST_F(CliTest, ErrorsExitWithOne) {
  EXPECT_EQ(run("run --matrix " + path("missing.mtx") + " --k 2").code, 1);
  EXPECT_EQ(run("run --matrix gen:class1:n=20,p=2 --k 0").code, 1);
  EXPECT_EQ(run("run --matrix gen:class1:n=20,p=2 --k 2 --inner lbfgs").code, 1);
  EXPECT_EQ(run("run --matrix gen:class1:n=20,p=2 --k 2 --update g").code, 1);
  EXPECT_EQ(run("run --matrix gen:class1:n=20,p=2 --k 30").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(CliTest, EnvironmentSeedOverridesFlag) {
  const auto o = run("run --matrix gen:class1:n=30,p=3 --k 2 --starts 2 --seed 5 --numax 20 --out " + path("r.json"),
                     "SYMNMF_SEED=100");
  ASSERT_TRUE(o.code == 0 || o.code == 2);
  const auto report = symnmf::read_report_json(path("r.json"));
  ASSERT_EQ(report.starts.size(), 2u);
  EXPECT_EQ(report.starts[0].seed, 100u);
  EXPECT_EQ(report.starts[1].seed, 101u);

  EXPECT_EQ(run("run --matrix gen:class1:n=30,p=3 --k 2", "SYMNMF_SEED=abc").code, 1);
}

TEST_F(CliTest, GenWritesMatrixMarket) {
  ASSERT_EQ(run("gen --matrix gen:class1:n=12,p=3,seed=4 --out " + path("a.mtx")).code, 0);
  const auto a = symnmf::read_matrix_market(path("a.mtx"));
  EXPECT_EQ(a, symnmf::resolve_matrix_source("gen:class1:n=12,p=3,seed=4"));
}

TEST_F(CliTest, PointsThenRunOnPointSource) {
  ASSERT_EQ(run("points --kind wsn --n 120 --seed 2 --out " + path("p.csv")).code, 0);
  EXPECT_EQ(symnmf::read_points_csv(path("p.csv")).points.size(), 120u);
  const auto o = run("run --matrix points:" + path("p.csv") + " --k 4 --starts 1 --numax 50");
  EXPECT_TRUE(o.code == 0 || o.code == 2);
}

TEST_F(CliTest, TableAggregatesReports) {
  ASSERT_NE(run("run --matrix gen:class1:n=30,p=3 --k 2 --starts 1 --numax 20 --group g --out " + path("a.json")).code,
            1);
  ASSERT_NE(run("run --matrix gen:class1:n=30,p=4 --k 2 --starts 1 --numax 20 --group g --out " + path("b.json")).code,
            1);
  const auto o = run("table " + path("a.json") + " " + path("b.json"));
  ASSERT_EQ(o.code, 0);
  const auto a = symnmf::read_report_json(path("a.json"));
  const auto b = symnmf::read_report_json(path("b.json"));
  const auto rows = symnmf::aggregate({a, b});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NE(o.stdout_text.find(symnmf::format_row(rows.front())), std::string::npos) << o.stdout_text;
}
