// Copyright 2026 The ldprepr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldprepr/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace ldprepr {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ldprepr_cli_" +
            std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("LDPREPR_SEED");
  }
  void TearDown() override {
    unsetenv("LDPREPR_SEED");
    fs::remove_all(dir_);
  }

  std::string PathOf(const std::string& name) const {
    return (dir_ / name).string();
  }

  // A small embedding file written through the CLI itself.
  std::string MakeEmbeddings() {
    const std::string path = PathOf("small.emb");
    const CliResult r = Invoke({"synth", "--out", path, "--records", "80", "--dim",
                             "6", "--seed", "3"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, ProbsPrintsOmeValues) {
  const CliResult r = Invoke({"probs", "--protocol", "ome", "--epsilon", "1",
                           "--lambda", "100", "--r", "50", "--l", "11"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("sensitivity = 550\n"), std::string::npos);
  EXPECT_NE(r.out.find("p1 = 0.9900990099009901\n"), std::string::npos);
  EXPECT_NE(r.out.find("q = 0.00988318240762"), std::string::npos);
}

TEST_F(CliTest, ProbsSueDefaultsToTwiceR) {
  const CliResult r =
      Invoke({"probs", "--protocol", "sue", "--epsilon", "1", "--r", "50"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("delta_f = 100\n"), std::string::npos);
  EXPECT_NE(r.out.find("q = 0.49750002083312"), std::string::npos);
}

TEST_F(CliTest, AuditReportsPairedEpsilon) {
  const CliResult r = Invoke({"audit", "--epsilon", "1", "--lambda", "100", "--r",
                           "50", "--l", "11"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("paired_product_epsilon = 1.0000000000000"),
            std::string::npos);
  EXPECT_NE(r.out.find("audit_max_log_ratio = 3796.5"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"probs", "--epsilon", "1", "--nope", "3"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"probs", "--protocol", "ome", "--epsilon", "1"}).code,
            kExitUsage);
  const std::string bits = PathOf("in.bits");
  std::ofstream(bits) << "#bits len=4 classes=2\n0\t1010\n";
  const CliResult r = Invoke({"perturb", "--protocol", "sue", "--epsilon", "1",
                           "--in", bits, "--out", PathOf("out.bits")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--delta-f"), std::string::npos);
  EXPECT_FALSE(fs::exists(PathOf("out.bits")));
}

TEST_F(CliTest, DomainErrorsExitWithOne) {
  const CliResult r = Invoke({"probs", "--protocol", "ome", "--epsilon=-1", "--r", "50", "--l", "10"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_EQ(r.err.rfind("ldprepr: ", 0), 0u);
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);

  const std::string bad = PathOf("bad.emb");
  std::ofstream(bad) << "#emb dim=2 classes=2\n0\t1,2\n0\t1,x\n";
  const CliResult e = Invoke({"encode", "--in", bad, "--out", PathOf("x.bits")});
  EXPECT_EQ(e.code, kExitFailure);
  EXPECT_NE(e.err.find(":3:"), std::string::npos);

  EXPECT_EQ(Invoke({"encode", "--in", PathOf("missing.emb"), "--out",
                 PathOf("x.bits")})
                .code,
            kExitFailure);
}

TEST_F(CliTest, EncodePerturbTrainFlow) {
  const std::string emb = MakeEmbeddings();
  const std::string clean = PathOf("clean.bits");
  const std::string noisy = PathOf("noisy.bits");
  CliResult r = Invoke({"encode", "--in", emb, "--out", clean});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("length = 60\n"), std::string::npos);
  EXPECT_EQ(Slurp(clean).rfind("#bits len=60 classes=2\n", 0), 0u);

  r = Invoke({"perturb", "--protocol", "ome", "--epsilon", "1", "--lambda", "10",
           "--in", clean, "--out", noisy, "--seed", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string first = Slurp(noisy);
  EXPECT_NE(first, Slurp(clean));
  r = Invoke({"perturb", "--protocol", "ome", "--epsilon", "1", "--lambda", "10",
           "--in", clean, "--out", noisy, "--seed", "4"});
  EXPECT_EQ(Slurp(noisy), first);

  r = Invoke({"train", "--in", noisy, "--epochs", "2", "--hidden", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("test_accuracy = "), std::string::npos);
}

TEST_F(CliTest, SeedEnvironmentVariable) {
  const std::string emb = MakeEmbeddings();
  const std::string clean = PathOf("clean.bits");
  ASSERT_EQ(Invoke({"encode", "--in", emb, "--out", clean}).code, kExitOk);
  const auto perturb = [&](const std::string& out) {
    return Invoke({"perturb", "--protocol", "oue", "--epsilon", "2", "--delta-f",
                "12", "--in", clean, "--out", out})
        .code;
  };
  setenv("LDPREPR_SEED", "11", 1);
  ASSERT_EQ(perturb(PathOf("a.bits")), kExitOk);
  ASSERT_EQ(perturb(PathOf("b.bits")), kExitOk);
  setenv("LDPREPR_SEED", "12", 1);
  ASSERT_EQ(perturb(PathOf("c.bits")), kExitOk);
  EXPECT_EQ(Slurp(PathOf("a.bits")), Slurp(PathOf("b.bits")));
  EXPECT_NE(Slurp(PathOf("a.bits")), Slurp(PathOf("c.bits")));

  setenv("LDPREPR_SEED", "abc", 1);
  EXPECT_EQ(perturb(PathOf("d.bits")), kExitUsage);
}

TEST_F(CliTest, ExperimentWritesReport) {
  const std::string emb = MakeEmbeddings();
  const std::string cfg = PathOf("exp.cfg");
  std::ofstream(cfg) << "mode = ldpnn\nprotocol = ome\nepsilon = 1\n"
                        "hidden_units = 8\nepochs = 2\nruns = 2\n"
                        "base_seed = 1\ninput = "
                     << emb << "\n";
  const std::string report = PathOf("report.txt");
  CliResult r = Invoke({"experiment", "--config", cfg, "--out", report, "--set",
                     "lambda=50"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("mean_accuracy = "), std::string::npos);
  const std::string text = Slurp(report);
  EXPECT_NE(text.find("lambda = 50\n"), std::string::npos);
  EXPECT_NE(text.find("run_1_model_inputs = train:perturbed_bits "
                      "test:perturbed_bits\n"),
            std::string::npos);

  r = Invoke({"experiment", "--config", cfg, "--set", "bogus=1"});
  EXPECT_EQ(r.code, kExitFailure);
  r = Invoke({"experiment", "--config", cfg, "--set", "novalue"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST_F(CliTest, CurvesTable) {
  const std::string path = PathOf("curves.tsv");
  const CliResult r =
      Invoke({"curves", "--out", path, "--epsilons", "0.5,1", "--lambdas", "1,100",
           "--protocols", "ome,sue,oue", "--r", "50", "--l", "11"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string text = Slurp(path);
  EXPECT_EQ(text.rfind("protocol\tepsilon\tlambda\tp1\tp2\tq\n", 0), 0u);
  EXPECT_NE(text.find("ome\t1\t100\t0.9900990099009901\t"), std::string::npos);
  EXPECT_NE(text.find("oue\t0.5\t-\t0.5\t0.5\t"), std::string::npos);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const CliResult r = Invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("experiment"), std::string::npos);
}

}  // namespace
}  // namespace ldprepr
