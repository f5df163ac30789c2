// Copyright 2026 The scora Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scora/experiments.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "scora/config_file.hpp"
#include "scora/io.hpp"
#include "scora/metrics.hpp"

namespace scora {
namespace {

namespace fs = std::filesystem;

ExperimentConfig SmallConfig() {
  ExperimentConfig c;
  c.num_entities = 15;
  c.budgets = {50, 400};
  c.fractions = {0.0, 0.5, 1.0};
  c.repetitions = 4;
  c.base_seed = 9;
  c.threads = 1;
  return c;
}

std::string Csv(const ExperimentConfig& c, const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  WriteResultsCsv(os, c, rows);
  return os.str();
}

TEST(ConfigTest, ApplySetting) {
  ExperimentConfig c;
  ApplySetting(c, "A", {"40"});
  ApplySetting(c, "embedding", {"onehot"});
  ApplySetting(c, "num_clusters", {"3"});
  ApplySetting(c, "k_c", {"2"});
  ApplySetting(c, "k_r", {"uniform"});
  ApplySetting(c, "f", {"gaussian:2"});
  ApplySetting(c, "prior", {"cauchy"});
  ApplySetting(c, "budgets", {"10", "1e3"});
  ApplySetting(c, "p_c", {"0.25"});
  ApplySetting(c, "pipeline", {"active_comparisons"});
  ApplySetting(c, "reps", {"7"});
  ApplySetting(c, "seed", {"18446744073709551615"});
  EXPECT_EQ(c.num_entities, 40);
  EXPECT_EQ(c.scheme, EmbeddingScheme::kOneHot);
  EXPECT_EQ(c.num_clusters, 3);
  EXPECT_EQ(c.comparison_law, RootLaw::KAry(2));
  EXPECT_EQ(c.rating_law, RootLaw::ContinuousUniform());
  EXPECT_EQ(c.inference_f(), RootLaw::Gaussian(2.0));
  EXPECT_EQ(c.inference_g(), RootLaw::ContinuousUniform());
  EXPECT_EQ(c.prior.family, PriorSpec::Family::kCauchy);
  EXPECT_EQ(c.budgets, (std::vector<double>{10, 1000}));
  EXPECT_EQ(c.fractions, (std::vector<double>{0.25}));
  EXPECT_EQ(c.pipeline, Pipeline::kActiveComparisonsFirst);
  EXPECT_EQ(c.repetitions, 7);
  EXPECT_EQ(c.base_seed, 18446744073709551615ULL);
  EXPECT_NO_THROW(c.Validate());
}

TEST(ConfigTest, RejectsBadSettings) {
  ExperimentConfig c;
  EXPECT_THROW(ApplySetting(c, "nope", {"1"}), InputError);
  EXPECT_THROW(ApplySetting(c, "A", {"1", "2"}), InputError);
  EXPECT_THROW(ApplySetting(c, "A", {"ten"}), InputError);
  EXPECT_THROW(ApplySetting(c, "k_c", {"1"}), InputError);
  EXPECT_THROW(ApplySetting(c, "k_r", {"cauchy"}), InputError);
  EXPECT_THROW(ApplySetting(c, "pipeline", {"eager"}), InputError);
  EXPECT_THROW(ApplySetting(c, "budgets", {}), InputError);
  ExperimentConfig bad;
  bad.fractions = {1.5};
  EXPECT_THROW(bad.Validate(), InputError);
  bad = ExperimentConfig{};
  bad.repetitions = 0;
  EXPECT_THROW(bad.Validate(), InputError);
  bad = ExperimentConfig{};
  bad.budgets = {-1};
  EXPECT_THROW(bad.Validate(), InputError);
}

TEST(ConfigTest, TomlFile) {
  std::istringstream in(
      "# comment\nA = 12\nk_c = \"uniform\"\nk_r = 3\n"
      "budgets = [100, 1000]\np_c = [0, 1]\nseed = 5\n");
  ExperimentConfig c;
  ApplyConfigStream(c, in);
  EXPECT_EQ(c.num_entities, 12);
  EXPECT_EQ(c.rating_law, RootLaw::KAry(3));
  EXPECT_EQ(c.budgets, (std::vector<double>{100, 1000}));
  EXPECT_EQ(c.base_seed, 5u);
  std::istringstream nested("[run]\nA = 3\n");
  EXPECT_THROW(ApplyConfigStream(c, nested), InputError);
  std::istringstream unknown("alpha = 3\n");
  EXPECT_THROW(ApplyConfigStream(c, unknown), InputError);
}

TEST(ConfigTest, ShippedConfigsMatchTheirSettings) {
  const std::string dir = SCORA_CONFIG_DIR;
  ExperimentConfig a;
  ApplyConfigFile(a, dir + "/fig1a.toml");
  EXPECT_EQ(a.num_entities, 100);
  EXPECT_EQ(a.comparison_law, RootLaw::ContinuousUniform());
  EXPECT_EQ(a.budgets, DefaultBudgetGrid());
  EXPECT_EQ(a.fractions, (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(a.pipeline, Pipeline::kPassive);
  EXPECT_EQ(a.repetitions, 20);

  ExperimentConfig b;
  ApplyConfigFile(b, dir + "/fig1b.toml");
  EXPECT_EQ(b.inference_f(), RootLaw::Gaussian(1.0));
  EXPECT_EQ(b.inference_g(), RootLaw::Gaussian(1.0));
  EXPECT_EQ(b.comparison_law, RootLaw::ContinuousUniform());

  ExperimentConfig f4;
  ApplyConfigFile(f4, dir + "/fig4.toml");
  EXPECT_EQ(f4.scheme, EmbeddingScheme::kOneHot);
  EXPECT_EQ(f4.num_clusters, 5);
  EXPECT_EQ(f4.prior.family, PriorSpec::Family::kCauchy);
  EXPECT_EQ(f4.cost_comparison, 8.0);
  EXPECT_EQ(f4.fractions, DefaultFractionGrid());
  EXPECT_EQ(f4.pipeline, Pipeline::kActiveRatingsFirst);

  for (const char* name : {"fig2.toml", "fig3.toml", "appc_ratings.toml", "appc_comparisons.toml"}) {
    ExperimentConfig c;
    EXPECT_NO_THROW(ApplyConfigFile(c, dir + "/" + name)) << name;
    EXPECT_NO_THROW(c.Validate()) << name;
    EXPECT_NE(c.pipeline, Pipeline::kPassive) << name;
  }
}

TEST(AggregationTest, ConfidenceInterval) {
  ResultRow row;
  row.values = {1.0, 2.0, 3.0, 4.0, std::nan("")};
  Summarize(row);
  EXPECT_EQ(row.n_success, 4);
  EXPECT_EQ(row.n_failed, 1);
  EXPECT_DOUBLE_EQ(row.mean, 2.5);
  // sample sd of 1..4 is sqrt(5/3)
  EXPECT_NEAR(row.ci95, 1.96 * std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  ResultRow one;
  one.values = {0.7};
  Summarize(one);
  EXPECT_EQ(one.mean, 0.7);
  EXPECT_TRUE(std::isnan(one.ci95));
}

TEST(RunConvergenceTest, DeterministicAndThreadIndependent) {
  ExperimentConfig c = SmallConfig();
  std::string first = Csv(c, RunConvergence(c));
  EXPECT_EQ(first, Csv(c, RunConvergence(c)));
  c.threads = 3;
  EXPECT_EQ(first, Csv(c, RunConvergence(c)));
  c.base_seed = 10;
  EXPECT_NE(first, Csv(c, RunConvergence(c)));
}

TEST(RunConvergenceTest, RowsFollowTheGrid) {
  ExperimentConfig c = SmallConfig();
  auto rows = RunConvergence(c);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].budget, 50);
  EXPECT_EQ(rows[0].fraction, 0.0);
  EXPECT_EQ(rows[4].budget, 400);
  EXPECT_EQ(rows[4].fraction, 0.5);
  for (const auto& r : rows) {
    EXPECT_EQ(r.n_success + r.n_failed, c.repetitions);
    EXPECT_EQ(r.metric, Metric::kPearson);
  }
  std::string csv = Csv(c, rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kResultHeader);
  EXPECT_EQ(csv.rfind("b,p_c,metric,mean,ci95,n_success,n_failed", 0), 0u);
}

TEST(RunConvergenceTest, ZeroBudgetRowFails) {
  ExperimentConfig c = SmallConfig();
  c.budgets = {0.0, 200.0};
  auto rows = RunConvergence(c);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].n_failed, c.repetitions);
    EXPECT_EQ(rows[i].n_success, 0);
    EXPECT_TRUE(std::isnan(rows[i].mean));
  }
  EXPECT_EQ(rows[3].n_failed, 0);
  c.budgets = {0.0};
  EXPECT_THROW(RunConvergence(c), ExperimentError);
}

TEST(RunConvergenceTest, SharedGroundTruthAcrossGrid) {
  ExperimentConfig c = SmallConfig();
  Scenario s1 = BuildScenario(c, 2), s2 = BuildScenario(c, 2), s3 = BuildScenario(c, 3);
  EXPECT_EQ(s1.truth.beta, s2.truth.beta);
  EXPECT_NE(s1.truth.beta, s3.truth.beta);
  Dataset d1 = SimulateObservations(c, s1, 400, 0.5, 2);
  Dataset d2 = SimulateObservations(c, s1, 400, 0.5, 2);
  Dataset d3 = SimulateObservations(c, s1, 400, 0.5, 3);
  ASSERT_EQ(d1.comparisons.size(), 200u);
  EXPECT_EQ(d1.comparisons[7].value, d2.comparisons[7].value);
  EXPECT_NE(d1.comparisons[7].value, d3.comparisons[7].value);
}

TEST(RunConvergenceTest, PipelineChecks) {
  ExperimentConfig c = SmallConfig();
  EXPECT_THROW(RunSweetspot(c), InputError);
  c.pipeline = Pipeline::kActiveRatingsFirst;
  EXPECT_THROW(RunConvergence(c), InputError);
  auto rows = RunSweetspot(c);
  EXPECT_EQ(rows.front().metric, Metric::kCorrExp);
}

// Uniform laws, identity embedding, A = 100.
TEST(RunConvergenceTest, CorrelationIncreasesWithBudget) {
  ExperimentConfig c;
  c.budgets = {1e2, 1e3, 1e4, 1e5};
  c.fractions = {0.0, 0.5, 1.0};
  c.base_seed = 2;
  auto rows = RunConvergence(c);
  for (int p = 0; p < 3; ++p) {
    for (int i = 0; i + 1 < 4; ++i) {
      EXPECT_LT(rows[i * 3 + p].mean, rows[(i + 1) * 3 + p].mean)
          << "p_c=" << c.fractions[p] << " b=" << c.budgets[i];
    }
  }
}

TEST(RunSweetspotTest, OneHotRunsAndIsDeterministic) {
  ExperimentConfig c = SmallConfig();
  c.scheme = EmbeddingScheme::kOneHot;
  c.num_clusters = 3;
  c.prior.family = PriorSpec::Family::kCauchy;
  c.comparison_law = c.rating_law = RootLaw::KAry(2);
  c.cost_comparison = 4;
  for (Pipeline p : {Pipeline::kActiveRatingsFirst, Pipeline::kActiveComparisonsFirst}) {
    c.pipeline = p;
    auto rows = RunSweetspot(c);
    EXPECT_EQ(Csv(c, rows), Csv(c, RunSweetspot(c)));
    for (const auto& r : rows) EXPECT_GT(r.n_success, 0);
  }
}

// --- Command line ----------------------------------------------------------

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("scora_cli_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(const std::string& args) {
    std::string cmd = std::string(SCORA_CLI_PATH) + " " + args + " > " +
                      (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  std::string Slurp(const std::string& name) const {
    std::ifstream in(Path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, PropertiesExitZero) {
  ASSERT_EQ(Run("properties --seed 1"), 0) << Slurp("stderr.txt");
  std::istringstream out(Slurp("stdout.txt"));
  std::string line;
  int n = 0;
  while (std::getline(out, line)) {
    EXPECT_EQ(line.rfind("PASS ", 0), 0u) << line;
    ++n;
  }
  EXPECT_EQ(n, 11);
}

TEST_F(CliTest, ConvergenceWritesCsv) {
  std::ofstream(Path("run.toml")) << "A = 10\nbudgets = [100]\np_c = [0.5]\nreps = 3\n";
  ASSERT_EQ(Run("convergence --config " + Path("run.toml") + " --seed 42 --out " + Path("r.csv")), 0)
      << Slurp("stderr.txt");
  std::string csv = Slurp("r.csv");
  EXPECT_EQ(csv.rfind("b,p_c,metric,mean,ci95,n_success,n_failed,", 0), 0u);
  EXPECT_NE(csv.find("\n100,0.5,corr,"), std::string::npos);
  // Flags override the file.
  ASSERT_EQ(Run("convergence --config " + Path("run.toml") + " --reps 2 --out " + Path("r2.csv")), 0);
  EXPECT_NE(Slurp("r2.csv").find(",2,0\n"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(Run("convergence --reps"), 0);
  EXPECT_NE(Run("convergence --bogus 3"), 0);
  EXPECT_NE(Run("convergence --k_c 1"), 0);
  EXPECT_NE(Run("nosuchcommand"), 0);
  std::ofstream(Path("bad.toml")) << "A = 10\nbudget = 5\n";
  EXPECT_NE(Run("convergence --config " + Path("bad.toml")), 0);
  EXPECT_NE(Slurp("stderr.txt").find("budget"), std::string::npos);
}

// gen + solve reproduces one repetition of the grid runner exactly.
TEST_F(CliTest, GenSolveMatchesConvergence) {
  const std::string model = "-A 40 --k_c 3 --k_r uniform --seed 77";
  const std::string point = " --budgets 2000 --p_c 0.5";
  ASSERT_EQ(Run("gen " + model + point + " --rep 0 --out " + Path("data.csv") + " --truth " +
                Path("truth.csv")),
            0)
      << Slurp("stderr.txt");
  ASSERT_EQ(Run("solve " + model + " --data " + Path("data.csv") + " --out " + Path("scores.csv")), 0)
      << Slurp("stderr.txt");
  std::ifstream sin(Path("scores.csv")), tin(Path("truth.csv"));
  Vector scores = io::ReadEntityColumnCsv(sin, "score");
  Vector truth = io::ReadEntityColumnCsv(tin, "theta_dagger");
  const double corr = PearsonCorr(scores, truth);

  ExperimentConfig c;
  c.num_entities = 40;
  c.comparison_law = RootLaw::KAry(3);
  c.base_seed = 77;
  c.budgets = {2000};
  c.fractions = {0.5};
  auto rows = RunConvergence(c);
  EXPECT_NEAR(corr, rows[0].values[0], 1e-9);
  const double sd = rows[0].ci95 * std::sqrt(rows[0].n_success) / 1.96;
  EXPECT_GE(corr, rows[0].mean - 3 * sd);
}

TEST_F(CliTest, OneHotGenSolve) {
  const std::string model = "-A 30 --embedding onehot --num_clusters 4 --k_c 2 --k_r 2 --seed 3";
  ASSERT_EQ(Run("gen " + model + " --budgets 3000 --p_c 0.3 --pipeline active_ratings --out " +
                Path("d.csv") + " --clusters " + Path("c.csv")),
            0)
      << Slurp("stderr.txt");
  EXPECT_NE(Run("solve " + model + " --data " + Path("d.csv")), 0);
  ASSERT_EQ(Run("solve " + model + " --data " + Path("d.csv") + " --clusters " + Path("c.csv") +
                " --out " + Path("s.csv")),
            0)
      << Slurp("stderr.txt");
  std::ifstream in(Path("s.csv"));
  EXPECT_EQ(io::ReadEntityColumnCsv(in, "score").size(), 30);
}

}  // namespace
}  // namespace scora
