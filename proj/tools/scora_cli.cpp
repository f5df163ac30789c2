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

// scora_cli: experiment runner and dataset tools.
//
//   scora_cli convergence --config configs/fig1a.toml --seed 42 --out fig1a.csv
//   scora_cli sweetspot   --config configs/fig4.toml --out fig4.csv
//   scora_cli properties  --seed 1
//   scora_cli gen   --A 50 --budgets 2000 --p_c 0.5 --out data.csv --truth truth.csv
//   scora_cli solve --A 50 --data data.csv --out scores.csv

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scora/config_file.hpp"
#include "scora/experiments.hpp"
#include "scora/io.hpp"
#include "scora/properties.hpp"
#include "scora/solver.hpp"

namespace {

using scora::ExperimentConfig;

// One override flag per config key, applied on top of --config.
class SettingFlags {
 public:
  void Register(CLI::App* cmd) {
    cmd->add_option("--config", config_path_, "TOML file with experiment settings")
        ->check(CLI::ExistingFile);
    for (const auto& key : scora::SettingKeys()) {
      std::string flag = std::string(key.key) == "A" ? "-A,--A" : "--" + std::string(key.key);
      auto* opt = cmd->add_option(flag, values_[key.key], key.help);
      if (key.list) {
        opt->expected(1, CLI::detail::expected_max_vector_size);
      } else {
        opt->expected(1);
      }
    }
  }

  ExperimentConfig Build() const {
    ExperimentConfig config;
    if (!config_path_.empty()) scora::ApplyConfigFile(config, config_path_);
    for (const auto& key : scora::SettingKeys()) {
      const auto& v = values_.at(key.key);
      if (!v.empty()) scora::ApplySetting(config, key.key, v);
    }
    config.Validate();
    return config;
  }

 private:
  std::string config_path_;
  std::map<std::string, std::vector<std::string>> values_;
};

// Writes to `path`, or to stdout when it is empty or "-".
template <class Fn>
void WithOutput(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw scora::InputError("cannot open '" + path + "' for writing");
  fn(out);
  if (!out) throw scora::InputError("failed writing '" + path + "'");
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw scora::InputError("cannot open '" + path + "'");
  return in;
}

int RunGrid(const SettingFlags& flags, const std::string& out, bool sweetspot) {
  ExperimentConfig config = flags.Build();
  auto rows = sweetspot ? scora::RunSweetspot(config) : scora::RunConvergence(config);
  WithOutput(out, [&](std::ostream& os) { scora::WriteResultsCsv(os, config, rows); });
  for (const auto& r : rows) {
    if (r.n_failed > 0) {
      std::fprintf(stderr, "warning: b=%g p_c=%g: %d of %d repetitions failed\n", r.budget,
                   r.fraction, r.n_failed, config.repetitions);
    }
  }
  return 0;
}

int RunProperties(std::uint64_t seed) {
  bool ok = true;
  for (const auto& rep : scora::properties::RunAllSuites(seed)) {
    std::printf("%s %-26s trials=%ld violations=%ld skipped=%ld worst=%.3g tolerance=%.3g\n",
                rep.passed() ? "PASS" : "FAIL", rep.name.c_str(), rep.trials, rep.violations,
                rep.skipped, rep.worst, rep.tolerance);
    ok = ok && rep.passed();
  }
  return ok ? 0 : 1;
}

struct GenOptions {
  int rep = 0;
  std::string out, truth, clusters;
};

int RunGen(const SettingFlags& flags, const GenOptions& opt) {
  ExperimentConfig config = flags.Build();
  if (config.budgets.size() != 1 || config.fractions.size() != 1) {
    throw scora::InputError("gen needs exactly one budget and one p_c");
  }
  if (opt.rep < 0) throw scora::InputError("--rep must be >= 0");
  // Same streams as repetition `rep` of a grid run at this point.
  scora::Scenario scenario = scora::BuildScenario(config, opt.rep);
  scora::Dataset data = scora::SimulateObservations(
      config, scenario, config.budgets[0], config.fractions[0], opt.rep);
  WithOutput(opt.out, [&](std::ostream& os) { scora::io::WriteDatasetCsv(os, data); });
  if (!opt.truth.empty()) {
    WithOutput(opt.truth, [&](std::ostream& os) {
      scora::io::WriteEntityColumnCsv(os, "theta_dagger", scenario.truth.scores);
    });
  }
  if (!opt.clusters.empty()) {
    if (config.scheme != scora::EmbeddingScheme::kOneHot) {
      throw scora::InputError("--clusters needs embedding = onehot");
    }
    WithOutput(opt.clusters,
               [&](std::ostream& os) { scora::io::WriteClustersCsv(os, scenario.clusters); });
  }
  return 0;
}

struct SolveOptions {
  std::string data, clusters, out;
};

int RunSolve(const SettingFlags& flags, const SolveOptions& opt) {
  ExperimentConfig config = flags.Build();
  auto embedding = [&] {
    if (config.scheme == scora::EmbeddingScheme::kIdentity) {
      return scora::Embedding::Identity(config.num_entities);
    }
    if (opt.clusters.empty()) throw scora::InputError("onehot embedding needs --clusters");
    auto in = OpenInput(opt.clusters);
    std::vector<int> clusters = scora::io::ReadClustersCsv(in);
    if (static_cast<int>(clusters.size()) != config.num_entities) {
      throw scora::InputError("cluster file does not list A entities");
    }
    return scora::OneHotEmbeddingFromClusters(clusters, config.num_clusters);
  }();
  auto in = OpenInput(opt.data);
  scora::Dataset data = scora::io::ReadDatasetCsv(in);
  scora::MapResult map =
      scora::SolveMap(scora::InferenceModel(config, embedding), data, config.solver);
  WithOutput(opt.out, [&](std::ostream& os) {
    scora::io::WriteEntityColumnCsv(os, "score", map.scores);
  });
  std::fprintf(stderr, "theta0 = %.17g, |grad|_inf = %.3g, iterations = %d\n", map.theta0,
               map.gradient_norm, map.iterations);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score estimation from ratings and comparisons; synthetic experiments."};
  app.require_subcommand(1);

  SettingFlags conv_flags, sweet_flags, gen_flags, solve_flags;
  std::string conv_out, sweet_out;
  std::uint64_t property_seed = 1;
  GenOptions gen_opt;
  SolveOptions solve_opt;

  auto* conv = app.add_subcommand("convergence", "passive runs, Pearson correlation per (b, p_c)");
  conv_flags.Register(conv);
  conv->add_option("--out", conv_out, "results CSV (default: stdout)");

  auto* sweet = app.add_subcommand("sweetspot", "active runs, exp-weighted correlation per (b, p_c)");
  sweet_flags.Register(sweet);
  sweet->add_option("--out", sweet_out, "results CSV (default: stdout)");

  auto* props = app.add_subcommand("properties", "run every property suite");
  props->add_option("--seed", property_seed, "base seed");

  auto* gen = app.add_subcommand("gen", "write one synthetic dataset");
  gen_flags.Register(gen);
  gen->add_option("--rep", gen_opt.rep, "repetition index (selects the random streams)");
  gen->add_option("--out", gen_opt.out, "dataset CSV (default: stdout)");
  gen->add_option("--truth", gen_opt.truth, "ground-truth scores CSV");
  gen->add_option("--clusters", gen_opt.clusters, "cluster assignment CSV (onehot)");

  auto* solve = app.add_subcommand("solve", "MAP scores for a dataset CSV");
  solve_flags.Register(solve);
  solve->add_option("--data", solve_opt.data, "dataset CSV")->required()->check(CLI::ExistingFile);
  solve->add_option("--clusters", solve_opt.clusters, "cluster assignment CSV (onehot)")
      ->check(CLI::ExistingFile);
  solve->add_option("--out", solve_opt.out, "scores CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*conv) return RunGrid(conv_flags, conv_out, false);
    if (*sweet) return RunGrid(sweet_flags, sweet_out, true);
    if (*props) return RunProperties(property_seed);
    if (*gen) return RunGen(gen_flags, gen_opt);
    if (*solve) return RunSolve(solve_flags, solve_opt);
  } catch (const scora::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
