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

#ifndef SCORA_EXPERIMENTS_HPP_
#define SCORA_EXPERIMENTS_HPP_

// Repeated synthetic elicitation runs over a (budget, fraction) grid,
// aggregated into mean and 95% normal-approximation intervals.
//
// Every repetition owns two random streams. The ground truth (and the
// cluster assignment of a one-hot embedding) comes from (seed, rep) alone,
// so all grid points of one repetition share the same hidden scores. The
// queries and observations come from (seed, rep, b, p_c). Results therefore
// do not depend on the thread count or on the order in which jobs run.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "scora/core_model.hpp"
#include "scora/error.hpp"
#include "scora/io.hpp"
#include "scora/metrics.hpp"
#include "scora/rootlaw.hpp"
#include "scora/solver.hpp"
#include "scora/synth.hpp"

namespace scora {

enum class EmbeddingScheme { kIdentity, kOneHot };
enum class Pipeline { kPassive, kActiveRatingsFirst, kActiveComparisonsFirst };
enum class Metric { kPearson, kCorrExp };

// 10^1, 10^1.5, ..., 10^5.
inline std::vector<double> DefaultBudgetGrid() {
  std::vector<double> grid;
  for (int i = 2; i <= 10; ++i) grid.push_back(std::pow(10.0, 0.5 * i));
  return grid;
}

// 0, 0.1, ..., 1.
inline std::vector<double> DefaultFractionGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

struct ExperimentConfig {
  int num_entities = 100;
  EmbeddingScheme scheme = EmbeddingScheme::kIdentity;
  int num_clusters = 5;
  // Laws that generate the data.
  RootLaw comparison_law = RootLaw::ContinuousUniform();
  RootLaw rating_law = RootLaw::ContinuousUniform();
  // Laws assumed by the estimator; the generating laws when unset.
  std::optional<RootLaw> inference_comparison_law;
  std::optional<RootLaw> inference_rating_law;
  PriorSpec prior;
  std::vector<double> budgets = DefaultBudgetGrid();
  std::vector<double> fractions = DefaultFractionGrid();
  double cost_comparison = 1.0;
  double cost_rating = 1.0;
  Pipeline pipeline = Pipeline::kPassive;
  int repetitions = 20;
  std::uint64_t base_seed = 0;
  int threads = 0;  // 0: one per hardware thread
  // Prior variances assumed by the estimator.
  double prior_var_beta = 1.0;
  double prior_var_threshold = 1.0;
  SolverConfig solver;

  RootLaw inference_f() const {
    return inference_comparison_law.value_or(comparison_law);
  }
  RootLaw inference_g() const { return inference_rating_law.value_or(rating_law); }

  void Validate() const {
    if (num_entities < 2) throw InputError("A must be at least 2");
    if (scheme == EmbeddingScheme::kOneHot && num_clusters < 1) {
      throw InputError("num_clusters must be positive");
    }
    if (budgets.empty() || fractions.empty()) {
      throw InputError("budget and fraction lists must be nonempty");
    }
    for (double b : budgets) {
      if (!(b >= 0.0) || !std::isfinite(b)) throw InputError("budgets must be finite and >= 0");
    }
    for (double p : fractions) {
      if (!(p >= 0.0 && p <= 1.0)) throw InputError("p_c values must lie in [0, 1]");
    }
    if (!(cost_comparison > 0.0) || !(cost_rating > 0.0)) {
      throw InputError("costs must be positive");
    }
    if (repetitions < 1) throw InputError("repetitions must be at least 1");
    if (threads < 0) throw InputError("threads must be >= 0");
    if (!(prior.scale > 0.0) || !(prior.threshold_variance > 0.0)) {
      throw InputError("prior scale and threshold variance must be positive");
    }
    if (!(prior_var_beta > 0.0) || !(prior_var_threshold > 0.0)) {
      throw InputError("prior variances must be positive");
    }
  }
};

// --- Tokens --------------------------------------------------------------

// Arity tokens: an integer k >= 2, "uniform" (also "inf"), or any law token
// accepted by RootLaw::Parse.
inline RootLaw ParseArity(std::string_view token) {
  if (token == "uniform" || token == "inf" || token == "infinity") {
    return RootLaw::ContinuousUniform();
  }
  int k = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), k);
  if (ec == std::errc{} && ptr == token.data() + token.size()) return RootLaw::KAry(k);
  return RootLaw::Parse(token);
}

inline std::string ArityToken(const RootLaw& law) {
  if (law.kind() == RootLaw::Kind::kKAry) return std::to_string(law.arity());
  return law.ToToken();
}

inline std::string SchemeToken(EmbeddingScheme s) {
  return s == EmbeddingScheme::kIdentity ? "identity" : "onehot";
}

inline EmbeddingScheme ParseScheme(std::string_view s) {
  if (s == "identity") return EmbeddingScheme::kIdentity;
  if (s == "onehot" || s == "one_hot") return EmbeddingScheme::kOneHot;
  throw InputError("unknown embedding scheme '" + std::string(s) + "'");
}

inline std::string PipelineToken(Pipeline p) {
  switch (p) {
    case Pipeline::kPassive:
      return "passive";
    case Pipeline::kActiveRatingsFirst:
      return "active_ratings";
    case Pipeline::kActiveComparisonsFirst:
      return "active_comparisons";
  }
  return "passive";
}

inline Pipeline ParsePipeline(std::string_view s) {
  if (s == "passive") return Pipeline::kPassive;
  if (s == "active_ratings" || s == "active") return Pipeline::kActiveRatingsFirst;
  if (s == "active_comparisons") return Pipeline::kActiveComparisonsFirst;
  throw InputError("unknown pipeline '" + std::string(s) + "'");
}

inline std::string PriorToken(PriorSpec::Family f) {
  return f == PriorSpec::Family::kGaussian ? "gaussian" : "cauchy";
}

inline PriorSpec::Family ParsePriorFamily(std::string_view s) {
  if (s == "gaussian") return PriorSpec::Family::kGaussian;
  if (s == "cauchy") return PriorSpec::Family::kCauchy;
  throw InputError("unknown prior family '" + std::string(s) + "'");
}

inline std::string MetricToken(Metric m) {
  return m == Metric::kPearson ? "corr" : "corr_exp";
}

// --- Settings ------------------------------------------------------------

struct SettingInfo {
  const char* key;
  const char* help;
  bool list;
};

// Keys accepted in config files and as command-line overrides.
inline const std::vector<SettingInfo>& SettingKeys() {
  static const std::vector<SettingInfo> keys = {
      {"A", "number of entities", false},
      {"embedding", "identity | onehot", false},
      {"num_clusters", "clusters of the one-hot embedding", false},
      {"k_c", "comparison law: integer arity, uniform, or gaussian:<v>", false},
      {"k_r", "rating law: integer arity, uniform, or gaussian:<v>", false},
      {"f", "comparison law used for inference (default: k_c)", false},
      {"g", "rating law used for inference (default: k_r)", false},
      {"prior", "ground-truth family of beta: gaussian | cauchy", false},
      {"prior_scale", "variance (gaussian) or scale (cauchy) of beta", false},
      {"threshold_variance", "variance of the true threshold", false},
      {"budgets", "list of budgets", true},
      {"p_c", "list of fractions spent on comparisons", true},
      {"c_c", "cost of one comparison", false},
      {"c_r", "cost of one rating", false},
      {"pipeline", "passive | active_ratings | active_comparisons", false},
      {"reps", "repetitions per grid point", false},
      {"seed", "base seed", false},
      {"threads", "worker threads, 0 for all cores", false},
      {"var_beta", "prior variance of beta assumed by the estimator", false},
      {"var_threshold", "prior variance of theta0 assumed by the estimator", false},
      {"tolerance", "solver gradient tolerance", false},
      {"max_iterations", "solver iteration limit", false},
  };
  return keys;
}

namespace detail {

inline int ParseInt(std::string_view s, const std::string& key) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw InputError(key + ": cannot parse '" + std::string(s) + "' as an integer");
  }
  return static_cast<int>(v);
}

inline std::uint64_t ParseSeed(std::string_view s, const std::string& key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError(key + ": cannot parse '" + std::string(s) + "' as a seed");
  }
  return v;
}

}  // namespace detail

// Sets one field from its textual value(s). Lists take any number of values
// (at least one); every other key takes exactly one.
inline void ApplySetting(ExperimentConfig& config, const std::string& key,
                         const std::vector<std::string>& values) {
  auto it = std::find_if(SettingKeys().begin(), SettingKeys().end(),
                         [&](const SettingInfo& s) { return key == s.key; });
  if (it == SettingKeys().end()) throw InputError("unknown setting '" + key + "'");
  if (values.empty()) throw InputError(key + ": missing value");
  if (!it->list && values.size() != 1) throw InputError(key + ": expected one value");

  const std::string& v = values.front();
  auto number = [&](const std::string& s) { return io::ParseDouble(s, key); };
  if (key == "A") {
    config.num_entities = detail::ParseInt(v, key);
  } else if (key == "embedding") {
    config.scheme = ParseScheme(v);
  } else if (key == "num_clusters") {
    config.num_clusters = detail::ParseInt(v, key);
  } else if (key == "k_c") {
    config.comparison_law = ParseArity(v);
  } else if (key == "k_r") {
    config.rating_law = ParseArity(v);
  } else if (key == "f") {
    if (v.empty()) config.inference_comparison_law.reset();
    else config.inference_comparison_law = ParseArity(v);
  } else if (key == "g") {
    if (v.empty()) config.inference_rating_law.reset();
    else config.inference_rating_law = ParseArity(v);
  } else if (key == "prior") {
    config.prior.family = ParsePriorFamily(v);
  } else if (key == "prior_scale") {
    config.prior.scale = number(v);
  } else if (key == "threshold_variance") {
    config.prior.threshold_variance = number(v);
  } else if (key == "budgets" || key == "p_c") {
    std::vector<double> out;
    for (const auto& s : values) out.push_back(number(s));
    (key == "budgets" ? config.budgets : config.fractions) = std::move(out);
  } else if (key == "c_c") {
    config.cost_comparison = number(v);
  } else if (key == "c_r") {
    config.cost_rating = number(v);
  } else if (key == "pipeline") {
    config.pipeline = ParsePipeline(v);
  } else if (key == "reps") {
    config.repetitions = detail::ParseInt(v, key);
  } else if (key == "seed") {
    config.base_seed = detail::ParseSeed(v, key);
  } else if (key == "threads") {
    config.threads = detail::ParseInt(v, key);
  } else if (key == "var_beta") {
    config.prior_var_beta = number(v);
  } else if (key == "var_threshold") {
    config.prior_var_threshold = number(v);
  } else if (key == "tolerance") {
    config.solver.gradient_tolerance = number(v);
  } else if (key == "max_iterations") {
    config.solver.max_iterations = detail::ParseInt(v, key);
  }
}

// --- Random streams ------------------------------------------------------

inline Rng MakeStream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

inline constexpr std::uint64_t kTruthStream = 0x7472757468ULL;
inline constexpr std::uint64_t kQueryStream = 0x7175657279ULL;

inline Rng TruthStream(std::uint64_t seed, int rep) {
  return MakeStream(seed, {kTruthStream, static_cast<std::uint64_t>(rep)});
}

inline Rng QueryStream(std::uint64_t seed, int rep, double budget, double fraction) {
  return MakeStream(seed, {kQueryStream, static_cast<std::uint64_t>(rep),
                           std::bit_cast<std::uint64_t>(budget),
                           std::bit_cast<std::uint64_t>(fraction)});
}

// --- One repetition ------------------------------------------------------

// Hidden state of one repetition.
struct Scenario {
  Embedding embedding;
  std::vector<int> clusters;  // empty for the identity scheme
  GroundTruth truth;
};

inline Scenario BuildScenario(const ExperimentConfig& config, int rep) {
  Rng rng = TruthStream(config.base_seed, rep);
  std::vector<int> clusters;
  Embedding embedding = [&] {
    if (config.scheme == EmbeddingScheme::kIdentity) {
      return Embedding::Identity(config.num_entities);
    }
    OneHotEmbedding oh = BuildOneHotEmbedding(config.num_entities, config.num_clusters, rng);
    clusters = std::move(oh.clusters);
    return std::move(oh.embedding);
  }();
  GroundTruth truth = SampleGroundTruth(config.prior, embedding, rng);
  return {std::move(embedding), std::move(clusters), std::move(truth)};
}

inline ScoraModel InferenceModel(const ExperimentConfig& config, const Embedding& embedding) {
  return ScoraModel(embedding, config.inference_f(), config.inference_g(),
                    config.prior_var_beta, config.prior_var_threshold);
}

// Queries and observations for one grid point. A zero budget yields an
// empty dataset.
inline Dataset SimulateObservations(const ExperimentConfig& config, const Scenario& scenario,
                                    double budget, double fraction, int rep) {
  if (budget == 0.0) return {};
  Rng rng = QueryStream(config.base_seed, rep, budget, fraction);
  if (config.pipeline == Pipeline::kPassive) {
    BudgetPlan plan = AllocateBudget(budget, fraction, config.cost_comparison,
                                     config.cost_rating);
    return GeneratePassiveDataset(plan, scenario.truth, config.comparison_law,
                                  config.rating_law, rng);
  }
  ElicitationSetup setup{InferenceModel(config, scenario.embedding),
                         config.comparison_law,
                         config.rating_law,
                         budget,
                         fraction,
                         config.cost_comparison,
                         config.cost_rating,
                         config.solver};
  ActiveLearningPlan plan;
  plan.first_phase = config.pipeline == Pipeline::kActiveRatingsFirst
                         ? ActiveLearningPlan::FirstPhase::kRatings
                         : ActiveLearningPlan::FirstPhase::kUniformComparisons;
  return RunActivePipeline(setup, scenario.truth, plan, rng).data;
}

inline double EvaluateMetric(Metric metric, const Vector& estimated, const Vector& truth) {
  return metric == Metric::kPearson ? PearsonCorr(estimated, truth)
                                    : WeightedCorrExp(estimated, truth);
}

struct RepetitionOutcome {
  bool ok = false;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // why the repetition failed
};

// Simulate, fit and score one repetition at one grid point. Solver failures
// and undefined metrics are reported, not thrown.
inline RepetitionOutcome RunRepetition(const ExperimentConfig& config, Metric metric,
                                       const Scenario& scenario, double budget,
                                       double fraction, int rep) {
  RepetitionOutcome out;
  try {
    Dataset data = SimulateObservations(config, scenario, budget, fraction, rep);
    MapResult map = SolveMap(InferenceModel(config, scenario.embedding), data, config.solver);
    out.value = EvaluateMetric(metric, map.scores, scenario.truth.scores);
    out.ok = true;
  } catch (const NonConvergenceError& e) {
    out.error = e.what();
  } catch (const NumericalError& e) {
    out.error = e.what();
  } catch (const UndefinedMetricError& e) {
    out.error = e.what();
  }
  return out;
}

// --- Aggregation ---------------------------------------------------------

struct ResultRow {
  double budget = 0.0;
  double fraction = 0.0;
  Metric metric = Metric::kPearson;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double ci95 = std::numeric_limits<double>::quiet_NaN();
  int n_success = 0;
  int n_failed = 0;
  std::vector<double> values;  // per repetition, NaN when failed
};

// Mean and 1.96 s / sqrt(n) over the successful repetitions; the interval is
// NaN with fewer than two of them.
inline void Summarize(ResultRow& row) {
  std::vector<double> ok;
  for (double v : row.values) {
    if (!std::isnan(v)) ok.push_back(v);
  }
  row.n_success = static_cast<int>(ok.size());
  row.n_failed = static_cast<int>(row.values.size()) - row.n_success;
  if (ok.empty()) return;
  double sum = 0.0;
  for (double v : ok) sum += v;
  row.mean = sum / ok.size();
  if (ok.size() < 2) return;
  double ss = 0.0;
  for (double v : ok) ss += (v - row.mean) * (v - row.mean);
  row.ci95 = 1.96 * std::sqrt(ss / (ok.size() - 1)) / std::sqrt(static_cast<double>(ok.size()));
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; the first exception
// is rethrown after all workers stop.
template <class Fn>
void ParallelFor(int n, int threads, Fn&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n && !stop; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

class ExperimentError : public std::runtime_error {
 public:
  explicit ExperimentError(const std::string& what) : std::runtime_error(what) {}
};

// One row per (budget, fraction), budgets outermost, in config order.
inline std::vector<ResultRow> RunExperiment(const ExperimentConfig& config, Metric metric) {
  config.Validate();
  const int reps = config.repetitions;
  const int n_points = static_cast<int>(config.budgets.size() * config.fractions.size());

  std::vector<std::optional<Scenario>> scenarios(reps);
  ParallelFor(reps, config.threads, [&](int r) { scenarios[r] = BuildScenario(config, r); });

  std::vector<RepetitionOutcome> outcomes(static_cast<std::size_t>(n_points) * reps);
  ParallelFor(n_points * reps, config.threads, [&](int job) {
    const int point = job / reps, rep = job % reps;
    const double b = config.budgets[point / config.fractions.size()];
    const double pc = config.fractions[point % config.fractions.size()];
    outcomes[job] = RunRepetition(config, metric, *scenarios[rep], b, pc, rep);
  });

  std::vector<ResultRow> rows;
  int total_ok = 0;
  std::string last_error;
  for (int point = 0; point < n_points; ++point) {
    ResultRow row;
    row.budget = config.budgets[point / config.fractions.size()];
    row.fraction = config.fractions[point % config.fractions.size()];
    row.metric = metric;
    for (int rep = 0; rep < reps; ++rep) {
      const auto& o = outcomes[static_cast<std::size_t>(point) * reps + rep];
      row.values.push_back(o.ok ? o.value : std::numeric_limits<double>::quiet_NaN());
      if (!o.ok) last_error = o.error;
    }
    Summarize(row);
    total_ok += row.n_success;
    rows.push_back(std::move(row));
  }
  if (total_ok == 0) {
    throw ExperimentError("every repetition failed; last error: " + last_error);
  }
  return rows;
}

// Uniform queries, Pearson correlation.
inline std::vector<ResultRow> RunConvergence(const ExperimentConfig& config) {
  if (config.pipeline != Pipeline::kPassive) {
    throw InputError("convergence runs need pipeline = passive");
  }
  return RunExperiment(config, Metric::kPearson);
}

// Two-phase active elicitation, exp-weighted correlation.
inline std::vector<ResultRow> RunSweetspot(const ExperimentConfig& config) {
  if (config.pipeline == Pipeline::kPassive) {
    throw InputError("sweet-spot runs need an active pipeline");
  }
  return RunExperiment(config, Metric::kCorrExp);
}

// --- CSV -----------------------------------------------------------------

inline constexpr std::string_view kResultHeader =
    "b,p_c,metric,mean,ci95,n_success,n_failed,A,embedding,num_clusters,k_c,k_r,"
    "f,g,prior,prior_scale,threshold_variance,pipeline,c_c,c_r,var_beta,var_threshold,reps,seed";

inline void WriteResultsCsv(std::ostream& out, const ExperimentConfig& config,
                            const std::vector<ResultRow>& rows) {
  using io::FormatDouble;
  out << kResultHeader << '\n';
  for (const auto& r : rows) {
    out << FormatDouble(r.budget) << ',' << FormatDouble(r.fraction) << ','
        << MetricToken(r.metric) << ',' << FormatDouble(r.mean) << ','
        << FormatDouble(r.ci95) << ',' << r.n_success << ',' << r.n_failed << ','
        << config.num_entities << ',' << SchemeToken(config.scheme) << ','
        << (config.scheme == EmbeddingScheme::kOneHot ? config.num_clusters : 0) << ','
        << ArityToken(config.comparison_law) << ',' << ArityToken(config.rating_law) << ','
        << ArityToken(config.inference_f()) << ',' << ArityToken(config.inference_g()) << ','
        << PriorToken(config.prior.family) << ',' << FormatDouble(config.prior.scale) << ','
        << FormatDouble(config.prior.threshold_variance) << ','
        << PipelineToken(config.pipeline) << ',' << FormatDouble(config.cost_comparison)
        << ',' << FormatDouble(config.cost_rating) << ','
        << FormatDouble(config.prior_var_beta) << ','
        << FormatDouble(config.prior_var_threshold) << ',' << config.repetitions << ','
        << config.base_seed << '\n';
  }
}

}  // namespace scora

#endif  // SCORA_EXPERIMENTS_HPP_
