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

#ifndef SCORA_SYNTH_HPP_
#define SCORA_SYNTH_HPP_

// Synthetic elicitation: hidden ground truth, budget split between ratings
// and comparisons, query selection (uniform or score-weighted) and
// observation sampling from the generative model.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "scora/core_model.hpp"
#include "scora/error.hpp"
#include "scora/rootlaw.hpp"
#include "scora/solver.hpp"

namespace scora {

// All samplers draw from this engine; streams are seeded explicitly.
using Rng = std::mt19937_64;

struct GroundTruth {
  Vector beta;
  double theta0 = 0.0;
  Vector scores;
};

struct BudgetPlan {
  double budget = 0.0;
  double fraction_comparisons = 0.0;
  double cost_comparison = 1.0;
  double cost_rating = 1.0;
  long n_comparisons = 0;
  long n_ratings = 0;
};

// N_c = floor(p_c b / c_c), N_r = floor((1 - p_c) b / c_r).
inline BudgetPlan AllocateBudget(double budget, double fraction_comparisons,
                                 double cost_comparison, double cost_rating) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw InputError("budget must be positive");
  }
  if (!(fraction_comparisons >= 0.0 && fraction_comparisons <= 1.0)) {
    throw InputError("comparison fraction must lie in [0, 1]");
  }
  if (!(cost_comparison > 0.0) || !(cost_rating > 0.0)) {
    throw InputError("costs must be positive");
  }
  BudgetPlan plan{budget, fraction_comparisons, cost_comparison, cost_rating, 0, 0};
  plan.n_comparisons = static_cast<long>(
      std::floor(fraction_comparisons * budget / cost_comparison));
  plan.n_ratings = static_cast<long>(
      std::floor((1.0 - fraction_comparisons) * budget / cost_rating));
  return plan;
}

struct PriorSpec {
  enum class Family { kGaussian, kCauchy };
  Family family = Family::kGaussian;
  // Variance for the Gaussian family, scale for the Cauchy family.
  double scale = 1.0;
  // theta0 is Gaussian whatever the family of beta.
  double threshold_variance = 1.0;
};

// beta_d iid from the prior family, theta0 ~ N(0, threshold_variance).
inline GroundTruth SampleGroundTruth(const PriorSpec& prior,
                                     const Embedding& embedding, Rng& rng) {
  if (!(prior.scale > 0.0) || !(prior.threshold_variance > 0.0)) {
    throw InputError("prior scale and threshold variance must be positive");
  }
  GroundTruth truth;
  truth.beta.resize(embedding.dim());
  if (prior.family == PriorSpec::Family::kGaussian) {
    std::normal_distribution<double> normal(0.0, std::sqrt(prior.scale));
    for (auto& v : truth.beta) v = normal(rng);
  } else {
    std::cauchy_distribution<double> cauchy(0.0, prior.scale);
    for (auto& v : truth.beta) v = cauchy(rng);
  }
  std::normal_distribution<double> threshold(0.0,
                                             std::sqrt(prior.threshold_variance));
  truth.theta0 = threshold(rng);
  truth.scores = Scores(embedding, truth.beta);
  return truth;
}

// Entities to rate, iid uniform with replacement.
inline std::vector<int> SampleRatingQueries(long count, int num_entities,
                                            Rng& rng) {
  if (count < 0) throw InputError("negative query count");
  if (count > 0 && num_entities < 1) throw InputError("no entity to rate");
  std::vector<int> out;
  out.reserve(count);
  std::uniform_int_distribution<int> pick(0, num_entities - 1);
  for (long i = 0; i < count; ++i) out.push_back(pick(rng));
  return out;
}

using Pair = std::pair<int, int>;

// Distinct pairs, iid uniform over the A(A-1)/2 unordered pairs, each emitted
// in a uniformly random orientation.
inline std::vector<Pair> SampleComparisonQueriesUniform(long count,
                                                        int num_entities,
                                                        Rng& rng) {
  if (count < 0) throw InputError("negative query count");
  std::vector<Pair> out;
  if (count == 0) return out;
  if (num_entities < 2) throw InputError("comparisons need at least two entities");
  out.reserve(count);
  std::uniform_int_distribution<int> first(0, num_entities - 1);
  std::uniform_int_distribution<int> other(0, num_entities - 2);
  for (long i = 0; i < count; ++i) {
    int b = first(rng);
    int c = other(rng);
    if (c >= b) ++c;
    out.emplace_back(b, c);
  }
  return out;
}

// Pairs {a, b} drawn with probability proportional to exp(s_a + s_b), iid and
// with replacement, in a uniformly random orientation.
inline std::vector<Pair> SampleComparisonQueriesActive(long count,
                                                       const Vector& scores,
                                                       Rng& rng) {
  if (count < 0) throw InputError("negative query count");
  std::vector<Pair> out;
  if (count == 0) return out;
  const int A = static_cast<int>(scores.size());
  if (A < 2) throw InputError("comparisons need at least two entities");
  if (!scores.allFinite()) throw InputError("scores must be finite");

  const double top = scores.maxCoeff();
  std::vector<Pair> pairs;
  std::vector<double> weights;
  pairs.reserve(static_cast<std::size_t>(A) * (A - 1) / 2);
  weights.reserve(pairs.capacity());
  for (int a = 0; a < A; ++a) {
    for (int b = a + 1; b < A; ++b) {
      pairs.emplace_back(a, b);
      weights.push_back(std::exp(scores(a) + scores(b) - 2.0 * top));
    }
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::bernoulli_distribution flip(0.5);
  out.reserve(count);
  for (long i = 0; i < count; ++i) {
    Pair p = pairs[pick(rng)];
    if (flip(rng)) std::swap(p.first, p.second);
    out.push_back(p);
  }
  return out;
}

struct Queries {
  std::vector<int> ratings;
  std::vector<Pair> comparisons;
};

// Comparison (b, c) ~ f tilted by theta_b - theta_c; rating a ~ g tilted by
// theta_a - theta0. Comparisons are drawn first, then ratings.
inline Dataset GenerateObservations(const Queries& queries,
                                    const GroundTruth& truth,
                                    const RootLaw& comparison_law,
                                    const RootLaw& rating_law, Rng& rng) {
  const int A = static_cast<int>(truth.scores.size());
  Dataset data;
  data.comparisons.reserve(queries.comparisons.size());
  data.ratings.reserve(queries.ratings.size());
  for (const auto& [b, c] : queries.comparisons) {
    detail::CheckEntity(b, A, "comparison query");
    detail::CheckEntity(c, A, "comparison query");
    if (b == c) throw InputError("comparison query with identical entities");
    double r = comparison_law.sample_tilted(truth.scores(b) - truth.scores(c), rng);
    data.comparisons.push_back({b, c, r});
  }
  for (int a : queries.ratings) {
    detail::CheckEntity(a, A, "rating query");
    double t = rating_law.sample_tilted(truth.scores(a) - truth.theta0, rng);
    data.ratings.push_back({a, t});
  }
  return data;
}

struct OneHotEmbedding {
  Embedding embedding;
  std::vector<int> clusters;
};

// Rows 0..A-1 are the identity, rows A..A+K-1 the cluster indicators, so that
// theta_a = beta_a + beta_{A + cluster(a)}.
inline Embedding OneHotEmbeddingFromClusters(const std::vector<int>& clusters,
                                             int num_clusters) {
  const int A = static_cast<int>(clusters.size());
  if (A < 1 || num_clusters < 1) {
    throw InputError("one-hot embedding needs A >= 1 and at least one cluster");
  }
  Matrix x = Matrix::Zero(A + num_clusters, A);
  for (int a = 0; a < A; ++a) {
    if (clusters[a] < 0 || clusters[a] >= num_clusters) {
      throw InputError("cluster index out of range");
    }
    x(a, a) = 1.0;
    x(A + clusters[a], a) = 1.0;
  }
  return Embedding(std::move(x));
}

// Clusters assigned iid uniformly.
inline OneHotEmbedding BuildOneHotEmbedding(int num_entities, int num_clusters,
                                            Rng& rng) {
  if (num_entities < 1 || num_clusters < 1) {
    throw InputError("one-hot embedding needs A >= 1 and at least one cluster");
  }
  std::uniform_int_distribution<int> pick(0, num_clusters - 1);
  std::vector<int> clusters(num_entities);
  for (auto& c : clusters) c = pick(rng);
  return {OneHotEmbeddingFromClusters(clusters, num_clusters), clusters};
}

// Uniform queries for a budget plan, then observations.
inline Dataset GeneratePassiveDataset(const BudgetPlan& plan,
                                      const GroundTruth& truth,
                                      const RootLaw& comparison_law,
                                      const RootLaw& rating_law, Rng& rng) {
  const int A = static_cast<int>(truth.scores.size());
  Queries q;
  q.ratings = SampleRatingQueries(plan.n_ratings, A, rng);
  q.comparisons = SampleComparisonQueriesUniform(plan.n_comparisons, A, rng);
  return GenerateObservations(q, truth, comparison_law, rating_law, rng);
}

struct ActiveLearningPlan {
  enum class FirstPhase { kRatings, kUniformComparisons };
  FirstPhase first_phase = FirstPhase::kRatings;
};

// Everything a two-phase elicitation run needs besides the ground truth.
struct ElicitationSetup {
  ScoraModel inference_model;          // embedding, inference laws, priors
  RootLaw true_comparison_law;
  RootLaw true_rating_law;
  double budget = 0.0;
  double fraction_comparisons = 0.0;
  double cost_comparison = 1.0;
  double cost_rating = 1.0;
  SolverConfig solver;
};

struct ActiveRun {
  Dataset data;                // phase-1 and phase-2 observations
  Vector intermediate_scores;  // scores fitted on phase-1 data only
  MapResult first_fit;
};

// Phase 1 spends (1 - p_c) b on ratings (or on uniform comparisons) and fits
// the MAP; phase 2 spends p_c b on comparisons drawn with weights
// exp(s_a + s_b) from the phase-1 scores. Phase-1 observations are kept.
inline ActiveRun RunActivePipeline(const ElicitationSetup& setup,
                                   const GroundTruth& truth,
                                   const ActiveLearningPlan& plan, Rng& rng) {
  const BudgetPlan budget =
      AllocateBudget(setup.budget, setup.fraction_comparisons,
                     setup.cost_comparison, setup.cost_rating);
  const int A = static_cast<int>(truth.scores.size());
  const double first_budget = (1.0 - setup.fraction_comparisons) * setup.budget;

  Queries first;
  if (plan.first_phase == ActiveLearningPlan::FirstPhase::kRatings) {
    first.ratings = SampleRatingQueries(budget.n_ratings, A, rng);
  } else {
    long n = static_cast<long>(std::floor(first_budget / setup.cost_comparison));
    first.comparisons = SampleComparisonQueriesUniform(n, A, rng);
  }
  ActiveRun run;
  run.data = GenerateObservations(first, truth, setup.true_comparison_law,
                                  setup.true_rating_law, rng);
  run.first_fit = SolveMap(setup.inference_model, run.data, setup.solver);
  run.intermediate_scores = run.first_fit.scores;

  Queries second;
  second.comparisons = SampleComparisonQueriesActive(
      budget.n_comparisons, run.intermediate_scores, rng);
  Dataset extra = GenerateObservations(second, truth, setup.true_comparison_law,
                                       setup.true_rating_law, rng);
  run.data.comparisons.insert(run.data.comparisons.end(),
                              extra.comparisons.begin(), extra.comparisons.end());
  return run;
}

}  // namespace scora

#endif  // SCORA_SYNTH_HPP_
