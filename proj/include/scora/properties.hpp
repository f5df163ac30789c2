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

#ifndef SCORA_PROPERTIES_HPP_
#define SCORA_PROPERTIES_HPP_

// Randomized checks of the structural properties of the model and of the MAP
// estimator: derivative consistency of the CGFs, moments of the tilted
// samplers, the threshold identity of the embedding-free model, pairwise
// monotonicity, the sign of the update caused by one new observation, the
// Lipschitz bound on single edits, exactness of the reduction to the flexible
// model, strong convexity, gradient correctness and metric invariances.
//
// Each suite is a pure function of its seed and returns one report.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "scora/core_model.hpp"
#include "scora/metrics.hpp"
#include "scora/rootlaw.hpp"
#include "scora/solver.hpp"
#include "scora/synth.hpp"

namespace scora::properties {

struct PropertyReport {
  std::string name;
  long trials = 0;
  long violations = 0;
  long skipped = 0;       // e.g. ties in the directional-update suite
  double worst = 0.0;     // largest observed statistic (meaning per suite)
  double tolerance = 0.0;

  bool passed() const { return trials > 0 && violations == 0; }
};

// Tighter than the default so that 1e-6 and 1e-8 slacks never see solver
// noise.
inline SolverConfig PropertySolverConfig() {
  SolverConfig config;
  config.gradient_tolerance = 1e-11;
  config.max_iterations = 5000;
  return config;
}

struct Instance {
  ScoraModel model;
  Dataset data;
};

struct InstanceOptions {
  int min_entities = 2;
  int max_entities = 7;
  bool identity_embedding = true;
  int max_comparisons = 12;
  int max_ratings = 12;
  bool unit_priors = false;
  bool bounded_laws = false;  // only k-ary laws
};

inline RootLaw RandomLaw(Rng& rng, bool bounded) {
  std::uniform_int_distribution<int> pick(0, bounded ? 3 : 5);
  int k = pick(rng);
  if (k <= 3) return RootLaw::KAry(k + 2);
  if (k == 4) return RootLaw::ContinuousUniform();
  std::uniform_real_distribution<double> var(0.5, 2.0);
  return RootLaw::Gaussian(var(rng));
}

// A value the law can produce.
inline double RandomValue(const RootLaw& law, Rng& rng) {
  switch (law.kind()) {
    case RootLaw::Kind::kKAry: {
      std::uniform_int_distribution<int> j(0, law.arity() - 1);
      return law.atom(j(rng));
    }
    case RootLaw::Kind::kContinuousUniform: {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      return u(rng);
    }
    case RootLaw::Kind::kGaussian: {
      std::normal_distribution<double> n(0.0, 1.5);
      return n(rng);
    }
  }
  return 0.0;
}

inline Comparison RandomComparison(int num_entities, const RootLaw& law, Rng& rng) {
  std::uniform_int_distribution<int> first(0, num_entities - 1);
  std::uniform_int_distribution<int> other(0, num_entities - 2);
  int b = first(rng);
  int c = other(rng);
  if (c >= b) ++c;
  return {b, c, RandomValue(law, rng)};
}

inline Rating RandomRating(int num_entities, const RootLaw& law, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, num_entities - 1);
  return {pick(rng), RandomValue(law, rng)};
}

inline Instance RandomInstance(Rng& rng, const InstanceOptions& opt = {}) {
  std::uniform_int_distribution<int> entities(opt.min_entities, opt.max_entities);
  const int A = entities(rng);
  Matrix x;
  if (opt.identity_embedding) {
    x = Matrix::Identity(A, A);
  } else {
    std::uniform_int_distribution<int> dims(1, A + 2);
    std::normal_distribution<double> normal(0.0, 1.0);
    x.resize(dims(rng), A);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  }
  std::uniform_real_distribution<double> var(0.3, 3.0);
  double var_beta = opt.unit_priors ? 1.0 : var(rng);
  double var_threshold = opt.unit_priors ? 1.0 : var(rng);
  RootLaw f = RandomLaw(rng, opt.bounded_laws);
  RootLaw g = RandomLaw(rng, opt.bounded_laws);
  Instance inst{ScoraModel(Embedding(std::move(x)), f, g, var_beta, var_threshold), {}};

  std::uniform_int_distribution<int> nc(0, opt.max_comparisons);
  std::uniform_int_distribution<int> nr(0, opt.max_ratings);
  int n_comparisons = nc(rng);
  int n_ratings = nr(rng);
  for (int i = 0; i < n_comparisons; ++i) {
    inst.data.comparisons.push_back(RandomComparison(A, f, rng));
  }
  for (int i = 0; i < n_ratings; ++i) {
    inst.data.ratings.push_back(RandomRating(A, g, rng));
  }
  return inst;
}

inline Vector RandomVector(Eigen::Index n, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (auto& e : v) e = normal(rng);
  return v;
}

// theta*_b - theta*_c, or theta*_a - theta0* when second < 0.
inline double MapDifference(const MapResult& map, int first, int second) {
  return map.scores(first) - (second < 0 ? map.theta0 : map.scores(second));
}

inline PropertyReport CheckCgfDerivatives() {
  PropertyReport rep{"cgf derivatives, symmetry and convexity", 0, 0, 0, 0.0, 1e-6};
  const std::vector<RootLaw> laws = {RootLaw::KAry(2), RootLaw::KAry(5),
                                     RootLaw::ContinuousUniform(),
                                     RootLaw::Gaussian(1.0)};
  const double h = 1e-5;
  for (const auto& law : laws) {
    for (double theta = -10.0; theta <= 10.0; theta += 0.1) {
      double d1 = law.cgf_prime(theta), d2 = law.cgf_double_prime(theta);
      double fd1 = (law.cgf(theta + h) - law.cgf(theta - h)) / (2 * h);
      double fd2 = (law.cgf_prime(theta + h) - law.cgf_prime(theta - h)) / (2 * h);
      double e1 = std::fabs(fd1 - d1) / std::max(std::fabs(d1), 1e-2);
      double e2 = std::fabs(fd2 - d2) / std::max(std::fabs(d2), 1e-2);
      double sym = std::max(std::fabs(law.cgf(theta) - law.cgf(-theta)),
                            std::fabs(law.cgf_prime(theta) + law.cgf_prime(-theta)));
      double conv = law.cgf(theta) - 0.5 * (law.cgf(theta - 0.7) + law.cgf(theta + 0.7));
      rep.trials += 1;
      rep.worst = std::max({rep.worst, e1, e2});
      if (e1 > 1e-6 || e2 > 1e-6 || sym > 1e-12 || conv > 1e-12) ++rep.violations;
    }
  }
  return rep;
}

// Sample mean and variance of sample_tilted against Phi' and Phi'' within
// five standard errors; the standard error of the variance uses the
// empirical fourth central moment.
inline PropertyReport CheckMoments(std::uint64_t seed, int draws = 100000) {
  PropertyReport rep{"tilted sampler moments", 0, 0, 0, 0.0, 5.0};
  const std::vector<RootLaw> laws = {RootLaw::KAry(2), RootLaw::KAry(5),
                                     RootLaw::ContinuousUniform(),
                                     RootLaw::Gaussian(1.0)};
  Rng rng(seed);
  std::vector<double> xs(draws);
  for (const auto& law : laws) {
    for (double theta : {-2.0, 0.0, 0.5, 3.0}) {
      double sum = 0.0;
      for (auto& x : xs) {
        x = law.sample_tilted(theta, rng);
        sum += x;
      }
      const double mean = sum / draws;
      double m2 = 0.0, m4 = 0.0;
      for (double x : xs) {
        double d2 = (x - mean) * (x - mean);
        m2 += d2;
        m4 += d2 * d2;
      }
      m2 /= draws;
      m4 /= draws;
      const double se_mean = std::sqrt(m2 / draws);
      const double se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / draws);
      const double z_mean = std::fabs(mean - law.cgf_prime(theta)) / se_mean;
      const double z_var = std::fabs(m2 - law.cgf_double_prime(theta)) / se_var;
      rep.trials += 2;
      rep.worst = std::max({rep.worst, z_mean, z_var});
      if (!(z_mean <= 5.0)) ++rep.violations;
      if (!(z_var <= 5.0)) ++rep.violations;
    }
  }
  return rep;
}

// Without embedding, theta0* = -(var_threshold / var_beta) sum_a theta*_a.
inline PropertyReport CheckThresholdIdentity(std::uint64_t seed, int trials = 200) {
  PropertyReport rep{"threshold identity", 0, 0, 0, 0.0, 1e-6};
  Rng rng(seed);
  InstanceOptions opt;
  opt.max_entities = 10;
  opt.max_comparisons = 20;
  opt.max_ratings = 20;
  for (int t = 0; t < trials; ++t) {
    Instance inst = RandomInstance(rng, opt);
    MapResult map = SolveMap(inst.model, inst.data, PropertySolverConfig());
    double predicted = -inst.model.prior_var_threshold / inst.model.prior_var_beta *
                       map.scores.sum();
    double err = std::fabs(map.theta0 - predicted);
    rep.trials += 1;
    rep.worst = std::max(rep.worst, err);
    if (!(err <= rep.tolerance)) ++rep.violations;
  }
  return rep;
}

// Where one observation sits in a dataset.
struct ObservationRef {
  bool rating = false;
  std::size_t index = 0;
};

inline double& ValueAt(Dataset& data, ObservationRef ref) {
  return ref.rating ? data.ratings[ref.index].value
                    : data.comparisons[ref.index].value;
}

// (first, second) of the score difference an observation acts on; second is
// -1 for the threshold.
inline std::pair<int, int> TargetOf(const Dataset& data, ObservationRef ref) {
  if (ref.rating) return {data.ratings[ref.index].entity, -1};
  const auto& c = data.comparisons[ref.index];
  return {c.first, c.second};
}

// Raising one observation's value never lowers its MAP score difference.
inline PropertyReport CheckPairwiseMonotonicity(std::uint64_t seed, int trials = 1000) {
  PropertyReport rep{"pairwise monotonicity", 0, 0, 0, 0.0, 1e-8};
  Rng rng(seed);
  InstanceOptions opt;
  std::bernoulli_distribution use_rating(0.5);
  for (int t = 0; t < trials; ++t) {
    opt.identity_embedding = t % 2 == 0;
    Instance inst = RandomInstance(rng, opt);
    const int A = inst.model.num_entities();
    ObservationRef ref;
    const RootLaw* law;
    if (use_rating(rng)) {
      inst.data.ratings.push_back(RandomRating(A, inst.model.rating_law, rng));
      std::uniform_int_distribution<std::size_t> pick(0, inst.data.ratings.size() - 1);
      ref = {true, pick(rng)};
      law = &inst.model.rating_law;
    } else {
      inst.data.comparisons.push_back(RandomComparison(A, inst.model.comparison_law, rng));
      std::uniform_int_distribution<std::size_t> pick(0, inst.data.comparisons.size() - 1);
      ref = {false, pick(rng)};
      law = &inst.model.comparison_law;
    }
    const double a = RandomValue(*law, rng);
    const double b = RandomValue(*law, rng);
    Dataset low = inst.data;
    Dataset high = inst.data;
    ValueAt(low, ref) = std::min(a, b);
    ValueAt(high, ref) = std::max(a, b);
    const auto [first, second] = TargetOf(inst.data, ref);
    const MapResult map_low = SolveMap(inst.model, low, PropertySolverConfig());
    const MapResult map_high = SolveMap(inst.model, high, PropertySolverConfig());
    const double drop = MapDifference(map_low, first, second) -
                        MapDifference(map_high, first, second);
    rep.trials += 1;
    rep.worst = std::max(rep.worst, drop);
    if (drop > rep.tolerance) ++rep.violations;
  }
  return rep;
}

// Adding (b, c, r) moves theta*_b - theta*_c in the direction of
// r - Phi'_f(theta*_b - theta*_c); same for a rating against Phi'_g. Trials
// with |r - Phi'| <= 1e-6 are ties and are skipped.
inline PropertyReport CheckDirectionalUpdate(std::uint64_t seed, int trials = 500) {
  PropertyReport rep{"directional update", 0, 0, 0, 0.0, 1e-6};
  Rng rng(seed);
  InstanceOptions opt;
  std::bernoulli_distribution use_rating(0.5);
  for (int t = 0; t < trials; ++t) {
    opt.identity_embedding = t % 2 == 0;
    Instance inst = RandomInstance(rng, opt);
    const int A = inst.model.num_entities();
    const MapResult before = SolveMap(inst.model, inst.data, PropertySolverConfig());
    Dataset after_data = inst.data;
    int first, second;
    double gap;
    if (use_rating(rng)) {
      Rating r = RandomRating(A, inst.model.rating_law, rng);
      first = r.entity;
      second = -1;
      gap = r.value - inst.model.rating_law.cgf_prime(MapDifference(before, first, second));
      after_data.ratings.push_back(r);
    } else {
      Comparison c = RandomComparison(A, inst.model.comparison_law, rng);
      first = c.first;
      second = c.second;
      gap = c.value -
            inst.model.comparison_law.cgf_prime(MapDifference(before, first, second));
      after_data.comparisons.push_back(c);
    }
    if (std::fabs(gap) <= rep.tolerance) {
      ++rep.skipped;
      continue;
    }
    const MapResult after = SolveMap(inst.model, after_data, PropertySolverConfig());
    const double move =
        MapDifference(after, first, second) - MapDifference(before, first, second);
    rep.trials += 1;
    if (!(move * gap > 0.0)) {
      ++rep.violations;
      rep.worst = std::max(rep.worst, std::fabs(move));
    }
  }
  return rep;
}

// Adding an observation equal to its expected value under the current MAP
// leaves the MAP unchanged.
inline PropertyReport CheckZeroUpdate(std::uint64_t seed, int trials = 500) {
  PropertyReport rep{"zero update", 0, 0, 0, 0.0, 1e-6};
  Rng rng(seed);
  InstanceOptions opt;
  std::bernoulli_distribution use_rating(0.5);
  for (int t = 0; t < trials; ++t) {
    opt.identity_embedding = t % 2 == 0;
    Instance inst = RandomInstance(rng, opt);
    const int A = inst.model.num_entities();
    const MapResult before = SolveMap(inst.model, inst.data, PropertySolverConfig());
    Dataset after_data = inst.data;
    if (use_rating(rng)) {
      Rating r = RandomRating(A, inst.model.rating_law, rng);
      r.value = inst.model.rating_law.cgf_prime(MapDifference(before, r.entity, -1));
      after_data.ratings.push_back(r);
    } else {
      Comparison c = RandomComparison(A, inst.model.comparison_law, rng);
      c.value = inst.model.comparison_law.cgf_prime(MapDifference(before, c.first, c.second));
      after_data.comparisons.push_back(c);
    }
    const MapResult after = SolveMap(inst.model, after_data, PropertySolverConfig());
    const double shift = std::max((after.beta - before.beta).lpNorm<Eigen::Infinity>(),
                                  std::fabs(after.theta0 - before.theta0));
    rep.trials += 1;
    rep.worst = std::max(rep.worst, shift);
    if (!(shift <= rep.tolerance)) ++rep.violations;
  }
  return rep;
}

// One elementary edit (add, remove or modify a rating or a comparison) moves
// the scores by at most L |x|_2 and the threshold by at most L, with
// L = 4 max(var_beta, var_threshold) max(R, T) max(1, max_a |x_a|_2).
// Identity embedding, unit prior variances and k-ary laws give L = 4.
inline PropertyReport CheckLipschitzResilience(std::uint64_t seed, int trials = 500) {
  // worst is the largest move as a fraction of its bound.
  PropertyReport rep{"Lipschitz resilience", 0, 0, 0, 0.0, 1.0};
  Rng rng(seed);
  InstanceOptions opt;
  opt.unit_priors = true;
  opt.bounded_laws = true;
  opt.max_comparisons = 15;
  opt.max_ratings = 15;
  std::uniform_int_distribution<int> edit_kind(0, 2);
  std::bernoulli_distribution use_rating(0.5);
  for (int t = 0; t < trials; ++t) {
    Instance inst = RandomInstance(rng, opt);
    const ScoraModel& model = inst.model;
    const int A = model.num_entities();
    const double bound = std::max(model.comparison_law.support_bound().value,
                                  model.rating_law.support_bound().value);
    const double lipschitz = 4.0 * model.max_prior_var() * bound *
                             std::max(1.0, model.embedding.max_column_norm());
    const double x_norm = model.embedding.spectral_norm();

    Dataset edited = inst.data;
    const bool rating = use_rating(rng);
    int kind = edit_kind(rng);
    const std::size_t count = rating ? edited.ratings.size() : edited.comparisons.size();
    if (count == 0) kind = 0;
    if (kind == 0) {
      if (rating) {
        edited.ratings.push_back(RandomRating(A, model.rating_law, rng));
      } else {
        edited.comparisons.push_back(RandomComparison(A, model.comparison_law, rng));
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, count - 1);
      const std::size_t i = pick(rng);
      if (kind == 1) {
        if (rating) {
          edited.ratings.erase(edited.ratings.begin() + i);
        } else {
          edited.comparisons.erase(edited.comparisons.begin() + i);
        }
      } else if (rating) {
        edited.ratings[i] = RandomRating(A, model.rating_law, rng);
      } else {
        edited.comparisons[i] = RandomComparison(A, model.comparison_law, rng);
      }
    }
    const MapResult a = SolveMap(model, inst.data, PropertySolverConfig());
    const MapResult b = SolveMap(model, edited, PropertySolverConfig());
    const double score_move = (a.scores - b.scores).norm() / (lipschitz * x_norm);
    const double threshold_move = std::fabs(a.theta0 - b.theta0) / lipschitz;
    rep.trials += 1;
    rep.worst = std::max({rep.worst, score_move, threshold_move});
    if (score_move > 1.0 || threshold_move > 1.0) ++rep.violations;
  }
  return rep;
}

// The joint loss equals the flexible loss of its image pointwise, and both
// solvers land on the same MAP.
inline PropertyReport CheckReduction(std::uint64_t seed, int trials = 100) {
  PropertyReport rep{"reduction to the flexible model", 0, 0, 0, 0.0, 1e-12};
  Rng rng(seed);
  InstanceOptions opt;
  for (int t = 0; t < trials; ++t) {
    opt.identity_embedding = t % 2 == 0;
    Instance inst = RandomInstance(rng, opt);
    const FlexProblem flex = ToFlexible(inst.model, inst.data);
    const int D = inst.model.dim();
    const Vector beta = RandomVector(D, 1.5, rng);
    const double theta0 = RandomVector(1, 1.5, rng)(0);
    Vector augmented(D + 1);
    augmented << beta, theta0;
    const double l1 = ScoraLoss(inst.model, inst.data, beta, theta0);
    const double l2 = FlexibleLoss(flex.model, flex.observations, augmented);
    const double rel = std::fabs(l1 - l2) / std::max(1.0, std::fabs(l1));

    const MapResult map = SolveMap(inst.model, inst.data, PropertySolverConfig());
    const FlexMapResult fmap =
        SolveMapFlexible(flex.model, flex.observations, PropertySolverConfig());
    const double map_gap = std::max((fmap.beta.head(D) - map.beta).lpNorm<Eigen::Infinity>(),
                                    std::fabs(fmap.beta(D) - map.theta0));
    rep.trials += 1;
    rep.worst = std::max(rep.worst, rel);
    if (!(rel <= 1e-12) || !(map_gap <= 1e-6)) ++rep.violations;
  }
  return rep;
}

// L(midpoint) <= (L(p1) + L(p2)) / 2 - |p1 - p2|^2 / (8 max variance).
inline PropertyReport CheckStrongConvexity(std::uint64_t seed, int trials = 100) {
  PropertyReport rep{"strong convexity", 0, 0, 0, 0.0, 1e-10};
  Rng rng(seed);
  InstanceOptions opt;
  for (int t = 0; t < trials; ++t) {
    opt.identity_embedding = t % 2 == 0;
    Instance inst = RandomInstance(rng, opt);
    const int D = inst.model.dim();
    const Vector p1 = RandomVector(D + 1, 2.0, rng);
    const Vector p2 = RandomVector(D + 1, 2.0, rng);
    const Vector mid = 0.5 * (p1 + p2);
    auto loss = [&](const Vector& p) {
      return ScoraLoss(inst.model, inst.data, p.head(D), p(D));
    };
    const double excess = loss(mid) - 0.5 * (loss(p1) + loss(p2)) +
                          (p1 - p2).squaredNorm() / (8.0 * inst.model.max_prior_var());
    rep.trials += 1;
    rep.worst = std::max(rep.worst, excess);
    if (excess > rep.tolerance) ++rep.violations;
  }
  return rep;
}

// Central differences of a scalar function, step scaled to |p_i|.
inline Vector FiniteDifferenceGradient(const std::function<double(const Vector&)>& f,
                                       const Vector& p, double step = 1e-5) {
  Vector g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double h = step * std::max(1.0, std::fabs(p(i)));
    Vector hi = p, lo = p;
    hi(i) += h;
    lo(i) -= h;
    g(i) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline double RelativeError(const Vector& approx, const Vector& exact) {
  return (approx - exact).lpNorm<Eigen::Infinity>() /
         std::max(1.0, exact.lpNorm<Eigen::Infinity>());
}

// Analytic gradients of the joint and flexible losses against finite
// differences; the aggregated solver objective against both.
inline PropertyReport CheckGradients(std::uint64_t seed, int trials = 50) {
  PropertyReport rep{"gradients vs finite differences", 0, 0, 0, 0.0, 1e-6};
  Rng rng(seed);
  InstanceOptions opt;
  for (int t = 0; t < trials; ++t) {
    opt.identity_embedding = t % 2 == 0;
    Instance inst = RandomInstance(rng, opt);
    const int D = inst.model.dim();
    const Vector p = RandomVector(D + 1, 1.0, rng);
    auto scora = [&](const Vector& q) {
      return ScoraLoss(inst.model, inst.data, q.head(D), q(D));
    };
    const ScoraGradient g = ScoraLossGradient(inst.model, inst.data, p.head(D), p(D));
    Vector analytic(D + 1);
    analytic << g.beta, g.theta0;
    const double e1 = RelativeError(FiniteDifferenceGradient(scora, p), analytic);

    const FlexProblem flex = ToFlexible(inst.model, inst.data);
    auto flexible = [&](const Vector& q) {
      return FlexibleLoss(flex.model, flex.observations, q);
    };
    const Vector fg = FlexibleLossGradient(flex.model, flex.observations, p);
    const double e2 = RelativeError(FiniteDifferenceGradient(flexible, p), fg);

    const GbtObjective objective = GbtObjective::FromScora(inst.model, inst.data);
    Vector og;
    const double ov = objective(p, og);
    const double e3 = std::max(RelativeError(og, analytic),
                               std::fabs(ov - scora(p)) / std::max(1.0, std::fabs(ov)));
    rep.trials += 1;
    rep.worst = std::max({rep.worst, e1, e2, e3});
    if (!(e1 <= 1e-6) || !(e2 <= 1e-6) || !(e3 <= 1e-10)) ++rep.violations;
  }
  return rep;
}

// Explicit weighted cosine with caller-supplied weights.
inline double WeightedCosine(const Vector& e, const Vector& t, const Vector& w) {
  const double num = (w.array() * e.array() * t.array()).sum();
  return num / (std::sqrt((w.array() * e.array().square()).sum()) *
                std::sqrt((w.array() * t.array().square()).sum()));
}

// Scale invariance and weight-shift invariance of the weighted correlation,
// agreement with the unshifted formula, and [-1, 1] bounds of both metrics.
inline PropertyReport CheckMetricInvariants(std::uint64_t seed, int trials = 200) {
  PropertyReport rep{"metric invariants", 0, 0, 0, 0.0, 1e-12};
  Rng rng(seed);
  std::uniform_int_distribution<int> size(2, 30);
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  std::uniform_real_distribution<double> shift(-20.0, 20.0);
  for (int t = 0; t < trials; ++t) {
    const int n = size(rng);
    const Vector e = RandomVector(n, 2.0, rng);
    const Vector truth = RandomVector(n, 2.0, rng);
    const double base = WeightedCorrExp(e, truth);
    const double scaled = WeightedCorrExp(factor(rng) * e, truth);
    const Vector w = truth.array().exp().matrix();
    const double explicit_value = WeightedCosine(e, truth, w);
    const double shifted = WeightedCosine(e, truth, w * std::exp(shift(rng)));
    const double pearson = PearsonCorr(e, truth);
    const double dev = std::max({std::fabs(base - scaled), std::fabs(base - explicit_value),
                                 std::fabs(explicit_value - shifted)});
    rep.trials += 1;
    rep.worst = std::max(rep.worst, dev);
    if (!(dev <= 1e-12) || std::fabs(base) > 1.0 || std::fabs(pearson) > 1.0) {
      ++rep.violations;
    }
  }
  return rep;
}

// Every suite, in a fixed order, with sizes as used for acceptance.
inline std::vector<PropertyReport> RunAllSuites(std::uint64_t seed) {
  std::vector<PropertyReport> out;
  out.push_back(CheckCgfDerivatives());
  out.push_back(CheckMoments(seed + 1));
  out.push_back(CheckThresholdIdentity(seed + 2));
  out.push_back(CheckPairwiseMonotonicity(seed + 3));
  out.push_back(CheckDirectionalUpdate(seed + 4));
  out.push_back(CheckZeroUpdate(seed + 5));
  out.push_back(CheckLipschitzResilience(seed + 6));
  out.push_back(CheckReduction(seed + 7));
  out.push_back(CheckStrongConvexity(seed + 8));
  out.push_back(CheckGradients(seed + 9));
  out.push_back(CheckMetricInvariants(seed + 10));
  return out;
}

}  // namespace scora::properties

#endif  // SCORA_PROPERTIES_HPP_
