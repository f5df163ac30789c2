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

#ifndef SCORA_CORE_MODEL_HPP_
#define SCORA_CORE_MODEL_HPP_

// Observations, embeddings and the negative log-posterior of the joint
// comparison/rating model.
//
// Entities are indexed 0..A-1. A parameter vector beta of length D induces
// scores theta = x^T beta, where column a of the D x A embedding x is the
// feature vector of entity a. A comparison (b, c, r) is a generalized
// Bradley-Terry observation on theta_b - theta_c with root law f. A rating
// (a, t) is the same kind of observation on theta_a - theta0 with root law g,
// where theta0 is a learned rating threshold. With Gaussian priors on beta
// and theta0 the loss is
//
//   |beta|^2 / (2 var_beta) + theta0^2 / (2 var_threshold)
//     + sum_comparisons [Phi_f(theta_b - theta_c) - r (theta_b - theta_c)]
//     + sum_ratings     [Phi_g(theta_a - theta0) - t (theta_a - theta0)].
//
// The flexible model drops the threshold, lets every observation carry its
// own root law and takes a diagonal Gaussian prior. Appending a coordinate
// for theta0 and a phantom entity whose score is theta0 maps the joint model
// onto it exactly (ToFlexible).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "scora/error.hpp"
#include "scora/rootlaw.hpp"

namespace scora {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// D x A feature matrix; column a is the feature vector of entity a.
class Embedding {
 public:
  explicit Embedding(Matrix x) : x_(std::move(x)) {
    if (x_.rows() < 1 || x_.cols() < 1) {
      throw InputError("embedding needs at least one row and one column");
    }
    if (!x_.allFinite()) throw InputError("embedding has non-finite entries");
  }

  static Embedding Identity(int num_entities) {
    if (num_entities < 1) throw InputError("identity embedding needs A >= 1");
    return Embedding(Matrix::Identity(num_entities, num_entities));
  }

  int dim() const { return static_cast<int>(x_.rows()); }
  int num_entities() const { return static_cast<int>(x_.cols()); }
  const Matrix& matrix() const { return x_; }
  auto column(int a) const { return x_.col(a); }

  // Largest column norm, max_a |x_a|_2.
  double max_column_norm() const { return x_.colwise().norm().maxCoeff(); }

  // Spectral norm |x|_2.
  double spectral_norm() const {
    Eigen::JacobiSVD<Matrix> svd(x_);
    return svd.singularValues()(0);
  }

 private:
  Matrix x_;
};

// theta = x^T beta.
inline Vector Scores(const Embedding& embedding, const Vector& beta) {
  if (beta.size() != embedding.dim()) {
    throw InputError("beta has length " + std::to_string(beta.size()) +
                     ", embedding has " + std::to_string(embedding.dim()) +
                     " rows");
  }
  return embedding.matrix().transpose() * beta;
}

struct Rating {
  int entity = 0;
  double value = 0.0;
};

struct Comparison {
  int first = 0;
  int second = 0;
  double value = 0.0;
};

// Multisets of ratings and comparisons. Duplicates are meaningful.
struct Dataset {
  std::vector<Rating> ratings;
  std::vector<Comparison> comparisons;

  std::size_t size() const { return ratings.size() + comparisons.size(); }
  bool empty() const { return ratings.empty() && comparisons.empty(); }
};

namespace detail {

inline void CheckEntity(int index, int num_entities, const char* what) {
  if (index < 0 || index >= num_entities) {
    throw InputError(std::string(what) + " index " + std::to_string(index) +
                     " out of range [0, " + std::to_string(num_entities) +
                     ")");
  }
}

inline void CheckValue(double value, const RootLaw& law, const char* what) {
  if (!std::isfinite(value)) {
    throw InputError(std::string(what) + " value is not finite");
  }
  if (std::fabs(value) > law.support_bound().value) {
    throw InputError(std::string(what) + " value " + std::to_string(value) +
                     " lies outside the support of " + law.ToToken());
  }
}

}  // namespace detail

struct ScoraModel {
  Embedding embedding;
  RootLaw comparison_law;
  RootLaw rating_law;
  double prior_var_beta = 1.0;
  double prior_var_threshold = 1.0;

  ScoraModel(Embedding x, RootLaw f, RootLaw g, double var_beta = 1.0,
             double var_threshold = 1.0)
      : embedding(std::move(x)),
        comparison_law(f),
        rating_law(g),
        prior_var_beta(var_beta),
        prior_var_threshold(var_threshold) {
    if (!(var_beta > 0.0) || !(var_threshold > 0.0) ||
        !std::isfinite(var_beta) || !std::isfinite(var_threshold)) {
      throw InputError("prior variances must be positive and finite");
    }
  }

  int dim() const { return embedding.dim(); }
  int num_entities() const { return embedding.num_entities(); }
  double max_prior_var() const {
    return std::max(prior_var_beta, prior_var_threshold);
  }

  // Throws InputError on out-of-range indices, self-comparisons or values
  // outside the root law's support.
  void Validate(const Dataset& data) const {
    const int A = num_entities();
    for (const auto& c : data.comparisons) {
      detail::CheckEntity(c.first, A, "comparison");
      detail::CheckEntity(c.second, A, "comparison");
      if (c.first == c.second) {
        throw InputError("comparison of entity " + std::to_string(c.first) +
                         " with itself");
      }
      detail::CheckValue(c.value, comparison_law, "comparison");
    }
    for (const auto& r : data.ratings) {
      detail::CheckEntity(r.entity, A, "rating");
      detail::CheckValue(r.value, rating_law, "rating");
    }
  }
};

struct ScoraGradient {
  Vector beta;
  double theta0 = 0.0;
};

// Negative log-posterior up to an additive constant, summed term by term.
inline double ScoraLoss(const ScoraModel& model, const Dataset& data,
                        const Vector& beta, double theta0) {
  model.Validate(data);
  const Vector theta = Scores(model.embedding, beta);
  double loss = beta.squaredNorm() / (2.0 * model.prior_var_beta) +
                theta0 * theta0 / (2.0 * model.prior_var_threshold);
  for (const auto& c : data.comparisons) {
    double z = theta(c.first) - theta(c.second);
    loss += model.comparison_law.cgf(z) - c.value * z;
  }
  for (const auto& r : data.ratings) {
    double z = theta(r.entity) - theta0;
    loss += model.rating_law.cgf(z) - r.value * z;
  }
  return loss;
}

inline ScoraGradient ScoraLossGradient(const ScoraModel& model,
                                       const Dataset& data, const Vector& beta,
                                       double theta0) {
  model.Validate(data);
  const Vector theta = Scores(model.embedding, beta);
  Vector score_grad = Vector::Zero(model.num_entities());
  double threshold_grad = theta0 / model.prior_var_threshold;
  for (const auto& c : data.comparisons) {
    double w = model.comparison_law.cgf_prime(theta(c.first) - theta(c.second)) -
               c.value;
    score_grad(c.first) += w;
    score_grad(c.second) -= w;
  }
  for (const auto& r : data.ratings) {
    double w = model.rating_law.cgf_prime(theta(r.entity) - theta0) - r.value;
    score_grad(r.entity) += w;
    threshold_grad -= w;
  }
  ScoraGradient g;
  g.beta = beta / model.prior_var_beta + model.embedding.matrix() * score_grad;
  g.theta0 = threshold_grad;
  return g;
}

struct FlexObservation {
  int first = 0;
  int second = 0;
  double value = 0.0;
  RootLaw law = RootLaw::ContinuousUniform();
};

// Comparison-only model with per-observation root laws and a diagonal
// Gaussian prior N(0, diag(prior_variances)).
struct FlexModel {
  Embedding embedding;
  Vector prior_variances;

  FlexModel(Embedding x, Vector variances)
      : embedding(std::move(x)), prior_variances(std::move(variances)) {
    if (prior_variances.size() != embedding.dim()) {
      throw InputError("need one prior variance per embedding row");
    }
    for (Eigen::Index d = 0; d < prior_variances.size(); ++d) {
      if (!(prior_variances(d) > 0.0) || !std::isfinite(prior_variances(d))) {
        throw InputError("prior variances must be positive and finite");
      }
    }
  }

  int dim() const { return embedding.dim(); }
  int num_entities() const { return embedding.num_entities(); }

  void Validate(const std::vector<FlexObservation>& obs) const {
    for (const auto& o : obs) {
      detail::CheckEntity(o.first, num_entities(), "observation");
      detail::CheckEntity(o.second, num_entities(), "observation");
      if (o.first == o.second) {
        throw InputError("observation compares an entity with itself");
      }
      detail::CheckValue(o.value, o.law, "observation");
    }
  }
};

inline double FlexibleLoss(const FlexModel& model,
                           const std::vector<FlexObservation>& obs,
                           const Vector& beta) {
  model.Validate(obs);
  const Vector theta = Scores(model.embedding, beta);
  double loss = 0.5 * (beta.array().square() / model.prior_variances.array()).sum();
  for (const auto& o : obs) {
    double z = theta(o.first) - theta(o.second);
    loss += o.law.cgf(z) - o.value * z;
  }
  return loss;
}

inline Vector FlexibleLossGradient(const FlexModel& model,
                                   const std::vector<FlexObservation>& obs,
                                   const Vector& beta) {
  model.Validate(obs);
  const Vector theta = Scores(model.embedding, beta);
  Vector score_grad = Vector::Zero(model.num_entities());
  for (const auto& o : obs) {
    double w = o.law.cgf_prime(theta(o.first) - theta(o.second)) - o.value;
    score_grad(o.first) += w;
    score_grad(o.second) -= w;
  }
  Vector g = (beta.array() / model.prior_variances.array()).matrix();
  g += model.embedding.matrix() * score_grad;
  return g;
}

struct FlexProblem {
  FlexModel model;
  std::vector<FlexObservation> observations;
};

// Augments x with a zero row and a phantom entity A whose feature vector is
// e_{D}; comparisons keep their law f, each rating (a, t) becomes the
// comparison (a, A, t) with law g. Observation n of the output is comparison
// n for n < N_c and rating n - N_c afterwards.
inline FlexProblem ToFlexible(const ScoraModel& model, const Dataset& data) {
  model.Validate(data);
  const int D = model.dim();
  const int A = model.num_entities();
  Matrix x = Matrix::Zero(D + 1, A + 1);
  x.topLeftCorner(D, A) = model.embedding.matrix();
  x(D, A) = 1.0;
  Vector variances = Vector::Constant(D + 1, model.prior_var_beta);
  variances(D) = model.prior_var_threshold;

  std::vector<FlexObservation> obs;
  obs.reserve(data.size());
  for (const auto& c : data.comparisons) {
    obs.push_back({c.first, c.second, c.value, model.comparison_law});
  }
  for (const auto& r : data.ratings) {
    obs.push_back({r.entity, A, r.value, model.rating_law});
  }
  return {FlexModel(Embedding(std::move(x)), std::move(variances)),
          std::move(obs)};
}

// Inverse of the observation map of ToFlexible: observations whose second
// entity is the phantom entity are ratings, the rest are comparisons.
inline Dataset FromFlexible(const std::vector<FlexObservation>& obs,
                            int num_entities) {
  Dataset data;
  for (const auto& o : obs) {
    if (o.second == num_entities) {
      data.ratings.push_back({o.first, o.value});
    } else {
      data.comparisons.push_back({o.first, o.second, o.value});
    }
  }
  return data;
}

}  // namespace scora

#endif  // SCORA_CORE_MODEL_HPP_
