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

#include "scora/core_model.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "scora/properties.hpp"
#include "scora/synth.hpp"

namespace scora {
namespace {

using properties::FiniteDifferenceGradient;
using properties::RandomInstance;
using properties::RandomVector;
using properties::RelativeError;

ScoraModel TwoEntityBinary() {
  return ScoraModel(Embedding::Identity(2), RootLaw::KAry(2), RootLaw::KAry(2));
}

// Random instance with A = 5, 10 comparisons and 10 ratings.
properties::Instance FixedSizeInstance(std::uint64_t seed) {
  Rng rng(seed);
  ScoraModel model(Embedding::Identity(5), RootLaw::ContinuousUniform(),
                   RootLaw::KAry(5), 1.7, 0.6);
  Dataset data;
  for (int i = 0; i < 10; ++i) {
    data.comparisons.push_back(properties::RandomComparison(5, model.comparison_law, rng));
    data.ratings.push_back(properties::RandomRating(5, model.rating_law, rng));
  }
  return {model, data};
}

TEST(ScoraLossTest, EmptyDatasetAtOrigin) {
  ScoraModel model = TwoEntityBinary();
  EXPECT_EQ(ScoraLoss(model, {}, Vector::Zero(2), 0.0), 0.0);
}

TEST(ScoraLossTest, SingleComparisonExamples) {
  ScoraModel model = TwoEntityBinary();
  Dataset data;
  data.comparisons.push_back({0, 1, 1.0});
  EXPECT_EQ(ScoraLoss(model, data, Vector::Zero(2), 0.0), 0.0);
  Vector beta(2);
  beta << 1.0, -1.0;
  // 1 + log((e^2 + e^-2) / 2) - 2, mpmath.
  EXPECT_NEAR(ScoraLoss(model, data, beta, 0.0), 0.32500274735786443, 1e-14);
}

TEST(ScoraLossTest, RatingUsesRatedEntity) {
  Matrix x(1, 2);
  x << 2.0, -1.0;
  ScoraModel model(Embedding(x), RootLaw::Gaussian(1.0), RootLaw::Gaussian(1.0));
  Dataset data;
  data.ratings.push_back({1, 0.5});
  Vector beta(1);
  beta << 1.0;
  // theta_1 - theta0 = -1 - 0.25
  const double z = -1.25;
  EXPECT_NEAR(ScoraLoss(model, data, beta, 0.25),
              0.5 + 0.25 * 0.25 / 2 + z * z / 2 - 0.5 * z, 1e-15);
}

TEST(ScoraLossTest, RejectsBadIndicesAndValues) {
  ScoraModel model = TwoEntityBinary();
  Dataset bad_index;
  bad_index.comparisons.push_back({0, 2, 1.0});
  EXPECT_THROW(ScoraLoss(model, bad_index, Vector::Zero(2), 0.0), InputError);
  Dataset self;
  self.comparisons.push_back({1, 1, 1.0});
  EXPECT_THROW(ScoraLoss(model, self, Vector::Zero(2), 0.0), InputError);
  Dataset rating;
  rating.ratings.push_back({-1, 1.0});
  EXPECT_THROW(ScoraLoss(model, rating, Vector::Zero(2), 0.0), InputError);
  Dataset out_of_support;
  out_of_support.ratings.push_back({0, 1.5});
  EXPECT_THROW(ScoraLoss(model, out_of_support, Vector::Zero(2), 0.0), InputError);
  EXPECT_THROW(ScoraLoss(model, {}, Vector::Zero(3), 0.0), InputError);
}

TEST(ScoraModelTest, RejectsNonPositiveVariances) {
  EXPECT_THROW(ScoraModel(Embedding::Identity(2), RootLaw::KAry(2), RootLaw::KAry(2), 0.0, 1.0),
               InputError);
  EXPECT_THROW(ScoraModel(Embedding::Identity(2), RootLaw::KAry(2), RootLaw::KAry(2), 1.0, -1.0),
               InputError);
}

TEST(ScoraGradientTest, EmptyDatasetGivesPriorGradient) {
  ScoraModel model(Embedding::Identity(3), RootLaw::KAry(2), RootLaw::KAry(2));
  Vector v(3);
  v << 0.3, -2.0, 5.0;
  ScoraGradient g = ScoraLossGradient(model, {}, v, -1.5);
  EXPECT_EQ(g.beta, v);
  EXPECT_EQ(g.theta0, -1.5);
}

TEST(ScoraGradientTest, MatchesFiniteDifferences) {
  auto inst = FixedSizeInstance(7);
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    Vector p = RandomVector(6, 1.0, rng);
    auto loss = [&](const Vector& q) {
      return ScoraLoss(inst.model, inst.data, q.head(5), q(5));
    };
    ScoraGradient g = ScoraLossGradient(inst.model, inst.data, p.head(5), p(5));
    Vector analytic(6);
    analytic << g.beta, g.theta0;
    EXPECT_LE(RelativeError(FiniteDifferenceGradient(loss, p), analytic), 1e-6);
  }
}

TEST(ToFlexibleTest, ComparisonsOnly) {
  Rng rng(1);
  ScoraModel model(Embedding::Identity(4), RootLaw::KAry(3), RootLaw::ContinuousUniform());
  Dataset data;
  for (int i = 0; i < 3; ++i) {
    data.comparisons.push_back(properties::RandomComparison(4, model.comparison_law, rng));
  }
  FlexProblem flex = ToFlexible(model, data);
  EXPECT_EQ(flex.model.dim(), model.dim() + 1);
  EXPECT_EQ(flex.model.num_entities(), model.num_entities() + 1);
  ASSERT_EQ(flex.observations.size(), 3u);
  for (const auto& o : flex.observations) {
    EXPECT_NE(o.first, 4);
    EXPECT_NE(o.second, 4);
    EXPECT_EQ(o.law, model.comparison_law);
  }
}

TEST(ToFlexibleTest, RatingsBecomeComparisonsWithPhantom) {
  ScoraModel model(Embedding::Identity(3), RootLaw::KAry(3), RootLaw::KAry(5), 2.0, 0.5);
  Dataset data;
  data.comparisons.push_back({0, 1, -1.0});
  data.ratings.push_back({2, 0.5});
  data.ratings.push_back({0, -0.5});
  FlexProblem flex = ToFlexible(model, data);
  ASSERT_EQ(flex.observations.size(), 3u);
  for (int i = 1; i < 3; ++i) {
    EXPECT_EQ(flex.observations[i].second, 3);
    EXPECT_EQ(flex.observations[i].law, model.rating_law);
  }
  EXPECT_EQ(flex.observations[1].first, 2);
  EXPECT_EQ(flex.observations[2].value, -0.5);
  EXPECT_EQ(flex.model.prior_variances(0), 2.0);
  EXPECT_EQ(flex.model.prior_variances(3), 0.5);
  EXPECT_EQ(flex.model.embedding.matrix()(3, 3), 1.0);
  EXPECT_EQ(flex.model.embedding.matrix().col(3).sum(), 1.0);
  EXPECT_EQ(flex.model.embedding.matrix().row(3).sum(), 1.0);

  Dataset back = FromFlexible(flex.observations, model.num_entities());
  ASSERT_EQ(back.ratings.size(), 2u);
  ASSERT_EQ(back.comparisons.size(), 1u);
  EXPECT_EQ(back.ratings[0].entity, 2);
  EXPECT_EQ(back.comparisons[0].value, -1.0);
}

TEST(ToFlexibleTest, LossesAgreePointwise) {
  Rng rng(11);
  properties::InstanceOptions opt;
  opt.identity_embedding = false;
  auto inst = RandomInstance(rng, opt);
  FlexProblem flex = ToFlexible(inst.model, inst.data);
  const int D = inst.model.dim();
  for (int i = 0; i < 20; ++i) {
    Vector p = RandomVector(D + 1, 2.0, rng);
    double a = ScoraLoss(inst.model, inst.data, p.head(D), p(D));
    double b = FlexibleLoss(flex.model, flex.observations, p);
    EXPECT_LE(std::fabs(a - b), 1e-12 * std::max(1.0, std::fabs(a)));
  }
}

TEST(FlexibleLossTest, Examples) {
  FlexModel model(Embedding::Identity(3), Vector::Ones(3));
  EXPECT_EQ(FlexibleLoss(model, {}, Vector::Zero(3)), 0.0);
  // x_01^T beta = 0 with |beta|^2 = 2.
  Vector beta(3);
  beta << 1.0, 1.0, 0.0;
  std::vector<FlexObservation> obs = {{0, 1, 0.3, RootLaw::KAry(2)}};
  EXPECT_DOUBLE_EQ(FlexibleLoss(model, obs, beta), 1.0);
}

TEST(FlexibleLossTest, RejectsBadInput) {
  FlexModel model(Embedding::Identity(2), Vector::Ones(2));
  std::vector<FlexObservation> obs = {{0, 5, 0.3, RootLaw::KAry(2)}};
  EXPECT_THROW(FlexibleLoss(model, obs, Vector::Zero(2)), InputError);
  EXPECT_THROW(FlexibleLoss(model, {}, Vector::Zero(4)), InputError);
  EXPECT_THROW(FlexModel(Embedding::Identity(2), Vector::Ones(3)), InputError);
  EXPECT_THROW(FlexModel(Embedding::Identity(2), Vector::Zero(2)), InputError);
}

TEST(FlexibleGradientTest, NoObservationsGivesPrior) {
  Vector var(3);
  var << 1.0, 2.0, 4.0;
  FlexModel model(Embedding::Identity(3), var);
  Vector beta(3);
  beta << 2.0, 2.0, 2.0;
  Vector expected(3);
  expected << 2.0, 1.0, 0.5;
  EXPECT_TRUE(FlexibleLossGradient(model, {}, beta).isApprox(expected));
}

TEST(FlexibleGradientTest, MatchesFiniteDifferencesAndJointGradient) {
  Rng rng(5);
  properties::InstanceOptions opt;
  for (int trial = 0; trial < 10; ++trial) {
    opt.identity_embedding = trial % 2 == 0;
    auto inst = RandomInstance(rng, opt);
    FlexProblem flex = ToFlexible(inst.model, inst.data);
    const int D = inst.model.dim();
    Vector p = RandomVector(D + 1, 1.0, rng);
    Vector fg = FlexibleLossGradient(flex.model, flex.observations, p);
    auto loss = [&](const Vector& q) {
      return FlexibleLoss(flex.model, flex.observations, q);
    };
    EXPECT_LE(RelativeError(FiniteDifferenceGradient(loss, p), fg), 1e-6);
    // Chain rule: the last flexible coordinate is theta0 itself.
    ScoraGradient g = ScoraLossGradient(inst.model, inst.data, p.head(D), p(D));
    EXPECT_LE((fg.head(D) - g.beta).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_NEAR(fg(D), g.theta0, 1e-12);
  }
}

TEST(ScoresTest, Examples) {
  Vector beta(3);
  beta << 1.0, -2.0, 0.5;
  EXPECT_EQ(Scores(Embedding::Identity(3), beta), beta);
  Matrix ones = Matrix::Ones(1, 2);
  Vector two(1);
  two << 2.0;
  EXPECT_EQ(Scores(Embedding(ones), two), Vector::Constant(2, 2.0));
  EXPECT_THROW(Scores(Embedding(ones), beta), InputError);
}

TEST(ScoresTest, OneHotDecomposition) {
  Rng rng(3);
  OneHotEmbedding oh = BuildOneHotEmbedding(12, 5, rng);
  Vector beta = RandomVector(17, 1.0, rng);
  Vector theta = Scores(oh.embedding, beta);
  for (int a = 0; a < 12; ++a) {
    EXPECT_DOUBLE_EQ(theta(a), beta(a) + beta(12 + oh.clusters[a]));
  }
}

TEST(EmbeddingTest, RejectsDegenerateInput) {
  EXPECT_THROW(Embedding(Matrix(0, 3)), InputError);
  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 1) = std::nan("");
  EXPECT_THROW(Embedding{nan}, InputError);
  EXPECT_THROW(Embedding::Identity(0), InputError);
}

TEST(CoreModelPropertyTest, StrongConvexity) {
  auto rep = properties::CheckStrongConvexity(21, 100);
  EXPECT_TRUE(rep.passed()) << rep.violations << " violations, worst " << rep.worst;
}

TEST(CoreModelPropertyTest, TranslationOnlyMovesPrior) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = RandomInstance(rng);
    const int A = inst.model.num_entities();
    Vector beta = RandomVector(A, 1.0, rng);
    double theta0 = RandomVector(1, 1.0, rng)(0);
    double c = RandomVector(1, 3.0, rng)(0);
    auto likelihood = [&](const Vector& b, double t0) {
      return ScoraLoss(inst.model, inst.data, b, t0) -
             b.squaredNorm() / (2 * inst.model.prior_var_beta) -
             t0 * t0 / (2 * inst.model.prior_var_threshold);
    };
    Vector shifted = beta.array() + c;
    EXPECT_NEAR(likelihood(beta, theta0), likelihood(shifted, theta0 + c), 1e-10);
  }
}

TEST(CoreModelPropertyTest, ReductionExactness) {
  auto rep = properties::CheckReduction(31, 100);
  EXPECT_TRUE(rep.passed()) << rep.violations << " violations, worst " << rep.worst;
  EXPECT_LE(rep.worst, 1e-12);
}

TEST(CoreModelPropertyTest, Gradients) {
  auto rep = properties::CheckGradients(41, 50);
  EXPECT_TRUE(rep.passed()) << rep.violations << " violations, worst " << rep.worst;
}

}  // namespace
}  // namespace scora
