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

#ifndef SCORA_METRICS_HPP_
#define SCORA_METRICS_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "scora/error.hpp"

namespace scora {

namespace detail {

inline void CheckScorePair(const Eigen::VectorXd& estimated,
                           const Eigen::VectorXd& truth) {
  if (estimated.size() != truth.size()) {
    throw InputError("score vectors have different lengths");
  }
  if (estimated.size() < 2) throw InputError("need at least two scores");
  if (!estimated.allFinite() || !truth.allFinite()) {
    throw InputError("score vectors must be finite");
  }
}

}  // namespace detail

// Centered Pearson correlation.
inline double PearsonCorr(const Eigen::VectorXd& estimated,
                          const Eigen::VectorXd& truth) {
  detail::CheckScorePair(estimated, truth);
  const Eigen::ArrayXd e = estimated.array() - estimated.mean();
  const Eigen::ArrayXd t = truth.array() - truth.mean();
  const double see = (e * e).sum();
  const double stt = (t * t).sum();
  if (!(see > 0.0) || !(stt > 0.0)) {
    throw UndefinedMetricError("correlation of a constant vector");
  }
  return std::clamp((e * t).sum() / std::sqrt(see * stt), -1.0, 1.0);
}

// Uncentered correlation with weights exp(truth_i), which puts almost all the
// weight on the top entities:
//
//   sum w e t / (sqrt(sum w e^2) sqrt(sum w t^2)),   w = exp(t).
//
// The value does not change when all weights are scaled by the same factor,
// so the weights are computed as exp(t - max t) to avoid overflow.
inline double WeightedCorrExp(const Eigen::VectorXd& estimated,
                              const Eigen::VectorXd& truth) {
  detail::CheckScorePair(estimated, truth);
  const Eigen::ArrayXd w = (truth.array() - truth.maxCoeff()).exp();
  const Eigen::ArrayXd e = estimated.array();
  const Eigen::ArrayXd t = truth.array();
  const double see = (w * e * e).sum();
  const double stt = (w * t * t).sum();
  if (!(see > 0.0) || !(stt > 0.0)) {
    throw UndefinedMetricError("weighted correlation of a zero vector");
  }
  return std::clamp((w * e * t).sum() / (std::sqrt(see) * std::sqrt(stt)),
                    -1.0, 1.0);
}

}  // namespace scora

#endif  // SCORA_METRICS_HPP_
