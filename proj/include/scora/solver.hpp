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

#ifndef SCORA_SOLVER_HPP_
#define SCORA_SOLVER_HPP_

// MAP estimation. The loss is strongly convex, so the minimizer is unique and
// L-BFGS started from the prior mode converges to it.

#include <Eigen/Dense>

#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "scora/core_model.hpp"
#include "scora/error.hpp"
#include "scora/lbfgs.hpp"
#include "scora/rootlaw.hpp"

namespace scora {

struct SolverConfig {
  double gradient_tolerance = 1e-8;
  int max_iterations = 1000;
  int history_size = 10;
  // Warm start. For the joint model this is (beta; theta0), length D + 1.
  std::optional<Vector> initial_point;
};

struct MapResult {
  Vector beta;
  double theta0 = 0.0;
  Vector scores;
  double gradient_norm = 0.0;
  int iterations = 0;
};

struct FlexMapResult {
  Vector beta;
  double gradient_norm = 0.0;
  int iterations = 0;
};

// The solver stopped before reaching the gradient tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, Vector best_point,
                      double gradient_norm, int iterations)
      : std::runtime_error(what),
        best_point_(std::move(best_point)),
        gradient_norm_(gradient_norm),
        iterations_(iterations) {}

  const Vector& best_point() const { return best_point_; }
  double gradient_norm() const { return gradient_norm_; }
  int iterations() const { return iterations_; }

 private:
  Vector best_point_;
  double gradient_norm_;
  int iterations_;
};

// Loss and gradient with observations on the same (ordered pair, law) merged
// into count * Phi(z) - (sum of values) * z. Comparisons (c, b, r) are folded
// onto (b, c, -r), which is exact because every root law is symmetric. The
// work per evaluation is O(D A + number of distinct pairs) regardless of how
// many duplicate observations the dataset holds.
class GbtObjective {
 public:
  static constexpr int kThreshold = -1;

  static GbtObjective FromScora(const ScoraModel& model, const Dataset& data) {
    model.Validate(data);
    GbtObjective obj;
    obj.x_ = model.embedding.matrix();
    obj.has_threshold_ = true;
    obj.inv_var_ = Vector::Constant(model.dim() + 1, 1.0 / model.prior_var_beta);
    obj.inv_var_(model.dim()) = 1.0 / model.prior_var_threshold;
    obj.laws_ = {model.comparison_law, model.rating_law};

    Accumulator acc;
    for (const auto& c : data.comparisons) {
      AddFolded(acc, c.first, c.second, 0, c.value);
    }
    for (const auto& r : data.ratings) {
      auto& slot = acc[{r.entity, kThreshold, 1}];
      slot.first += 1.0;
      slot.second += r.value;
    }
    obj.Flatten(acc);
    return obj;
  }

  static GbtObjective FromFlexible(const FlexModel& model,
                                   const std::vector<FlexObservation>& obs) {
    model.Validate(obs);
    GbtObjective obj;
    obj.x_ = model.embedding.matrix();
    obj.has_threshold_ = false;
    obj.inv_var_ = model.prior_variances.cwiseInverse();

    Accumulator acc;
    for (const auto& o : obs) {
      int law = 0;
      while (law < static_cast<int>(obj.laws_.size()) && !(obj.laws_[law] == o.law)) {
        ++law;
      }
      if (law == static_cast<int>(obj.laws_.size())) obj.laws_.push_back(o.law);
      AddFolded(acc, o.first, o.second, law, o.value);
    }
    obj.Flatten(acc);
    return obj;
  }

  int num_params() const { return static_cast<int>(inv_var_.size()); }
  std::size_t num_terms() const { return terms_.size(); }

  double operator()(const Vector& p, Vector& grad) const {
    const Eigen::Index D = x_.rows();
    const Vector theta = x_.transpose() * p.head(D);
    const double theta0 = has_threshold_ ? p(D) : 0.0;

    double loss = 0.5 * p.cwiseProduct(inv_var_).dot(p);
    grad = p.cwiseProduct(inv_var_);
    Vector score_grad = Vector::Zero(x_.cols());
    double threshold_grad = 0.0;
    for (const auto& t : terms_) {
      const bool rating = t.second == kThreshold;
      const double z = theta(t.first) - (rating ? theta0 : theta(t.second));
      const auto [phi, dphi] = laws_[t.law].cgf_and_prime(z);
      loss += t.count * phi - t.value_sum * z;
      const double w = t.count * dphi - t.value_sum;
      score_grad(t.first) += w;
      if (rating) {
        threshold_grad -= w;
      } else {
        score_grad(t.second) -= w;
      }
    }
    grad.head(D) += x_ * score_grad;
    if (has_threshold_) grad(D) += threshold_grad;
    return loss;
  }

 private:
  struct Term {
    int first;
    int second;
    int law;
    double count;
    double value_sum;
  };
  // (first, second, law) -> (count, sum of values); std::map keeps the term
  // order, hence the floating-point summation order, deterministic.
  using Accumulator = std::map<std::tuple<int, int, int>, std::pair<double, double>>;

  static void AddFolded(Accumulator& acc, int first, int second, int law,
                        double value) {
    if (first > second) {
      std::swap(first, second);
      value = -value;
    }
    auto& slot = acc[{first, second, law}];
    slot.first += 1.0;
    slot.second += value;
  }

  void Flatten(const Accumulator& acc) {
    terms_.reserve(acc.size());
    for (const auto& [key, sums] : acc) {
      terms_.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                        sums.first, sums.second});
    }
  }

  Matrix x_;
  Vector inv_var_;
  bool has_threshold_ = false;
  std::vector<RootLaw> laws_;
  std::vector<Term> terms_;
};

namespace detail {

inline LbfgsOptions ToLbfgsOptions(const SolverConfig& config) {
  if (!(config.gradient_tolerance > 0.0) || config.max_iterations < 1 ||
      config.history_size < 1) {
    throw InputError("solver config needs tolerance > 0, iterations >= 1, history >= 1");
  }
  LbfgsOptions options;
  options.gradient_tolerance = config.gradient_tolerance;
  options.max_iterations = config.max_iterations;
  options.history_size = config.history_size;
  return options;
}

inline std::string GradientText(double g) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", g);
  return buf;
}

inline LbfgsReport RunSolver(const GbtObjective& objective,
                             const SolverConfig& config) {
  Vector x0 = Vector::Zero(objective.num_params());
  if (config.initial_point) {
    if (config.initial_point->size() != objective.num_params()) {
      throw InputError("initial point has length " +
                       std::to_string(config.initial_point->size()) +
                       ", expected " + std::to_string(objective.num_params()));
    }
    x0 = *config.initial_point;
  }
  LbfgsReport report = MinimizeLbfgs(objective, std::move(x0), ToLbfgsOptions(config));
  if (report.status != LbfgsStatus::kConverged) {
    const char* why = report.status == LbfgsStatus::kMaxIterations
                          ? "iteration limit reached"
                          : "line search failed";
    throw NonConvergenceError(
        std::string("MAP solver did not converge: ") + why +
            " (|grad|_inf = " + GradientText(report.gradient_norm) + ")",
        report.x, report.gradient_norm, report.iterations);
  }
  return report;
}

}  // namespace detail

// (beta*, theta0*) = argmin of ScoraLoss.
inline MapResult SolveMap(const ScoraModel& model, const Dataset& data,
                          const SolverConfig& config = {}) {
  const GbtObjective objective = GbtObjective::FromScora(model, data);
  const LbfgsReport report = detail::RunSolver(objective, config);
  MapResult result;
  result.beta = report.x.head(model.dim());
  result.theta0 = report.x(model.dim());
  result.scores = Scores(model.embedding, result.beta);
  result.gradient_norm = report.gradient_norm;
  result.iterations = report.iterations;
  return result;
}

inline FlexMapResult SolveMapFlexible(const FlexModel& model,
                                      const std::vector<FlexObservation>& obs,
                                      const SolverConfig& config = {}) {
  const GbtObjective objective = GbtObjective::FromFlexible(model, obs);
  const LbfgsReport report = detail::RunSolver(objective, config);
  return {report.x, report.gradient_norm, report.iterations};
}

}  // namespace scora

#endif  // SCORA_SOLVER_HPP_
