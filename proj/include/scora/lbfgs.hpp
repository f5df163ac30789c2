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

#ifndef SCORA_LBFGS_HPP_
#define SCORA_LBFGS_HPP_

// Limited-memory BFGS with a strong Wolfe line search (bracketing + zoom with
// safeguarded cubic interpolation).
//
// Close to the optimum the decrease in f drops below the rounding error of f
// itself and the Armijo test becomes noise. Following Hager and Zhang, the
// line search then also accepts the derivative-based ("approximate Wolfe")
// version of sufficient decrease, which keeps the iteration converging down to
// gradient norms near machine precision.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "scora/error.hpp"

namespace scora {

struct LbfgsOptions {
  double gradient_tolerance = 1e-8;  // stop when |grad|_inf <= this
  int max_iterations = 1000;
  int history_size = 10;
  int max_linesearch = 60;
  double armijo = 1e-4;
  double curvature = 0.9;
};

enum class LbfgsStatus { kConverged, kMaxIterations, kLineSearchFailed };

struct LbfgsReport {
  LbfgsStatus status = LbfgsStatus::kConverged;
  Eigen::VectorXd x;       // best iterate (smallest gradient norm)
  double value = 0.0;
  double gradient_norm = 0.0;  // infinity norm at x
  int iterations = 0;
  int evaluations = 0;
};

namespace detail {

// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), or NaN.
inline double CubicMinimizer(double a, double fa, double da, double b,
                             double fb, double db) {
  double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  double disc = d1 * d1 - da * db;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  double d2 = std::copysign(std::sqrt(disc), b - a);
  return b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
}

}  // namespace detail

// fn(x, grad) must return f(x) and write the gradient into grad.
template <class Objective>
LbfgsReport MinimizeLbfgs(Objective&& fn, Eigen::VectorXd x0,
                          const LbfgsOptions& options) {
  using Eigen::VectorXd;
  if (!(options.gradient_tolerance > 0.0) || options.history_size < 1 ||
      options.max_iterations < 1) {
    throw InputError("invalid L-BFGS options");
  }
  const Eigen::Index n = x0.size();

  LbfgsReport report;
  auto evaluate = [&](const VectorXd& x, VectorXd& g) {
    ++report.evaluations;
    double f = fn(x, g);
    if (!std::isfinite(f) || !g.allFinite()) {
      throw NumericalError("objective or gradient is not finite");
    }
    return f;
  };

  VectorXd x = std::move(x0);
  VectorXd g(n);
  double f = evaluate(x, g);
  double gnorm = n == 0 ? 0.0 : g.lpNorm<Eigen::Infinity>();

  report.x = x;
  report.value = f;
  report.gradient_norm = gnorm;
  auto remember_best = [&](const VectorXd& xc, double fc, double gc) {
    if (gc < report.gradient_norm) {
      report.x = xc;
      report.value = fc;
      report.gradient_norm = gc;
    }
  };

  std::deque<VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha_buf(options.history_size);

  VectorXd d(n), x_new(n), g_new(n);
  int iter = 0;
  while (gnorm > options.gradient_tolerance) {
    if (iter >= options.max_iterations) {
      report.status = LbfgsStatus::kMaxIterations;
      report.iterations = iter;
      return report;
    }

    // Two-loop recursion: d = -H g.
    d = -g;
    const int m = static_cast<int>(s_hist.size());
    for (int i = m - 1; i >= 0; --i) {
      alpha_buf[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= alpha_buf[i] * y_hist[i];
    }
    if (m > 0) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (int i = 0; i < m; ++i) {
      double beta = rho_hist[i] * y_hist[i].dot(d);
      d += (alpha_buf[i] - beta) * s_hist[i];
    }

    double dphi0 = g.dot(d);
    if (!(dphi0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      dphi0 = -g.squaredNorm();
    }

    const double f0 = f;
    const double noise = 1e-10 * (1.0 + std::fabs(f0));
    double f_new = f0, dphi = dphi0;
    auto eval_at = [&](double step) {
      x_new = x + step * d;
      f_new = evaluate(x_new, g_new);
      dphi = g_new.dot(d);
    };
    // Inside the noise band f carries no information, so only the slope
    // condition of the approximate Wolfe test is used there.
    auto sufficient = [&](double step) {
      if (f_new < f0 - noise) return f_new <= f0 + options.armijo * step * dphi0;
      return f_new <= f0 + noise &&
             dphi <= (2.0 * options.armijo - 1.0) * dphi0;
    };
    auto curvature_ok = [&] {
      return std::fabs(dphi) <= -options.curvature * dphi0;
    };

    bool found = false;
    int trials = 0;
    auto zoom = [&](double lo, double f_lo, double d_lo, double hi,
                    double f_hi, double d_hi) {
      while (trials++ < options.max_linesearch) {
        double width = hi - lo;
        double step = detail::CubicMinimizer(lo, f_lo, d_lo, hi, f_hi, d_hi);
        double lower = std::min(lo, hi) + 0.1 * std::fabs(width);
        double upper = std::max(lo, hi) - 0.1 * std::fabs(width);
        if (!std::isfinite(step) || step < lower || step > upper) {
          step = lo + 0.5 * width;
        }
        eval_at(step);
        if (!sufficient(step) || f_new > f_lo + noise) {
          hi = step;
          f_hi = f_new;
          d_hi = dphi;
        } else {
          if (curvature_ok()) return true;
          if (dphi * (hi - lo) >= 0.0) {
            hi = lo;
            f_hi = f_lo;
            d_hi = d_lo;
          }
          lo = step;
          f_lo = f_new;
          d_lo = dphi;
        }
        if (std::fabs(hi - lo) <= 1e-16 * std::max(1.0, std::fabs(lo))) break;
      }
      return false;
    };

    double step = (m == 0 && iter == 0) ? std::min(1.0, 1.0 / d.norm()) : 1.0;
    double prev_step = 0.0, f_prev = f0, d_prev = dphi0;
    while (trials++ < options.max_linesearch) {
      eval_at(step);
      if (!sufficient(step) || (prev_step > 0.0 && f_new > f_prev + noise)) {
        found = zoom(prev_step, f_prev, d_prev, step, f_new, dphi);
        break;
      }
      if (curvature_ok()) {
        found = true;
        break;
      }
      if (dphi >= 0.0) {
        found = zoom(step, f_new, dphi, prev_step, f_prev, d_prev);
        break;
      }
      prev_step = step;
      f_prev = f_new;
      d_prev = dphi;
      step *= 2.0;
    }

    if (!found) {
      if (m > 0) {
        // Retry from steepest descent before giving up.
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        continue;
      }
      report.status = LbfgsStatus::kLineSearchFailed;
      report.iterations = iter;
      return report;
    }

    VectorXd s = x_new - x;
    VectorXd y = g_new - g;
    double sy = s.dot(y);
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    gnorm = g.lpNorm<Eigen::Infinity>();
    ++iter;
    remember_best(x, f, gnorm);

    if (sy > 1e-300) {
      if (static_cast<int>(s_hist.size()) == options.history_size) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      rho_hist.push_back(1.0 / sy);
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
    }
  }

  report.status = LbfgsStatus::kConverged;
  report.x = x;
  report.value = f;
  report.gradient_norm = gnorm;
  report.iterations = iter;
  return report;
}

}  // namespace scora

#endif  // SCORA_LBFGS_HPP_
