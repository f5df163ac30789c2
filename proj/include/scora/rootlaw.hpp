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

#ifndef SCORA_ROOTLAW_HPP_
#define SCORA_ROOTLAW_HPP_

// Root laws of generalized Bradley-Terry observations.
//
// An observation r between two scores with difference theta has density
//
//   p(r | theta) = f(r) exp(theta r - Phi(theta)),
//
// where f is the root law and Phi(theta) = log E_f[exp(theta r)] is its
// cumulant generating function. Phi' and Phi'' are the mean and the variance
// of the tilted law. All supported laws are symmetric about zero.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "scora/error.hpp"

namespace scora {

// Largest absolute observation value a law can produce; +inf when unbounded.
struct SupportBound {
  double value = 0.0;

  bool finite() const { return std::isfinite(value); }
};

class RootLaw {
 public:
  enum class Kind { kKAry, kContinuousUniform, kGaussian };

  // Below this |theta| the continuous-uniform sampler falls back to U(-1, 1).
  static constexpr double kSamplerSmallTheta = 1e-6;
  // Below this |theta| the continuous-uniform CGF and its derivatives switch
  // to their Taylor series around zero.
  static constexpr double kSeriesTheta = 1e-2;

  // k equally spaced atoms on [-1, 1] with mass 1/k each.
  static RootLaw KAry(int k) {
    if (k < 2) throw InputError("k-ary root law needs k >= 2");
    RootLaw law;
    law.kind_ = Kind::kKAry;
    law.arity_ = k;
    return law;
  }

  // Uniform density on [-1, 1].
  static RootLaw ContinuousUniform() {
    RootLaw law;
    law.kind_ = Kind::kContinuousUniform;
    return law;
  }

  // Centered normal law with the given variance.
  static RootLaw Gaussian(double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance)) {
      throw InputError("gaussian root law needs a positive finite variance");
    }
    RootLaw law;
    law.kind_ = Kind::kGaussian;
    law.variance_ = variance;
    return law;
  }

  // Parses "kary:<k>", "uniform" or "gaussian:<variance>".
  static RootLaw Parse(std::string_view token) {
    auto colon = token.find(':');
    std::string_view head = token.substr(0, colon);
    std::string_view arg =
        colon == std::string_view::npos ? std::string_view{} : token.substr(colon + 1);
    if (head == "uniform" && colon == std::string_view::npos) {
      return ContinuousUniform();
    }
    if (head == "kary" && !arg.empty()) {
      int k = 0;
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), k);
      if (ec == std::errc{} && ptr == arg.data() + arg.size()) return KAry(k);
    }
    if (head == "gaussian" && !arg.empty()) {
      try {
        std::size_t used = 0;
        std::string s(arg);
        double v = std::stod(s, &used);
        if (used == s.size()) return Gaussian(v);
      } catch (const std::logic_error&) {
      }
    }
    throw InputError("unrecognized root law token '" + std::string(token) +
                     "' (expected kary:<k>, uniform or gaussian:<variance>)");
  }

  std::string ToToken() const {
    switch (kind_) {
      case Kind::kKAry:
        return "kary:" + std::to_string(arity_);
      case Kind::kContinuousUniform:
        return "uniform";
      case Kind::kGaussian: {
        std::ostringstream os;
        os.precision(17);
        os << "gaussian:" << variance_;
        return os.str();
      }
    }
    return {};
  }

  Kind kind() const { return kind_; }
  int arity() const { return arity_; }
  double variance() const { return variance_; }

  // Atom j of a k-ary law, exactly antisymmetric in j <-> k-1-j.
  double atom(int j) const {
    return static_cast<double>(2 * j - (arity_ - 1)) /
           static_cast<double>(arity_ - 1);
  }

  SupportBound support_bound() const {
    if (kind_ == Kind::kGaussian) {
      return {std::numeric_limits<double>::infinity()};
    }
    return {1.0};
  }

  // Phi(theta).
  double cgf(double theta) const {
    switch (kind_) {
      case Kind::kKAry:
        return KAryMoments(theta).cgf;
      case Kind::kContinuousUniform:
        return UniformCgf(theta);
      case Kind::kGaussian:
        return 0.5 * variance_ * theta * theta;
    }
    return 0.0;
  }

  // Phi'(theta), the mean of the tilted law.
  double cgf_prime(double theta) const {
    switch (kind_) {
      case Kind::kKAry:
        if (arity_ == 2) return std::tanh(theta);
        return KAryMoments(theta).mean;
      case Kind::kContinuousUniform:
        return UniformCgfPrime(theta);
      case Kind::kGaussian:
        return variance_ * theta;
    }
    return 0.0;
  }

  // Phi''(theta), the variance of the tilted law.
  double cgf_double_prime(double theta) const {
    switch (kind_) {
      case Kind::kKAry:
        if (arity_ == 2) {
          double t = std::tanh(theta);
          return (1.0 - t) * (1.0 + t);
        }
        return KAryMoments(theta).variance;
      case Kind::kContinuousUniform:
        return UniformCgfDoublePrime(theta);
      case Kind::kGaussian:
        return variance_;
    }
    return 0.0;
  }

  // (Phi(theta), Phi'(theta)) in one pass; the solver's inner loop.
  std::pair<double, double> cgf_and_prime(double theta) const {
    if (kind_ == Kind::kKAry) {
      if (arity_ == 2) return {LogCosh(theta), std::tanh(theta)};
      auto m = KAryMoments(theta);
      return {m.cgf, m.mean};
    }
    return {cgf(theta), cgf_prime(theta)};
  }

  // One draw from the law tilted by exp(theta r).
  template <class Urbg>
  double sample_tilted(double theta, Urbg& rng) const {
    switch (kind_) {
      case Kind::kKAry:
        return SampleKAry(theta, rng);
      case Kind::kContinuousUniform:
        return SampleUniform(theta, rng);
      case Kind::kGaussian: {
        std::normal_distribution<double> normal(variance_ * theta,
                                                std::sqrt(variance_));
        return normal(rng);
      }
    }
    return 0.0;
  }

  friend bool operator==(const RootLaw& a, const RootLaw& b) {
    return a.kind_ == b.kind_ && a.arity_ == b.arity_ &&
           a.variance_ == b.variance_;
  }

 private:
  RootLaw() = default;

  struct Moments {
    double cgf;
    double mean;
    double variance;
  };

  static double LogCosh(double theta) {
    double a = std::fabs(theta);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
  }

  // Log-mean-exp over the atoms, shifted by max_j theta r_j = |theta|.
  Moments KAryMoments(double theta) const {
    // Evaluate at |theta| and pair atoms +r/-r so the mean is exactly odd.
    const double a = std::fabs(theta);
    double z = 0.0, s1 = 0.0;
    for (int j = 0; j < arity_; ++j) z += std::exp(a * atom(j) - a);
    for (int j = 0; j < arity_ / 2; ++j) {
      double r = atom(arity_ - 1 - j);
      s1 += r * (std::exp(a * r - a) - std::exp(-a * r - a));
    }
    double mean = s1 / z;
    double var = 0.0;
    for (int j = 0; j < arity_; ++j) {
      double r = atom(j);
      double d = r - mean;
      var += std::exp(a * r - a) * d * d;
    }
    return {a + std::log(z / arity_), std::copysign(mean, theta), var / z};
  }

  // log(sinh(theta) / theta).
  static double UniformCgf(double theta) {
    double a = std::fabs(theta);
    if (a < kSeriesTheta) {
      double t2 = a * a;
      return t2 * (1.0 / 6.0 +
                   t2 * (-1.0 / 180.0 + t2 * (1.0 / 2835.0 - t2 / 37800.0)));
    }
    // sinh(a) = e^a (1 - e^{-2a}) / 2
    return a + std::log(-std::expm1(-2.0 * a)) - std::log(2.0 * a);
  }

  // coth(theta) - 1/theta.
  static double UniformCgfPrime(double theta) {
    double a = std::fabs(theta);
    double v;
    if (a < kSeriesTheta) {
      double t2 = a * a;
      v = a * (1.0 / 3.0 +
               t2 * (-1.0 / 45.0 + t2 * (2.0 / 945.0 - t2 / 4725.0)));
    } else {
      v = 1.0 / std::tanh(a) - 1.0 / a;
    }
    return std::copysign(v, theta);
  }

  // 1/theta^2 - 1/sinh^2(theta).
  static double UniformCgfDoublePrime(double theta) {
    double a = std::fabs(theta);
    if (a < kSeriesTheta) {
      double t2 = a * a;
      return 1.0 / 3.0 +
             t2 * (-1.0 / 15.0 + t2 * (2.0 / 189.0 - t2 / 675.0));
    }
    double e = std::exp(-2.0 * a);
    double inv_sinh = 2.0 * std::exp(-a) / (1.0 - e);
    return 1.0 / (a * a) - inv_sinh * inv_sinh;
  }

  template <class Urbg>
  double SampleKAry(double theta, Urbg& rng) const {
    const double shift = std::fabs(theta);
    double z = 0.0;
    for (int j = 0; j < arity_; ++j) z += std::exp(theta * atom(j) - shift);
    std::uniform_real_distribution<double> unif(0.0, z);
    double u = unif(rng);
    double acc = 0.0;
    for (int j = 0; j < arity_ - 1; ++j) {
      acc += std::exp(theta * atom(j) - shift);
      if (u < acc) return atom(j);
    }
    return atom(arity_ - 1);
  }

  // Inverse CDF of the tilted uniform, rewritten around the dominant endpoint
  // so that exp never overflows.
  template <class Urbg>
  static double SampleUniform(double theta, Urbg& rng) {
    if (std::fabs(theta) < kSamplerSmallTheta) {
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      return unif(rng);
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    double r;
    if (theta > 0.0) {
      r = 1.0 + std::log1p((1.0 - u) * std::expm1(-2.0 * theta)) / theta;
    } else {
      r = -1.0 + std::log1p(u * std::expm1(2.0 * theta)) / theta;
    }
    return std::clamp(r, -1.0, 1.0);
  }

  Kind kind_ = Kind::kContinuousUniform;
  int arity_ = 0;
  double variance_ = 0.0;
};

}  // namespace scora

#endif  // SCORA_ROOTLAW_HPP_
