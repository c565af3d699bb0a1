// Copyright 2026 The rtc Authors
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

#ifndef RTC_BOUNDS_HPP
#define RTC_BOUNDS_HPP

#include <cstddef>
#include <optional>

#include "rtc/metrics.hpp"

namespace rtc {

/// Constants entering the finite-sample bounds.
struct BoundInputs {
  std::size_t n = 1;
  std::size_t k = 1;
  double r = 1.0;             // UCI degree
  double alpha = 1.0;         // Hoelder exponent of zeta
  double lipschitz = 1.0;     // Hoelder constant L of zeta
  int d = 1;                  // covariate dimension
  double p_star = 1.0;        // P_X(B_eps(x)) >= p_star * eps^d ...
  double epsilon_star = 1.0;  // ... for eps <= epsilon_star
  double delta = 0.05;
  double margin_c = 1.0;
  double margin_beta = 1.0;
  double lipschitz_m = 1.0;  // Lipschitz constant of the metric
  /// Replaces the Euclidean shattering bound (e.g. for manifold data).
  std::optional<double> shattering_override;

  /// DomainError on non-positive constants, delta outside (0, 1),
  /// alpha outside (0, 1] or k outside [1, n].
  void validate() const;
};

/// 2 n^{d+1} + 2: shattering coefficient of Euclidean balls.
double shattering_bound(std::size_t n, int d);

/// (2 / eps)^d: covering number of the unit cube.
double covering_bound(double eps, int d);

struct UniformErrorBound {
  double value = 0.0;
  double bias_term = 0.0;
  double variance_term = 0.0;  // (2 / 3k) log(2 S / delta)
  double deviation_term = 0.0; // sqrt((2r / k) log(2 S / delta))
  double shattering = 0.0;
  /// N((2k / (p_star n))^{1/d}) e^{-k/4} + delta.
  double failure_probability = 0.0;
};

/// High-probability bound on sup |eta - knn estimate|. Throws RegimeError
/// unless k / n <= p_star * epsilon_star^d / 2.
UniformErrorBound uniform_error_bound(const BoundInputs& in);

/// sqrt((8 / n) log(32 (2n + 1) / delta)): uniform deviation of empirical
/// from population confusion matrices over all thresholds.
double estimation_error_bound(std::size_t n, double delta);

/// L_M (C sup_err^beta + 2 estimation_error_bound(n, delta)).
double regret_bound(const BoundInputs& in, double sup_err);

/// Lipschitz constant of the metric on confusion matrices whose positive
/// rate is at least half of `positive_rate`. Supported: accuracy,
/// weighted accuracy, recall, F-beta; other kinds throw UnsupportedSpecError.
double cmm_lipschitz_constant(const CmmSpec& spec, double positive_rate);

}  // namespace rtc

#endif  // RTC_BOUNDS_HPP
