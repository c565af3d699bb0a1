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

#ifndef RTC_CLASSIFY_HPP
#define RTC_CLASSIFY_HPP

#include <span>
#include <string>
#include <vector>

#include "rtc/metrics.hpp"

namespace rtc {

/// Cut level `t` on regression values plus the probability `p` of accepting
/// a sample whose value equals `t` exactly.
struct StochasticThreshold {
  double t = 0.5;
  double p = 0.0;

  bool operator==(const StochasticThreshold&) const = default;
};

/// A regression value together with its label and the uniform draw used to
/// realize stochastic acceptance.
struct ScoredSample {
  double score = 0.0;
  int label = 0;
  double draw = 0.0;
};

/// Emits 1 iff score > t, or score == t and draw < p. Exact comparisons.
inline int classify_sample(const StochasticThreshold& th, double score, double draw) {
  return (score > th.t || (score == th.t && draw < th.p)) ? 1 : 0;
}

/// Linear segment of a regression function on [lo, hi): eta runs linearly
/// from `eta_lo` at x = lo to `eta_hi` at x = hi.
struct LinearPiece {
  double lo = 0.0;
  double hi = 1.0;
  double eta_lo = 0.0;
  double eta_hi = 0.0;

  bool is_constant() const { return eta_lo == eta_hi; }
  double at(double x) const;
};

/// Piecewise-linear regression function of the first covariate, written as
/// eta = r * zeta with sup zeta = 1 when `r` is the UCI degree. The covariate
/// law is either uniform on [0, 1] or a point mass at 0.
class RegressionFunction {
 public:
  enum class Law { kUniformUnit, kPointMassAtZero };

  /// Pieces must tile [0, 1] in order with values in [0, 1].
  static RegressionFunction piecewise(std::vector<LinearPiece> pieces, double r = 1.0);
  static RegressionFunction constant(double c);
  static RegressionFunction singleton(double eta0);
  /// 0.5 on [1/3, 2/3), 1 on [2/3, 1], 0 elsewhere.
  static RegressionFunction experiment1();
  /// r * (1 - x); UCI of degree r.
  static RegressionFunction linear_uci(double r);
  /// max{0, 1 - x / r}; same class balance as linear_uci, no UCI.
  static RegressionFunction triangle_nonuci(double r);

  Law law() const { return law_; }
  double uci_degree() const { return r_; }
  const std::vector<LinearPiece>& pieces() const { return pieces_; }

  /// Throws DomainError outside [0, 1] (or x != 0 for the point mass).
  double operator()(double x) const;

  /// Piece boundaries inside the domain.
  std::vector<double> knots() const;
  /// Values taken on constant pieces, where eta(X) has atoms.
  std::vector<double> atoms() const;
  double min_value() const;
  double max_value() const;
  /// E[eta(X)].
  double mean() const;

 private:
  RegressionFunction(Law law, std::vector<LinearPiece> pieces, double r);

  Law law_;
  std::vector<LinearPiece> pieces_;
  double r_;
};

/// Empirical confusion matrix of `th` applied to each sample's score/draw.
/// Throws DegenerateInputError on empty input.
ConfusionMatrixd empirical_confusion(const StochasticThreshold& th, std::span<const ScoredSample> samples);

/// Population confusion matrix of the RTC (t, p) applied to `eta` itself,
/// by exact integration over the regions eta < t, eta == t, eta > t.
ConfusionMatrixd population_confusion(const RegressionFunction& eta, const StochasticThreshold& th);

/// Fraction of scores with |score - t| <= eps.
double estimate_margin_probability(std::span<const double> scores, double t, double eps);

}  // namespace rtc

#endif  // RTC_CLASSIFY_HPP
