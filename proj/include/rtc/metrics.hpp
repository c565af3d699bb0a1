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

#ifndef RTC_METRICS_HPP
#define RTC_METRICS_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rtc/errors.hpp"

namespace rtc {

/// Probabilities of the four (label, prediction) outcomes of a binary
/// classifier. Used for both population and empirical matrices.
template <typename Scalar>
struct ConfusionMatrix {
  Scalar tn{0};
  Scalar fp{0};
  Scalar fn{0};
  Scalar tp{0};

  Scalar positive_rate() const { return tp + fn; }
  Scalar predicted_positive_rate() const { return tp + fp; }

  bool is_valid(Scalar tolerance = Scalar(1e-12)) const {
    for (Scalar cell : {tn, fp, fn, tp}) {
      if (!(cell >= Scalar(0) && cell <= Scalar(1))) return false;
    }
    return std::abs(tn + fp + fn + tp - Scalar(1)) <= tolerance;
  }

  /// Builds a matrix from integer outcome counts over `n` samples.
  static ConfusionMatrix from_counts(std::size_t tn_count, std::size_t fp_count,
                                     std::size_t fn_count, std::size_t tp_count) {
    const auto n = static_cast<Scalar>(tn_count + fp_count + fn_count + tp_count);
    return {static_cast<Scalar>(tn_count) / n, static_cast<Scalar>(fp_count) / n,
            static_cast<Scalar>(fn_count) / n, static_cast<Scalar>(tp_count) / n};
  }

  /// Largest absolute cell difference.
  Scalar sup_distance(const ConfusionMatrix& other) const {
    using std::abs;
    using std::max;
    return max(max(abs(tn - other.tn), abs(fp - other.fp)),
               max(abs(fn - other.fn), abs(tp - other.tp)));
  }

  bool operator==(const ConfusionMatrix&) const = default;
};

using ConfusionMatrixd = ConfusionMatrix<double>;

/// Selects one confusion-matrix measure. The registry is closed: every kind
/// below is checked against the coordinate-monotonicity contract in tests.
struct CmmSpec {
  enum class Kind {
    kAccuracy,
    kWeightedAccuracy,  // parameter: w in (0, 1)
    kPrecision,
    kRecall,
    kFBeta,  // parameter: beta > 0
    kMcc,
    kTpTnProduct,
    kTpPowThetaTn,  // parameter: theta > 0
  };

  Kind kind = Kind::kAccuracy;
  double parameter = 0.0;

  static CmmSpec accuracy() { return {Kind::kAccuracy, 0.0}; }
  static CmmSpec weighted_accuracy(double w) { return {Kind::kWeightedAccuracy, w}; }
  static CmmSpec precision() { return {Kind::kPrecision, 0.0}; }
  static CmmSpec recall() { return {Kind::kRecall, 0.0}; }
  static CmmSpec f_beta(double beta) { return {Kind::kFBeta, beta}; }
  static CmmSpec f1() { return f_beta(1.0); }
  static CmmSpec mcc() { return {Kind::kMcc, 0.0}; }
  static CmmSpec tp_tn_product() { return {Kind::kTpTnProduct, 0.0}; }
  static CmmSpec tp_pow_theta_tn(double theta) { return {Kind::kTpPowThetaTn, theta}; }

  /// Throws DomainError when the parameter is out of range for the kind.
  void validate() const;

  /// Text form accepted by parse_cmm, e.g. "f_beta:2" or "mcc".
  std::string to_string() const;

  bool operator==(const CmmSpec&) const = default;
};

/// Parses "accuracy", "weighted_accuracy:W", "precision", "recall",
/// "f_beta:B", "f1", "mcc", "tp_tn_product", "tp_pow_theta_tn:T".
CmmSpec parse_cmm(const std::string& text);

/// One representative of every registered kind, with typical parameters.
std::vector<CmmSpec> registered_cmms();

/// Evaluates M(C). Ratio measures (precision, recall, F-beta, MCC) return 0
/// when their denominator vanishes.
template <typename Scalar>
Scalar evaluate_cmm(const CmmSpec& spec, const ConfusionMatrix<Scalar>& c) {
  spec.validate();
  const Scalar zero(0);
  const auto ratio = [&](Scalar num, Scalar den) { return den > zero ? num / den : zero; };
  const auto param = static_cast<Scalar>(spec.parameter);
  switch (spec.kind) {
    case CmmSpec::Kind::kAccuracy:
      return c.tp + c.tn;
    case CmmSpec::Kind::kWeightedAccuracy:
      return (Scalar(1) - param) * c.tp + param * c.tn;
    case CmmSpec::Kind::kPrecision:
      return ratio(c.tp, c.tp + c.fp);
    case CmmSpec::Kind::kRecall:
      return ratio(c.tp, c.tp + c.fn);
    case CmmSpec::Kind::kFBeta: {
      const Scalar b2 = param * param;
      const Scalar weighted_tp = (Scalar(1) + b2) * c.tp;
      return ratio(weighted_tp, weighted_tp + c.fp + b2 * c.fn);
    }
    case CmmSpec::Kind::kMcc: {
      const Scalar den = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn);
      if (!(den > zero)) return zero;
      using std::sqrt;
      return (c.tp * c.tn - c.fp * c.fn) / sqrt(den);
    }
    case CmmSpec::Kind::kTpTnProduct:
      return c.tp * c.tn;
    case CmmSpec::Kind::kTpPowThetaTn: {
      using std::pow;
      return pow(c.tp, param) * c.tn;
    }
  }
  return zero;
}

/// Checks M(C) <= M(C') + 1e-12 where C' moves eps1 of mass from FP to TN
/// and eps2 from FN to TP.
template <typename Scalar>
bool check_cmm_monotonicity(const CmmSpec& spec, const ConfusionMatrix<Scalar>& c,
                            Scalar eps1, Scalar eps2) {
  if (!(eps1 >= Scalar(0) && eps1 <= c.fp)) {
    throw DomainError("check_cmm_monotonicity: eps1 must lie in [0, FP]");
  }
  if (!(eps2 >= Scalar(0) && eps2 <= c.fn)) {
    throw DomainError("check_cmm_monotonicity: eps2 must lie in [0, FN]");
  }
  const ConfusionMatrix<Scalar> corrected{c.tn + eps1, c.fp - eps1, c.fn - eps2, c.tp + eps2};
  return evaluate_cmm(spec, c) <= evaluate_cmm(spec, corrected) + Scalar(1e-12);
}

struct RocKnot {
  double fp_rate_x = 0.0;
  double max_tp = 0.0;
};

/// Empirical ROC of the threshold family. Knots sit at score-group
/// boundaries; between knots the curve is linear (stochastic acceptance of a
/// tied group), so `auroc` is the trapezoidal area.
struct RocCurve {
  std::vector<RocKnot> knots;
  double auroc = 0.0;
};

/// Requires equal lengths and both classes present, else throws
/// DegenerateInputError.
RocCurve roc_and_auroc(std::span<const double> scores, std::span<const int> labels);

}  // namespace rtc

#endif  // RTC_METRICS_HPP
