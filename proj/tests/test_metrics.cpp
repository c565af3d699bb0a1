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

#include "rtc/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rtc/errors.hpp"

namespace rtc {
namespace {

ConfusionMatrixd cm(double tn, double fp, double fn, double tp) { return {tn, fp, fn, tp}; }

// Independent re-statement of each metric, used as the oracle below.
double oracle(const CmmSpec& s, const ConfusionMatrixd& c) {
  const double tn = c.tn, fp = c.fp, fn = c.fn, tp = c.tp;
  const auto safe = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };
  switch (s.kind) {
    case CmmSpec::Kind::kAccuracy:
      return tp + tn;
    case CmmSpec::Kind::kWeightedAccuracy:
      return (1.0 - s.parameter) * tp + s.parameter * tn;
    case CmmSpec::Kind::kPrecision:
      return safe(tp, tp + fp);
    case CmmSpec::Kind::kRecall:
      return safe(tp, tp + fn);
    case CmmSpec::Kind::kFBeta: {
      const double b2 = s.parameter * s.parameter;
      return safe((1 + b2) * tp, (1 + b2) * tp + b2 * fn + fp);
    }
    case CmmSpec::Kind::kMcc: {
      const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
      return den == 0.0 ? 0.0 : (tp * tn - fp * fn) / std::sqrt(den);
    }
    case CmmSpec::Kind::kTpTnProduct:
      return tp * tn;
    case CmmSpec::Kind::kTpPowThetaTn:
      return std::pow(tp, s.parameter) * tn;
  }
  return NAN;
}

ConfusionMatrixd random_matrix(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  double a = e(rng), b = e(rng), c = e(rng), d = e(rng);
  const double s = a + b + c + d;
  return cm(a / s, b / s, c / s, d / s);
}

TEST(ConfusionMatrix, FromCountsSumsToOne) {
  const auto c = ConfusionMatrixd::from_counts(3, 1, 2, 4);
  EXPECT_DOUBLE_EQ(c.tn, 0.3);
  EXPECT_DOUBLE_EQ(c.tp, 0.4);
  EXPECT_TRUE(c.is_valid());
  EXPECT_DOUBLE_EQ(c.positive_rate(), 0.6);
  EXPECT_DOUBLE_EQ(c.predicted_positive_rate(), 0.5);
}

TEST(ConfusionMatrix, InvalidDetected) {
  EXPECT_FALSE(cm(0.5, 0.5, 0.5, 0.0).is_valid());
  EXPECT_FALSE(cm(-0.1, 0.6, 0.3, 0.2).is_valid());
}

TEST(ConfusionMatrix, SupDistance) {
  EXPECT_DOUBLE_EQ(cm(0.5, 0, 0, 0.5).sup_distance(cm(0.4, 0.1, 0, 0.5)), 0.1);
}

TEST(EvaluateCmm, PerfectAccuracy) { EXPECT_DOUBLE_EQ(evaluate_cmm(CmmSpec::accuracy(), cm(0.5, 0, 0, 0.5)), 1.0); }

TEST(EvaluateCmm, TpTnProductStochasticOptimum) {
  EXPECT_NEAR(evaluate_cmm(CmmSpec::tp_tn_product(), cm(5.0 / 12, 1.0 / 12, 1.0 / 12, 5.0 / 12)), 25.0 / 144, 1e-15);
}

TEST(EvaluateCmm, F1Example) {
  EXPECT_NEAR(evaluate_cmm(CmmSpec::f1(), cm(0.90, 0.04, 0.02, 0.04)), 0.08 / 0.14, 1e-12);
}

TEST(EvaluateCmm, ZeroDenominatorsGiveZero) {
  const auto all_negative = cm(0.7, 0.0, 0.3, 0.0);
  for (const auto& s : {CmmSpec::precision(), CmmSpec::recall(), CmmSpec::f1(), CmmSpec::mcc()}) {
    EXPECT_EQ(evaluate_cmm(s, all_negative), 0.0) << s.to_string();
  }
  EXPECT_EQ(evaluate_cmm(CmmSpec::recall(), cm(0.6, 0.4, 0.0, 0.0)), 0.0);
}

TEST(EvaluateCmm, MatchesOracleOnRandomMatrices) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto c = random_matrix(rng);
    for (const auto& s : registered_cmms()) EXPECT_NEAR(evaluate_cmm(s, c), oracle(s, c), 1e-12) << s.to_string();
  }
}

TEST(EvaluateCmm, AccuracyIsExactlyTpPlusTn) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_matrix(rng);
    EXPECT_EQ(evaluate_cmm(CmmSpec::accuracy(), c), c.tp + c.tn);
  }
}

TEST(EvaluateCmm, RepeatCallsBitIdentical) {
  std::mt19937_64 rng(9);
  const auto c = random_matrix(rng);
  for (const auto& s : registered_cmms()) EXPECT_EQ(evaluate_cmm(s, c), evaluate_cmm(s, c));
}

TEST(EvaluateCmm, InvalidParametersThrow) {
  EXPECT_THROW(evaluate_cmm(CmmSpec::weighted_accuracy(1.5), cm(0.5, 0, 0, 0.5)), DomainError);
  EXPECT_THROW(evaluate_cmm(CmmSpec::f_beta(0.0), cm(0.5, 0, 0, 0.5)), DomainError);
  EXPECT_THROW(evaluate_cmm(CmmSpec::tp_pow_theta_tn(-1.0), cm(0.5, 0, 0, 0.5)), DomainError);
}

TEST(EvaluateCmm, FloatInstantiation) {
  const ConfusionMatrix<float> c{0.25f, 0.25f, 0.25f, 0.25f};
  EXPECT_FLOAT_EQ(evaluate_cmm(CmmSpec::accuracy(), c), 0.5f);
}

TEST(ParseCmm, RoundTripsRegisteredMetrics) {
  for (const auto& s : registered_cmms()) EXPECT_EQ(parse_cmm(s.to_string()), s) << s.to_string();
  EXPECT_EQ(parse_cmm("f1"), CmmSpec::f1());
  EXPECT_THROW(parse_cmm("auprc"), DomainError);
  EXPECT_THROW(parse_cmm("f_beta:abc"), DomainError);
}

TEST(Monotonicity, Examples) {
  const auto c = cm(0.2, 0.3, 0.1, 0.4);
  EXPECT_TRUE(check_cmm_monotonicity(CmmSpec::recall(), c, c.fp, c.fn));
  EXPECT_TRUE(check_cmm_monotonicity(CmmSpec::tp_pow_theta_tn(1.0), cm(0.3, 0.2, 0.2, 0.3), 0.1, 0.1));
  EXPECT_THROW(check_cmm_monotonicity(CmmSpec::recall(), c, 0.31, 0.0), DomainError);
  EXPECT_THROW(check_cmm_monotonicity(CmmSpec::recall(), c, 0.0, -0.01), DomainError);
}

TEST(Monotonicity, MccRandomSweep) {
  std::mt19937_64 rng(200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_matrix(rng);
    EXPECT_TRUE(check_cmm_monotonicity(CmmSpec::mcc(), c, u(rng) * c.fp, u(rng) * c.fn));
  }
}

TEST(Monotonicity, EveryRegisteredMetric) {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : registered_cmms()) {
    for (int i = 0; i < 1000; ++i) {
      const auto c = random_matrix(rng);
      ASSERT_TRUE(check_cmm_monotonicity(s, c, u(rng) * c.fp, u(rng) * c.fn)) << s.to_string();
    }
  }
}

TEST(Roc, PerfectAndInvertedSeparation) {
  const std::vector<double> s{0.9, 0.1};
  EXPECT_DOUBLE_EQ(roc_and_auroc(s, std::vector<int>{1, 0}).auroc, 1.0);
  EXPECT_DOUBLE_EQ(roc_and_auroc(s, std::vector<int>{0, 1}).auroc, 0.0);
}

TEST(Roc, TiedScores) {
  const std::vector<double> s{0.8, 0.8, 0.2, 0.2};
  EXPECT_DOUBLE_EQ(roc_and_auroc(s, std::vector<int>{1, 0, 1, 0}).auroc, 0.5);
}

TEST(Roc, SingleClassRejected) {
  const std::vector<double> s{0.1, 0.2};
  EXPECT_THROW(roc_and_auroc(s, std::vector<int>{1, 1}), DegenerateInputError);
  EXPECT_THROW(roc_and_auroc(std::vector<double>{}, std::vector<int>{}), DegenerateInputError);
}

// Mann-Whitney statistic with half credit for ties.
double pairwise_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
  }
  return wins / pairs;
}

TEST(Roc, KnotsMonotoneAndAreaMatchesPairwiseCount) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> level(0, 9), bit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(30);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = level(rng) / 9.0;
      y[i] = bit(rng);
    }
    y[0] = 0;
    y[1] = 1;
    const auto roc = roc_and_auroc(s, y);
    for (std::size_t i = 1; i < roc.knots.size(); ++i) {
      EXPECT_GE(roc.knots[i].max_tp, roc.knots[i - 1].max_tp);
      EXPECT_GE(roc.knots[i].fp_rate_x, roc.knots[i - 1].fp_rate_x);
    }
    EXPECT_GE(roc.auroc, 0.0);
    EXPECT_LE(roc.auroc, 1.0);
    EXPECT_NEAR(roc.auroc, pairwise_auc(s, y), 1e-12);
  }
}

}  // namespace
}  // namespace rtc
