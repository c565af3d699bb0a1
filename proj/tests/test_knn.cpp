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

#include "rtc/knn.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

#include "rtc/bounds.hpp"
#include "rtc/errors.hpp"
#include "rtc/synth.hpp"

namespace rtc {
namespace {

Eigen::MatrixXd column(const std::vector<double>& xs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = xs[i];
  return m;
}

Eigen::VectorXd point(double x) { return Eigen::VectorXd::Constant(1, x); }

// Plain O(n log n) reference: order rows by (distance, covariates, index).
double reference_predict(const Eigen::MatrixXd& x, const std::vector<int>& y, std::size_t k,
                         const Eigen::VectorXd& q) {
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto key = [&](std::size_t i) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < x.cols(); ++c) row.push_back(x(static_cast<Eigen::Index>(i), c));
    return std::make_tuple((x.row(static_cast<Eigen::Index>(i)).transpose() - q).squaredNorm(), row, i);
  };
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += y[idx[j]];
  return sum / static_cast<double>(k);
}

TEST(KnnPredict, Examples) {
  const auto x = column({0.0, 0.5, 1.0});
  const std::vector<int> y{0, 1, 1};
  EXPECT_DOUBLE_EQ(KnnModeld(x, y, 1).predict(point(0.4)), 1.0);
  const KnnModeld all(x, y, 3);
  for (double q : {0.0, 0.3, 0.9, 5.0}) EXPECT_DOUBLE_EQ(all.predict(point(q)), 2.0 / 3);
}

TEST(KnnPredict, DistanceTiesResolvedByCanonicalOrder) {
  // 0.25 and 0.75 are equidistant from 0.5; the lower covariate wins.
  const KnnModeld m(column({0.75, 0.25}), std::vector<int>{1, 0}, 1);
  EXPECT_EQ(m.predict(point(0.5)), 0.0);
  // Duplicate covariates: the earlier original index wins.
  const KnnModeld d(column({0.3, 0.3}), std::vector<int>{1, 0}, 1);
  EXPECT_EQ(d.predict(point(0.3)), 1.0);
}

TEST(KnnModel, Errors) {
  const auto x = column({0.1, 0.2});
  EXPECT_THROW(KnnModeld(x, std::vector<int>{0}, 1), ShapeError);
  EXPECT_THROW(KnnModeld(x, std::vector<int>{0, 1}, 0), DomainError);
  EXPECT_THROW(KnnModeld(x, std::vector<int>{0, 1}, 3), DomainError);
  EXPECT_THROW(KnnModeld(x, std::vector<int>{0, 2}, 1), SchemaError);
  EXPECT_THROW(KnnModeld(Eigen::MatrixXd(0, 1), std::vector<int>{}, 1), DegenerateInputError);
  const KnnModeld m(x, std::vector<int>{0, 1}, 1);
  EXPECT_THROW(m.predict(Eigen::VectorXd::Zero(2)), ShapeError);
}

TEST(KnnPredict, OneDimensionalFastPathMatchesReference) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 60), bit(0, 1), grid(0, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = size(rng);
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<int> ys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      xs[static_cast<std::size_t>(i)] = grid(rng) / 12.0;  // many duplicates and exact midpoints
      ys[static_cast<std::size_t>(i)] = bit(rng);
    }
    const auto x = column(xs);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(n))(rng);
    const KnnModeld m(x, ys, k);
    for (int qi = -2; qi <= 26; ++qi) {
      const auto q = point(qi / 24.0);
      ASSERT_EQ(m.predict(q), reference_predict(x, ys, k, q)) << "trial " << trial << " q=" << q(0);
    }
  }
}

TEST(KnnPredict, MultiDimensionalMatchesReference) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> bit(0, 1), grid(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 30;
    Eigen::MatrixXd x(n, 2);
    std::vector<int> ys(n);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = grid(rng) / 4.0;
      x(i, 1) = grid(rng) / 4.0;
      ys[static_cast<std::size_t>(i)] = bit(rng);
    }
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    const KnnModeld m(x, ys, k);
    Eigen::VectorXd q(2);
    q << grid(rng) / 4.0 + 0.125, grid(rng) / 4.0;
    ASSERT_EQ(m.predict(q), reference_predict(x, ys, k, q));
  }
}

TEST(KnnPredict, PermutationInvariance) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> bit(0, 1), grid(0, 20);
  std::vector<double> xs(80);
  std::vector<int> ys(80);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = grid(rng) / 20.0;
    ys[i] = bit(rng);
  }
  // Rows sharing a covariate must also share a label for the prediction
  // to be independent of the original order.
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = static_cast<int>(std::lround(xs[i] * 20)) % 3 == 0;
  const KnnModeld base(column(xs), ys, 7);
  std::vector<std::size_t> perm(xs.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (int t = 0; t < 20; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> px;
    std::vector<int> py;
    for (auto i : perm) {
      px.push_back(xs[i]);
      py.push_back(ys[i]);
    }
    const KnnModeld shuffled(column(px), py, 7);
    for (int q = 0; q <= 40; ++q) EXPECT_EQ(shuffled.predict(point(q / 40.0)), base.predict(point(q / 40.0)));
  }
}

TEST(KnnPredict, RangeAndKEqualsN) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(50);
  std::vector<int> ys(50);
  int positives = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    xs[i] = u(rng);
    ys[i] = u(rng) < 0.3;
    positives += ys[i];
  }
  const KnnModeld all(column(xs), ys, 50);
  const KnnModeld few(column(xs), ys, 5);
  for (int q = 0; q <= 100; ++q) {
    EXPECT_DOUBLE_EQ(all.predict(point(q / 100.0)), positives / 50.0);
    const double v = few.predict(point(q / 100.0));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(KnnModel, NeighborLabelsPrefixesMatchPredictions) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(40, 2);
  std::vector<int> ys(40);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = u(rng);
    x(i, 1) = u(rng);
    ys[static_cast<std::size_t>(i)] = u(rng) < 0.5;
  }
  Eigen::VectorXd q(2);
  q << 0.4, 0.6;
  const KnnModeld big(x, ys, 40);
  const auto labels = big.neighbor_labels(q, 40);
  int sum = 0;
  for (std::size_t k = 1; k <= 40; ++k) {
    sum += labels[k - 1];
    EXPECT_DOUBLE_EQ(KnnModeld(x, ys, k).predict(q), sum / static_cast<double>(k));
  }
}

TEST(KnnModel, FloatScalar) {
  Eigen::MatrixXf x(3, 1);
  x << 0.0f, 0.5f, 1.0f;
  const KnnModel<float> m(x, std::vector<int>{0, 1, 1}, 1);
  EXPECT_FLOAT_EQ(m.predict(Eigen::VectorXf::Constant(1, 0.4f)), 1.0f);
}

TEST(SelectK, Examples) {
  EXPECT_EQ(select_k(KSelectionRule::named("exp2", 0.01), 10000), 2154u);
  EXPECT_EQ(select_k(KSelectionRule::named("exp1"), 100), 21u);
  EXPECT_EQ(select_k(KSelectionRule::named("exp1"), 1000), 100u);
  for (std::size_t n : {1u, 7u, 100u, 12345u}) EXPECT_EQ(select_k(KSelectionRule::named("extreme", 0.5), n), n);
  const double n = 1000.0;
  EXPECT_EQ(select_k(KSelectionRule::named("balanced"), 1000),
            static_cast<std::size_t>(std::round(std::pow(n, 2.0 / 3) * std::cbrt(std::log(n)))));
  EXPECT_EQ(select_k(KSelectionRule::named("uci", 0.1), 1000),
            static_cast<std::size_t>(std::round(std::pow(n, 2.0 / 3) * std::cbrt(std::log(n)) * std::cbrt(10.0))));
}

TEST(SelectK, ClampedToRange) {
  EXPECT_EQ(select_k(KSelectionRule::named("uci", 0.001), 10), 10u);
  EXPECT_EQ(select_k(KSelectionRule::named("exp1"), 1), 1u);
  EXPECT_THROW(KSelectionRule::named("nope"), DomainError);
  EXPECT_THROW(KSelectionRule::named("uci", 0.0), DomainError);
  for (std::size_t n = 1; n < 3000; n += 37) {
    const auto k = select_k(KSelectionRule::named("uci", 0.05), n);
    EXPECT_GE(k, 1u);
    EXPECT_LE(k, n);
  }
}

TEST(Errors, ZeroLabelsExamples) {
  const auto x = column({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
  const std::vector<int> zeros(6, 0);
  const KnnModeld m(x, zeros, 3);
  EXPECT_EQ(uniform_error(m, RegressionFunction::constant(0.0), 1000), 0.0);
  EXPECT_EQ(average_error(m, RegressionFunction::constant(0.0), 1000), 0.0);
  EXPECT_DOUBLE_EQ(uniform_error(m, RegressionFunction::triangle_nonuci(0.01), 10000), 1.0);
  EXPECT_NEAR(average_error(m, RegressionFunction::constant(0.3), 1000), 0.3, 1e-12);
  EXPECT_NEAR(average_error(m, RegressionFunction::triangle_nonuci(0.01), 10000), 0.005, 1e-4);
}

TEST(Errors, IdenticalModelAndEta) {
  // Labels that equal a 0/1-valued eta exactly.
  const auto x = column({0.1, 0.2, 0.3, 0.7, 0.8, 0.9});
  const KnnModeld m(x, std::vector<int>{0, 0, 0, 1, 1, 1}, 1);
  const auto eta = RegressionFunction::piecewise({{0.0, 0.5, 0.0, 0.0}, {0.5, 1.0, 1.0, 1.0}});
  EXPECT_EQ(average_error(m, eta, 1000), 0.0);
  EXPECT_EQ(uniform_error(m, eta, 1000), 0.0);
}

TEST(Errors, UniformDominatesAverage) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto problem = SyntheticProblem::exp2_nonuci(0.1);
    const auto ds = generate(problem, 300, rng());
    const KnnModeld m(ds.covariates, ds.labels, 20);
    EXPECT_GE(uniform_error(m, problem.eta, 2000), average_error(m, problem.eta, 2000));
  }
}

TEST(Errors, GridContainsKnots) {
  const auto xs = error_grid(RegressionFunction::triangle_nonuci(0.013), 11);
  EXPECT_TRUE(std::find(xs.begin(), xs.end(), 0.013) != xs.end());
  EXPECT_TRUE(std::is_sorted(xs.begin(), xs.end()));
  EXPECT_THROW(error_grid(RegressionFunction::experiment1(), 1), DomainError);
}

TEST(Errors, MultiDimensionalUnsupported) {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0, 1, 1;
  const KnnModeld m(x, std::vector<int>{0, 1}, 1);
  EXPECT_THROW(uniform_error(m, RegressionFunction::constant(0.5), 10), UnsupportedSpecError);
}

TEST(Experiment2, LinearUciErrorBelowBound) {
  const double r = 0.01;
  const auto problem = SyntheticProblem::exp2_uci(r);
  const auto ds = generate(problem, 10000, 42);
  const std::size_t k = select_k(KSelectionRule::named("exp2", r), 10000);
  ASSERT_EQ(k, 2154u);
  const KnnModeld m(ds.covariates, ds.labels, k);
  BoundInputs in;
  in.n = 10000;
  in.k = k;
  in.r = r;
  EXPECT_LT(uniform_error(m, problem.eta), uniform_error_bound(in).value);
}

}  // namespace
}  // namespace rtc
