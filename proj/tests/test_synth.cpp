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

#include "rtc/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "rtc/errors.hpp"
#include "rtc/io.hpp"

namespace rtc {
namespace {

double positive_fraction(const LabeledDataset& ds) {
  return static_cast<double>(ds.positives()) / static_cast<double>(ds.rows());
}

// Four binomial standard deviations for a mean-p fraction over n draws.
double four_sigma(double p, double n) { return 4.0 * std::sqrt(p * (1.0 - p) / n); }

TEST(Generate, ClassBalance) {
  const double n = 1e6;
  const auto e1 = generate(SyntheticProblem::exp1(), 1'000'000, 1);
  EXPECT_NEAR(positive_fraction(e1), 0.5, 0.002);
  const auto uci = generate(SyntheticProblem::exp2_uci(0.1), 1'000'000, 2);
  EXPECT_NEAR(positive_fraction(uci), 0.05, 0.001);
  const auto non = generate(SyntheticProblem::exp2_nonuci(0.1), 1'000'000, 3);
  EXPECT_NEAR(positive_fraction(non), 0.05, four_sigma(0.05, n));
  const auto single = generate(SyntheticProblem::singleton(0.3), 1'000'000, 4);
  EXPECT_NEAR(positive_fraction(single), 0.3, four_sigma(0.3, n));
  const auto c = generate(SyntheticProblem::constant(0.7), 1'000'000, 5);
  EXPECT_NEAR(positive_fraction(c), 0.7, four_sigma(0.7, n));
}

TEST(Generate, ConstantZeroHasNoPositives) {
  EXPECT_EQ(generate(SyntheticProblem::constant(0.0), 5000, 9).positives(), 0u);
}

TEST(Generate, ShapesAndRanges) {
  const auto ds = generate(SyntheticProblem::exp1(), 1000, 10);
  EXPECT_EQ(ds.rows(), 1000u);
  EXPECT_EQ(ds.dims(), 1u);
  ASSERT_TRUE(ds.has_draws());
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const double x = ds.covariates(static_cast<Eigen::Index>(i), 0);
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_GE(ds.draws[i], 0.0);
    EXPECT_LT(ds.draws[i], 1.0);
  }
  const auto single = generate(SyntheticProblem::singleton(0.5), 100, 1);
  EXPECT_TRUE((single.covariates.array() == 0.0).all());
  const auto wide = generate(SyntheticProblem::constant(0.5, 3), 10, 1);
  EXPECT_EQ(wide.dims(), 3u);
  EXPECT_THROW(generate(SyntheticProblem::exp1(), 0, 1), DomainError);
}

TEST(Generate, LabelsFollowEtaWhereDeterministic) {
  const auto problem = SyntheticProblem::exp1();
  const auto ds = generate(problem, 5000, 12);
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const double e = problem.eta(ds.covariates(static_cast<Eigen::Index>(i), 0));
    if (e == 0.0) EXPECT_EQ(ds.labels[i], 0);
    if (e == 1.0) EXPECT_EQ(ds.labels[i], 1);
  }
}

TEST(Generate, DeterministicUnderSeed) {
  const auto problem = SyntheticProblem::exp2_nonuci(0.2);
  std::ostringstream a, b;
  write_csv(a, generate(problem, 500, 77));
  write_csv(b, generate(problem, 500, 77));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Generate, DistinctSeedsDiffer) {
  const auto problem = SyntheticProblem::exp1();
  std::set<std::size_t> hashes;
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::ostringstream out;
    write_csv(out, generate(problem, 100, s));
    hashes.insert(std::hash<std::string>{}(out.str()));
  }
  EXPECT_EQ(hashes.size(), 20u);
}

TEST(Generate, UciDegree) {
  const double r = 0.05;
  const auto problem = SyntheticProblem::exp2_uci(r);
  double best = 0.0;
  for (int i = 0; i <= 10000; ++i) best = std::max(best, problem.eta(i / 10000.0) / r);
  EXPECT_NEAR(best, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(SyntheticProblem::exp2_nonuci(r).eta.max_value(), 1.0);
}

TEST(EvalEta, Examples) {
  const std::vector<double> half{0.5}, tenth{0.1}, one{1.0};
  EXPECT_EQ(eval_eta(SyntheticProblem::exp1(), half), 0.5);
  EXPECT_DOUBLE_EQ(eval_eta(SyntheticProblem::exp2_nonuci(0.2), tenth), 0.5);
  EXPECT_EQ(eval_eta(SyntheticProblem::exp2_uci(0.2), one), 0.0);
  const std::vector<double> outside{1.5}, wrong_dims{0.1, 0.2};
  EXPECT_THROW(eval_eta(SyntheticProblem::exp1(), outside), DomainError);
  EXPECT_THROW(eval_eta(SyntheticProblem::exp1(), wrong_dims), ShapeError);
}

TEST(ParseProblem, Names) {
  EXPECT_EQ(parse_problem("exp1").name, "exp1");
  EXPECT_DOUBLE_EQ(parse_problem("exp2_uci:0.1").eta.uci_degree(), 0.1);
  EXPECT_DOUBLE_EQ(parse_problem("exp2_nonuci:0.2").eta(0.1), 0.5);
  EXPECT_THROW(parse_problem("exp2_uci"), DomainError);
  EXPECT_THROW(parse_problem("banana"), DomainError);
}

}  // namespace
}  // namespace rtc
