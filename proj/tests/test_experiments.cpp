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

#include "rtc/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "rtc/errors.hpp"
#include "rtc/io.hpp"
#include "rtc/synth.hpp"

namespace rtc {
namespace {

ExperimentConfig small(const std::string& name) {
  auto cfg = ExperimentConfig::defaults_for(name);
  cfg.n_grid = {50, 200};
  cfg.trials = 3;
  cfg.test_size = 200;
  cfg.error_grid = 500;
  cfg.population_grid = 51;
  return cfg;
}

std::string stand_in_dataset() {
  const auto path = std::filesystem::temp_directory_path() / "rtc_test_stand_in.csv";
  save_csv(path, generate(SyntheticProblem::exp2_nonuci(0.2).with_dimension(3), 1500, 5));
  return path.string();
}

TEST(Config, Defaults) {
  const auto e1 = ExperimentConfig::defaults_for("exp1");
  EXPECT_EQ(e1.metric, CmmSpec::tp_tn_product());
  EXPECT_EQ(e1.k_rule, "exp1");
  EXPECT_EQ(e1.trials, 100);
  EXPECT_EQ(e1.n_grid, default_n_grid());
  EXPECT_EQ(ExperimentConfig::defaults_for("exp2").metric, CmmSpec::f1());
  EXPECT_THROW(ExperimentConfig::defaults_for("exp9"), DomainError);
}

TEST(Config, DefaultGridIsLogSpaced) {
  const auto g = default_n_grid();
  ASSERT_EQ(g.size(), 10u);
  EXPECT_EQ(g.front(), 100u);
  EXPECT_EQ(g.back(), 10000u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(std::log10(static_cast<double>(g[i])), 2.0 + 2.0 * static_cast<double>(i) / 9.0, 2e-3);
  }
}

TEST(Config, Validation) {
  auto cfg = small("exp1");
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = small("exp1");
  cfg.n_grid = {100, 100};
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = small("exp1");
  cfg.k_rule = "nope";
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = ExperimentConfig::defaults_for("fraud_pipeline");
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Config, JsonOverridesAndErrors) {
  const auto cfg = ExperimentConfig::from_json(
      R"({"n_grid": [10, 20], "trials": 7, "master_seed": 5, "metric": "f_beta:2", "workers": 3})",
      ExperimentConfig::defaults_for("exp1"));
  EXPECT_EQ(cfg.n_grid, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(cfg.trials, 7);
  EXPECT_EQ(cfg.master_seed, 5u);
  EXPECT_EQ(cfg.metric, CmmSpec::f_beta(2.0));
  EXPECT_EQ(cfg.workers, 3);
  EXPECT_THROW(ExperimentConfig::from_json("{", cfg), ParseError);
  EXPECT_THROW(ExperimentConfig::from_json(R"({"trials": "many"})", cfg), SchemaError);
}

TEST(Config, HashIgnoresWorkersAndOutput) {
  auto a = small("exp1");
  auto b = a;
  b.workers = 4;
  b.output = "elsewhere.csv";
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  b.master_seed += 1;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(Experiment1, RowsAndMetadata) {
  const auto table = run_experiment1(small("exp1"));
  ASSERT_EQ(table.rows.size(), 2u * 3u * 2u);
  EXPECT_EQ(table.rows[0].method, "stochastic");
  EXPECT_EQ(table.rows[1].method, "deterministic");
  EXPECT_EQ(table.rows[0].k, 13u);  // floor(50^{2/3})
  std::set<std::uint64_t> seeds;
  for (const auto& row : table.rows) {
    seeds.insert(row.seed);
    EXPECT_EQ(row.metric, "regret");
    EXPECT_LE(row.value, 25.0 / 144 + 1e-12);
  }
  EXPECT_EQ(seeds.size(), 6u);
  const auto csv = table.to_csv();
  EXPECT_NE(csv.find("# tool_version=" + std::string(kToolVersion)), std::string::npos);
  EXPECT_NE(csv.find("# config_hash="), std::string::npos);
  EXPECT_NE(csv.find("# seed="), std::string::npos);
  EXPECT_NE(csv.find("trial,seed,n,k,r,imbalance_ratio,method,metric,value,bound\n"), std::string::npos);
}

TEST(Experiment1, DeterministicAcrossRunsAndWorkers) {
  auto cfg = small("exp1");
  const auto one = run_experiment1(cfg).to_csv();
  EXPECT_EQ(one, run_experiment1(cfg).to_csv());
  cfg.workers = 4;
  EXPECT_EQ(one, run_experiment1(cfg).to_csv());
}

TEST(Experiment2, RowsAndWorkers) {
  auto cfg = small("exp2");
  const auto table = run_experiment2(cfg);
  ASSERT_EQ(table.rows.size(), 2u * 3u * 2u * 4u);
  std::set<std::string> metrics;
  for (const auto& row : table.rows) {
    metrics.insert(row.metric);
    ASSERT_TRUE(row.r.has_value());
    EXPECT_DOUBLE_EQ(*row.r, 1.0 / std::sqrt(static_cast<double>(row.n)));
    if (row.metric == "linf" || row.metric == "l1") {
      EXPECT_GE(row.value, 0.0);
      EXPECT_LE(row.value, 1.0);
    }
  }
  EXPECT_EQ(metrics, (std::set<std::string>{"linf", "l1", "f1_regret", "f1_regret_stochastic"}));
  cfg.workers = 4;
  EXPECT_EQ(table.to_csv(), run_experiment2(cfg).to_csv());
}

TEST(Summary, MeanAndInterval) {
  ResultTable t;
  for (int i = 0; i < 4; ++i) {
    ResultRow r;
    r.trial = i;
    r.n = 10;
    r.k = 2;
    r.method = "m";
    r.metric = "x";
    r.value = static_cast<double>(i);
    t.rows.push_back(r);
  }
  const auto s = summarize(t);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].mean, 1.5);
  const double sd = std::sqrt(5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s[0].sd, sd);
  EXPECT_DOUBLE_EQ(s[0].ci_high - s[0].mean, 1.96 * sd / 2.0);
  EXPECT_EQ(&find_summary(s, 10, "m", "x"), &s[0]);
  EXPECT_THROW(find_summary(s, 11, "m", "x"), DomainError);
}

TEST(Fraud, EndToEndOnStandIn) {
  auto cfg = ExperimentConfig::defaults_for("fraud_pipeline");
  cfg.dataset = stand_in_dataset();
  cfg.trials = 2;
  cfg.k_values = {2, 16, 5000};
  const auto table = run_fraud_pipeline(cfg);
  ASSERT_EQ(table.rows.size(), 2u * 3u * 2u);
  EXPECT_NE(table.rows[0].seed, table.rows[6].seed);
  for (const auto& row : table.rows) {
    EXPECT_EQ(row.metric, "f1");
    EXPECT_LE(row.k, row.n);
    ASSERT_TRUE(row.imbalance_ratio.has_value());
    EXPECT_GT(*row.imbalance_ratio, 1.0);
  }
  cfg.workers = 2;
  EXPECT_EQ(table.to_csv(), run_fraud_pipeline(cfg).to_csv());
}

TEST(Fraud, DownsamplingChangesImbalance) {
  auto cfg = ExperimentConfig::defaults_for("fraud_pipeline");
  cfg.dataset = stand_in_dataset();
  cfg.trials = 1;
  cfg.k_values = {8};
  const double full = *run_fraud_pipeline(cfg).rows[0].imbalance_ratio;
  cfg.downsample_negative_ratio = 0.5;
  const double half = *run_fraud_pipeline(cfg).rows[0].imbalance_ratio;
  EXPECT_NEAR(half, full / 2, 0.05 * full);
}

TEST(Fraud, MissingFile) {
  auto cfg = ExperimentConfig::defaults_for("fraud_pipeline");
  cfg.dataset = "/nonexistent/data.csv";
  EXPECT_THROW(run_fraud_pipeline(cfg), Error);
}

}  // namespace
}  // namespace rtc
