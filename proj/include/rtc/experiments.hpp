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

#ifndef RTC_EXPERIMENTS_HPP
#define RTC_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtc/metrics.hpp"

namespace rtc {

inline constexpr const char* kToolVersion = "0.3.0";

/// Settings shared by the experiment drivers. `workers` and `output` do not
/// enter the config hash: results must not depend on them.
struct ExperimentConfig {
  std::string experiment = "exp1";  // exp1 | exp2 | fraud_pipeline
  std::vector<std::size_t> n_grid;  // strictly increasing
  int trials = 100;
  std::uint64_t master_seed = 20230601;
  CmmSpec metric = CmmSpec::tp_tn_product();
  std::string k_rule = "exp1";
  std::string output;
  int workers = 1;

  std::size_t test_size = 1000;
  int error_grid = 10000;
  int threshold_grid = 100;     // deterministic t grid of the second experiment
  int population_grid = 401;

  // fraud_pipeline
  std::string dataset;
  std::string label_column = "label";
  std::vector<std::size_t> k_values{2, 4, 8, 16, 32, 64, 128};
  std::optional<double> downsample_negative_ratio;

  /// Defaults per experiment: exp1 uses TP*TN and floor(n^{2/3});
  /// exp2 uses F1 and floor(n^{2/3} r^{-1/3}); fraud uses F1.
  static ExperimentConfig defaults_for(const std::string& experiment);

  /// DomainError when trials < 1, the grid is not strictly increasing, etc.
  void validate() const;

  /// Canonical JSON (excluding workers and output).
  std::string canonical_json() const;
  /// FNV-1a 64 of canonical_json(), hex.
  std::string hash() const;

  /// Overlays the keys present in a JSON document onto `base`.
  static ExperimentConfig from_json(const std::string& text, ExperimentConfig base);
};

/// Ten log-spaced integers from 10^2 to 10^4.
std::vector<std::size_t> default_n_grid();

/// One long-format result. Optional fields print as empty cells.
struct ResultRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> r;
  std::optional<double> imbalance_ratio;
  std::string method;
  std::string metric;
  double value = 0.0;
  std::optional<double> bound;
};

struct ResultTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ResultRow> rows;

  /// "# key=value" preamble, header, then rows.
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

/// Aggregate of one (n, k, method, metric) group.
struct SummaryRow {
  std::size_t n = 0;
  std::size_t k = 0;
  std::string method;
  std::string metric;
  int trials = 0;
  double mean = 0.0;
  double sd = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // mean - 1.96 sd / sqrt(trials)
  double ci_high = 0.0;
};

std::vector<SummaryRow> summarize(const ResultTable& table);
void write_summary_csv(std::ostream& out, const ResultTable& table);

/// Looks up the summary of a group; throws DomainError if absent.
const SummaryRow& find_summary(const std::vector<SummaryRow>& rows, std::size_t n, const std::string& method,
                               const std::string& metric);

/// Stochastic vs deterministic thresholding of a kNN regressor on the
/// three-level problem; rows carry per-trial regret.
ResultTable run_experiment1(const ExperimentConfig& cfg);

/// kNN under a UCI and a non-UCI regression function with r = n^{-1/2}:
/// linf, l1 and metric regret (grid-tuned t, plus the exact stochastic sweep).
ResultTable run_experiment2(const ExperimentConfig& cfg);

/// CSV dataset -> z-score -> (downsample) -> 60/20/20 split -> kNN for each
/// k -> thresholds tuned on validation -> test metric.
ResultTable run_fraud_pipeline(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
ResultTable run_experiment(const ExperimentConfig& cfg);

}  // namespace rtc

#endif  // RTC_EXPERIMENTS_HPP
