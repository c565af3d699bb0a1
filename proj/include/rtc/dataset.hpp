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

#ifndef RTC_DATASET_HPP
#define RTC_DATASET_HPP

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "rtc/classify.hpp"

namespace rtc {

/// n x d covariates with binary labels, optional per-row uniform draws for
/// stochastic classification and optional feature names.
struct LabeledDataset {
  Eigen::MatrixXd covariates;
  std::vector<int> labels;
  std::vector<double> draws;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return labels.size(); }
  std::size_t dims() const { return static_cast<std::size_t>(covariates.cols()); }
  bool has_draws() const { return !draws.empty(); }
  std::size_t positives() const;

  /// Throws ShapeError or SchemaError when the invariants do not hold.
  void validate() const;

  /// Rows at `indices`, in that order.
  LabeledDataset subset(std::span<const std::size_t> indices) const;

  /// Pairs each row's score with its label and draw (0 when absent).
  std::vector<ScoredSample> scored(std::span<const double> scores) const;
};

}  // namespace rtc

#endif  // RTC_DATASET_HPP
