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

#ifndef RTC_THRESHOLD_OPT_HPP
#define RTC_THRESHOLD_OPT_HPP

#include <cstddef>
#include <span>

#include "rtc/classify.hpp"
#include "rtc/metrics.hpp"

namespace rtc {

/// Winning threshold of a search. For the empirical searches
/// `prefix_index` is the number of leading samples (in sweep order)
/// classified 0; population searches report 0.
struct ThresholdSearchResult {
  StochasticThreshold threshold;
  double metric_value = 0.0;
  std::size_t prefix_index = 0;
};

/// Sweep order: score ascending, draw descending. Every prefix of this order
/// is realizable by some (t, p) under classify_sample.
std::vector<ScoredSample> sweep_order(std::span<const ScoredSample> samples);

/// Exact maximizer of the empirical metric over all n + 1 prefix
/// classifications, in O(n log n). Equal values keep the smallest prefix.
/// The returned (t, p) = (score, draw) of the last sample classified 0, or
/// (0, 1) for the classify-everything-1 prefix.
ThresholdSearchResult optimize_threshold(std::span<const ScoredSample> samples, const CmmSpec& spec);

/// Quadratic reference: materializes each prefix classification and recounts
/// its confusion matrix from scratch.
ThresholdSearchResult brute_force_threshold(std::span<const ScoredSample> samples, const CmmSpec& spec);

/// Same sweep restricted to boundaries between distinct scores, i.e.
/// deterministic thresholds. Returns p = 0, except (0, 1) for the
/// classify-everything-1 split when the smallest score is exactly 0.
ThresholdSearchResult optimize_threshold_deterministic(std::span<const ScoredSample> samples,
                                                       const CmmSpec& spec);

/// Grid search of the population metric over t in [min eta, max eta] (plus
/// the atoms of eta) and p in [0, 1], followed by a golden-section pass in p
/// at the best t. Grid sizes must be >= 2.
ThresholdSearchResult optimize_population_threshold(const RegressionFunction& eta, const CmmSpec& spec,
                                                    int grid_t = 401, int grid_p = 401);

}  // namespace rtc

#endif  // RTC_THRESHOLD_OPT_HPP
