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

#include "rtc/threshold_opt.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rtc {
namespace {

void require_samples(std::span<const ScoredSample> samples, const char* who) {
  if (samples.empty()) throw DegenerateInputError(std::string(who) + ": no samples");
}

// Threshold realizing "first j samples of the sweep are 0, the rest 1".
StochasticThreshold prefix_threshold(const std::vector<ScoredSample>& sorted, std::size_t j) {
  if (j == 0) return {0.0, 1.0};
  return {sorted[j - 1].score, sorted[j - 1].draw};
}

struct Counts {
  std::size_t tn = 0, fp = 0, fn = 0, tp = 0;
  ConfusionMatrixd matrix() const { return ConfusionMatrixd::from_counts(tn, fp, fn, tp); }
};

Counts all_positive_counts(const std::vector<ScoredSample>& sorted) {
  Counts c;
  for (const auto& s : sorted) (s.label == 1 ? c.tp : c.fp) += 1;
  return c;
}

void move_to_negative(Counts& c, const ScoredSample& s) {
  if (s.label == 1) {
    --c.tp;
    ++c.fn;
  } else {
    --c.fp;
    ++c.tn;
  }
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        i == count - 1 ? hi : lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

}  // namespace

std::vector<ScoredSample> sweep_order(std::span<const ScoredSample> samples) {
  std::vector<ScoredSample> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const ScoredSample& a, const ScoredSample& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.draw > b.draw;
  });
  return sorted;
}

ThresholdSearchResult optimize_threshold(std::span<const ScoredSample> samples, const CmmSpec& spec) {
  require_samples(samples, "optimize_threshold");
  spec.validate();
  const auto sorted = sweep_order(samples);

  Counts counts = all_positive_counts(sorted);
  double best = evaluate_cmm(spec, counts.matrix());
  std::size_t best_j = 0;
  for (std::size_t j = 1; j <= sorted.size(); ++j) {
    move_to_negative(counts, sorted[j - 1]);
    const double value = evaluate_cmm(spec, counts.matrix());
    if (value > best) {
      best = value;
      best_j = j;
    }
  }
  return {prefix_threshold(sorted, best_j), best, best_j};
}

ThresholdSearchResult brute_force_threshold(std::span<const ScoredSample> samples, const CmmSpec& spec) {
  require_samples(samples, "brute_force_threshold");
  spec.validate();
  const auto sorted = sweep_order(samples);
  const std::size_t n = sorted.size();

  ThresholdSearchResult result{prefix_threshold(sorted, 0), 0.0, 0};
  bool first = true;
  std::vector<int> prediction(n);
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i < n; ++i) prediction[i] = i < j ? 0 : 1;
    Counts c;
    for (std::size_t i = 0; i < n; ++i) {
      const bool positive = sorted[i].label == 1;
      if (prediction[i] == 1) {
        (positive ? c.tp : c.fp) += 1;
      } else {
        (positive ? c.fn : c.tn) += 1;
      }
    }
    const double value = evaluate_cmm(spec, c.matrix());
    if (first || value > result.metric_value) {
      result = {prefix_threshold(sorted, j), value, j};
      first = false;
    }
  }
  return result;
}

ThresholdSearchResult optimize_threshold_deterministic(std::span<const ScoredSample> samples,
                                                       const CmmSpec& spec) {
  require_samples(samples, "optimize_threshold_deterministic");
  spec.validate();
  const auto sorted = sweep_order(samples);
  const std::size_t n = sorted.size();

  const auto threshold_at = [&](std::size_t j) -> StochasticThreshold {
    if (j == 0) return sorted.front().score > 0.0 ? StochasticThreshold{0.0, 0.0} : StochasticThreshold{0.0, 1.0};
    return {sorted[j - 1].score, 0.0};
  };

  Counts counts = all_positive_counts(sorted);
  double best = evaluate_cmm(spec, counts.matrix());
  std::size_t best_j = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    move_to_negative(counts, sorted[j - 1]);
    if (j < n && sorted[j].score == sorted[j - 1].score) continue;
    const double value = evaluate_cmm(spec, counts.matrix());
    if (value > best) {
      best = value;
      best_j = j;
    }
  }
  return {threshold_at(best_j), best, best_j};
}

ThresholdSearchResult optimize_population_threshold(const RegressionFunction& eta, const CmmSpec& spec,
                                                    int grid_t, int grid_p) {
  if (grid_t < 2 || grid_p < 2) throw DomainError("optimize_population_threshold: grid sizes must be >= 2");
  spec.validate();

  // Thresholds outside [min eta, max eta] are equivalent to the endpoints.
  std::vector<double> ts = linspace(eta.min_value(), eta.max_value(), grid_t);
  for (double atom : eta.atoms()) ts.push_back(atom);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const std::vector<double> ps = linspace(0.0, 1.0, grid_p);

  const auto value_at = [&](double t, double p) { return evaluate_cmm(spec, population_confusion(eta, {t, p})); };

  ThresholdSearchResult best{{ts.front(), 0.0}, value_at(ts.front(), 0.0), 0};
  for (double t : ts) {
    for (double p : ps) {
      const double value = value_at(t, p);
      if (value > best.metric_value) best = {{t, p}, value, 0};
    }
  }

  // Golden-section refinement of p at the best t.
  const double t = best.threshold.t;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 1.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = value_at(t, x1);
  double f2 = value_at(t, x2);
  for (int iter = 0; iter < 80 && b - a > 1e-12; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = value_at(t, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = value_at(t, x1);
    }
  }
  const double p_refined = 0.5 * (a + b);
  const double refined = value_at(t, p_refined);
  if (refined > best.metric_value) best = {{t, p_refined}, refined, 0};
  return best;
}

}  // namespace rtc
