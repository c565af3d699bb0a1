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

#ifndef RTC_KNN_HPP
#define RTC_KNN_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rtc/classify.hpp"
#include "rtc/errors.hpp"

namespace rtc {

/// k-nearest-neighbor regressor under Euclidean distance.
///
/// Training rows are stored in canonical order (covariate tuple, then
/// original row index); a row's position in that order is its rank. Among
/// equidistant candidates the lower rank wins, so predictions do not depend
/// on the order in which rows were supplied.
///
/// One-dimensional models answer queries in O(log n) from the sorted
/// covariates; higher dimensions use an exact brute-force scan.
template <typename Scalar>
class KnnModel {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  KnnModel(const Matrix& covariates, std::span<const int> labels, std::size_t k) : k_(k) {
    const auto n = static_cast<std::size_t>(covariates.rows());
    if (n == 0) throw DegenerateInputError("KnnModel: no training rows");
    if (labels.size() != n) throw ShapeError("KnnModel: label count does not match covariate rows");
    if (k < 1 || k > n) throw DomainError("KnnModel: k must lie in [1, n]");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      for (Eigen::Index j = 0; j < covariates.cols(); ++j) {
        const Scalar xa = covariates(static_cast<Eigen::Index>(a), j);
        const Scalar xb = covariates(static_cast<Eigen::Index>(b), j);
        if (xa != xb) return xa < xb;
      }
      return false;
    });

    points_.resize(static_cast<Eigen::Index>(n), covariates.cols());
    labels_.resize(n);
    label_prefix_.assign(n + 1, 0);
    for (std::size_t rank = 0; rank < n; ++rank) {
      const auto row = order[rank];
      if (labels[row] != 0 && labels[row] != 1) throw SchemaError("KnnModel: labels must be 0 or 1");
      points_.row(static_cast<Eigen::Index>(rank)) = covariates.row(static_cast<Eigen::Index>(row));
      labels_[rank] = labels[row];
      label_prefix_[rank + 1] = label_prefix_[rank] + static_cast<std::size_t>(labels[row]);
    }
  }

  std::size_t size() const { return labels_.size(); }
  Eigen::Index dimension() const { return points_.cols(); }
  std::size_t k() const { return k_; }

  /// Mean label of the k nearest training rows.
  Scalar predict(const Vector& query) const {
    check_query(query);
    const std::size_t positives = dimension() == 1 ? positives_1d(query(0)) : positives_brute_force(query);
    return static_cast<Scalar>(positives) / static_cast<Scalar>(k_);
  }

  /// Predictions at every row of `queries`.
  std::vector<Scalar> predict_rows(const Matrix& queries) const {
    std::vector<Scalar> out(static_cast<std::size_t>(queries.rows()));
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      out[static_cast<std::size_t>(i)] = predict(queries.row(i).transpose());
    }
    return out;
  }

  /// Labels of the `m` nearest training rows in neighbor order
  /// (distance, then rank). Exact brute force in every dimension.
  std::vector<int> neighbor_labels(const Vector& query, std::size_t m) const {
    check_query(query);
    m = std::min(m, size());
    const auto order = ranked_by_distance(query, m);
    std::vector<int> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = labels_[order[i]];
    return out;
  }

 private:
  void check_query(const Vector& query) const {
    if (query.size() != dimension()) throw ShapeError("KnnModel: query dimension does not match training data");
  }

  Scalar squared_distance(std::size_t rank, const Vector& query) const {
    return (points_.row(static_cast<Eigen::Index>(rank)).transpose() - query).squaredNorm();
  }

  std::vector<std::size_t> ranked_by_distance(const Vector& query, std::size_t m) const {
    const std::size_t n = size();
    std::vector<Scalar> d2(n);
    for (std::size_t r = 0; r < n; ++r) d2[r] = squared_distance(r, query);
    std::vector<std::size_t> ranks(n);
    std::iota(ranks.begin(), ranks.end(), std::size_t{0});
    const auto closer = [&](std::size_t a, std::size_t b) { return d2[a] != d2[b] ? d2[a] < d2[b] : a < b; };
    std::partial_sort(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(m), ranks.end(), closer);
    ranks.resize(m);
    return ranks;
  }

  std::size_t positives_brute_force(const Vector& query) const {
    std::size_t total = 0;
    for (std::size_t r : ranked_by_distance(query, k_)) total += static_cast<std::size_t>(labels_[r]);
    return total;
  }

  std::size_t label_sum(std::size_t begin, std::size_t end) const { return label_prefix_[end] - label_prefix_[begin]; }

  // Sorted covariates to the left of the query, read outward, and those to
  // the right, read outward, both have non-decreasing squared distance. The
  // k-th smallest distance is found by merging the two sequences; rows at
  // exactly that distance are then taken in rank order.
  std::size_t positives_1d(Scalar q) const {
    const std::size_t n = size();
    const auto x = [&](std::size_t rank) { return points_(static_cast<Eigen::Index>(rank), 0); };
    const auto sq = [](Scalar v) { return v * v; };

    std::size_t lo = 0, hi = n;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (x(mid) < q) lo = mid + 1; else hi = mid;
    }
    const std::size_t split = lo;
    const std::size_t n_left = split;
    const std::size_t n_right = n - split;
    const auto left = [&](std::size_t j) { return sq(q - x(split - 1 - j)); };
    const auto right = [&](std::size_t j) { return sq(x(split + j) - q); };

    // Number a of the k nearest drawn from the left sequence.
    std::size_t a_lo = k_ > n_right ? k_ - n_right : 0;
    std::size_t a_hi = std::min(k_, n_left);
    while (a_lo < a_hi) {
      const std::size_t a = (a_lo + a_hi) / 2;
      // Taking one more from the left is required iff the right sequence's
      // current last pick is strictly farther than the next left candidate.
      if (right(k_ - a - 1) > left(a)) a_lo = a + 1; else a_hi = a;
    }
    const std::size_t a = a_lo;
    Scalar kth(0);
    if (a > 0) kth = left(a - 1);
    if (k_ - a > 0) kth = std::max(kth, right(k_ - a - 1));

    const auto count_below = [&](auto&& seq, std::size_t len, bool inclusive) {
      std::size_t l = 0, h = len;
      while (l < h) {
        const std::size_t mid = (l + h) / 2;
        const bool inside = inclusive ? !(kth < seq(mid)) : seq(mid) < kth;
        if (inside) l = mid + 1; else h = mid;
      }
      return l;
    };
    const std::size_t left_less = count_below(left, n_left, false);
    const std::size_t right_less = count_below(right, n_right, false);
    const std::size_t left_tie = count_below(left, n_left, true) - left_less;
    const std::size_t right_tie = count_below(right, n_right, true) - right_less;

    std::size_t total = label_sum(split - left_less, split) + label_sum(split, split + right_less);
    std::size_t need = k_ - left_less - right_less;
    const std::size_t take_left = std::min(need, left_tie);
    const std::size_t left_tie_begin = split - left_less - left_tie;
    total += label_sum(left_tie_begin, left_tie_begin + take_left);
    need -= take_left;
    const std::size_t take_right = std::min(need, right_tie);
    total += label_sum(split + right_less, split + right_less + take_right);
    return total;
  }

  Matrix points_;
  std::vector<int> labels_;
  std::vector<std::size_t> label_prefix_;
  std::size_t k_;
};

using KnnModeld = KnnModel<double>;

/// Rules for choosing k from n. `kUci` and `kBalanced` follow the rate-optimal
/// choice n^{2a/(2a+d)} (log n)^{d/(2a+d)} r^{-d/(2a+d)} (balanced fixes
/// r = 1), rounded. `kExtreme` returns n. `kNoLog` drops the log factor and
/// floors, as used by the synthetic experiments (r = 1 gives floor(n^{2/3})
/// in one dimension).
struct KSelectionRule {
  enum class Regime { kBalanced, kUci, kExtreme, kNoLog };

  double alpha = 1.0;
  int d = 1;
  double r = 1.0;
  Regime regime = Regime::kNoLog;

  /// "balanced", "uci", "extreme", "exp1" (no log, r = 1), "exp2" (no log).
  static KSelectionRule named(const std::string& name, double r = 1.0, double alpha = 1.0, int d = 1);
};

/// k in [1, n] per the rule.
std::size_t select_k(const KSelectionRule& rule, std::size_t n);

/// Evaluation points for error sweeps: `grid` evenly spaced points on [0, 1]
/// merged with the knots of `eta`.
std::vector<double> error_grid(const RegressionFunction& eta, int grid);

/// max |eta(x) - prediction(x)| over error_grid. One-dimensional models only.
double uniform_error(const KnnModeld& model, const RegressionFunction& eta, int grid = 10000);

/// Mean |eta(x) - prediction(x)| over error_grid.
double average_error(const KnnModeld& model, const RegressionFunction& eta, int grid = 10000);

}  // namespace rtc

#endif  // RTC_KNN_HPP
