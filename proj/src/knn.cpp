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

#include <algorithm>
#include <cmath>

namespace rtc {

KSelectionRule KSelectionRule::named(const std::string& name, double r, double alpha, int d) {
  KSelectionRule rule{alpha, d, r, Regime::kNoLog};
  if (name == "balanced") {
    rule.regime = Regime::kBalanced;
    rule.r = 1.0;
  } else if (name == "uci") {
    rule.regime = Regime::kUci;
  } else if (name == "extreme") {
    rule.regime = Regime::kExtreme;
  } else if (name == "exp1") {
    rule.r = 1.0;
  } else if (name == "exp2") {
    // no-log rule with the caller's r
  } else {
    throw DomainError("unknown k rule '" + name + "'");
  }
  if (!(rule.alpha > 0.0 && rule.alpha <= 1.0)) throw DomainError("k rule: alpha must lie in (0, 1]");
  if (rule.d < 1) throw DomainError("k rule: d must be >= 1");
  if (!(rule.r > 0.0 && rule.r <= 1.0)) throw DomainError("k rule: r must lie in (0, 1]");
  return rule;
}

std::size_t select_k(const KSelectionRule& rule, std::size_t n) {
  if (n == 0) throw DomainError("select_k: n must be >= 1");
  const double nn = static_cast<double>(n);
  const double denom = 2.0 * rule.alpha + rule.d;
  const double n_power = std::pow(nn, 2.0 * rule.alpha / denom);
  const double r_power = std::pow(rule.r, -static_cast<double>(rule.d) / denom);

  double k = nn;
  switch (rule.regime) {
    case KSelectionRule::Regime::kExtreme:
      k = nn;
      break;
    case KSelectionRule::Regime::kBalanced:
      k = std::round(n_power * std::pow(std::log(nn), rule.d / denom));
      break;
    case KSelectionRule::Regime::kUci:
      k = std::round(n_power * std::pow(std::log(nn), rule.d / denom) * r_power);
      break;
    case KSelectionRule::Regime::kNoLog:
      // Relative nudge so exact powers (e.g. 1000^{2/3}) are not floored down.
      k = std::floor(n_power * r_power * (1.0 + 1e-12));
      break;
  }
  return static_cast<std::size_t>(std::clamp(k, 1.0, nn));
}

std::vector<double> error_grid(const RegressionFunction& eta, int grid) {
  if (grid < 2) throw DomainError("error grid needs at least 2 points");
  if (eta.law() == RegressionFunction::Law::kPointMassAtZero) return {0.0};
  std::vector<double> xs(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(grid - 1);
  }
  for (double knot : eta.knots()) xs.push_back(knot);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double uniform_error(const KnnModeld& model, const RegressionFunction& eta, int grid) {
  if (model.dimension() != 1) throw UnsupportedSpecError("error sweeps support one-dimensional models only");
  const auto xs = error_grid(eta, grid);
  Eigen::VectorXd query(1);
  double worst = 0.0;
  for (double x : xs) {
    query(0) = x;
    worst = std::max(worst, std::abs(eta(x) - model.predict(query)));
  }
  return worst;
}

double average_error(const KnnModeld& model, const RegressionFunction& eta, int grid) {
  if (model.dimension() != 1) throw UnsupportedSpecError("error sweeps support one-dimensional models only");
  const auto xs = error_grid(eta, grid);
  Eigen::VectorXd query(1);
  double total = 0.0;
  for (double x : xs) {
    query(0) = x;
    total += std::abs(eta(x) - model.predict(query));
  }
  return total / static_cast<double>(xs.size());
}

}  // namespace rtc
