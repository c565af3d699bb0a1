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

#include "rtc/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace rtc {

void BoundInputs::validate() const {
  if (n < 1) throw DomainError("bounds: n must be >= 1");
  if (k < 1 || k > n) throw DomainError("bounds: k must lie in [1, n]");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("bounds: r must lie in (0, 1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("bounds: alpha must lie in (0, 1]");
  if (d < 1) throw DomainError("bounds: d must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("bounds: delta must lie in (0, 1)");
  for (double v : {lipschitz, p_star, epsilon_star, margin_c, margin_beta, lipschitz_m}) {
    if (!(v > 0.0)) throw DomainError("bounds: constants must be positive");
  }
  if (shattering_override && !(*shattering_override >= 1.0)) {
    throw DomainError("bounds: shattering override must be >= 1");
  }
}

double shattering_bound(std::size_t n, int d) {
  if (n < 1 || d < 1) throw DomainError("shattering_bound: n and d must be >= 1");
  return 2.0 * std::pow(static_cast<double>(n), d + 1) + 2.0;
}

double covering_bound(double eps, int d) {
  if (!(eps > 0.0) || d < 1) throw DomainError("covering_bound: eps > 0 and d >= 1 required");
  return std::pow(2.0 / eps, d);
}

UniformErrorBound uniform_error_bound(const BoundInputs& in) {
  in.validate();
  const double n = static_cast<double>(in.n);
  const double k = static_cast<double>(in.k);
  if (k / n > in.p_star * std::pow(in.epsilon_star, in.d) / 2.0) {
    throw RegimeError("uniform_error_bound: requires k / n <= p_star * epsilon_star^d / 2");
  }
  UniformErrorBound out;
  out.shattering = in.shattering_override.value_or(shattering_bound(in.n, in.d));
  const double log_term = std::log(2.0 * out.shattering / in.delta);
  const double radius = 2.0 * k / (in.p_star * n);
  out.bias_term = std::pow(2.0, in.alpha) * in.lipschitz * in.r * std::pow(radius, in.alpha / in.d);
  out.variance_term = 2.0 / (3.0 * k) * log_term;
  out.deviation_term = std::sqrt(2.0 * in.r / k * log_term);
  out.value = out.bias_term + out.variance_term + out.deviation_term;
  out.failure_probability =
      std::min(1.0, covering_bound(std::pow(radius, 1.0 / in.d), in.d) * std::exp(-k / 4.0) + in.delta);
  return out;
}

double estimation_error_bound(std::size_t n, double delta) {
  if (n < 1) throw DomainError("estimation_error_bound: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("estimation_error_bound: delta must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  return std::sqrt(8.0 / nn * std::log(32.0 * (2.0 * nn + 1.0) / delta));
}

double regret_bound(const BoundInputs& in, double sup_err) {
  if (!(sup_err >= 0.0)) throw DomainError("regret_bound: sup_err must be non-negative");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw DomainError("regret_bound: delta must lie in (0, 1)");
  return in.lipschitz_m *
         (in.margin_c * std::pow(sup_err, in.margin_beta) + 2.0 * estimation_error_bound(in.n, in.delta));
}

double cmm_lipschitz_constant(const CmmSpec& spec, double positive_rate) {
  spec.validate();
  const auto require_rate = [&]() {
    if (!(positive_rate > 0.0 && positive_rate <= 1.0)) {
      throw DomainError("cmm_lipschitz_constant: positive rate must lie in (0, 1]");
    }
  };
  switch (spec.kind) {
    case CmmSpec::Kind::kAccuracy:
      // Twice the w = 1/2 weighted accuracy.
      return 1.0;
    case CmmSpec::Kind::kWeightedAccuracy:
      return std::max(spec.parameter, 1.0 - spec.parameter);
    case CmmSpec::Kind::kRecall:
      require_rate();
      return 2.0 / positive_rate;
    case CmmSpec::Kind::kFBeta: {
      require_rate();
      const double b2 = spec.parameter * spec.parameter;
      return 2.0 * (1.0 + b2) / positive_rate * std::max(1.0 / b2, 1.0 / (b2 * b2));
    }
    default:
      throw UnsupportedSpecError("cmm_lipschitz_constant: no constant available for " + spec.to_string());
  }
}

}  // namespace rtc
