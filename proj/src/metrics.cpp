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

#include "rtc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace rtc {
namespace {

double parse_parameter(const std::string& text, const std::string& name) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw DomainError("metric '" + name + "': cannot parse parameter '" + text + "'");
  }
  return value;
}

std::string format_parameter(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

void CmmSpec::validate() const {
  switch (kind) {
    case Kind::kWeightedAccuracy:
      if (!(parameter > 0.0 && parameter < 1.0)) {
        throw DomainError("weighted_accuracy: w must lie in (0, 1)");
      }
      break;
    case Kind::kFBeta:
      if (!(parameter > 0.0 && std::isfinite(parameter))) {
        throw DomainError("f_beta: beta must be positive");
      }
      break;
    case Kind::kTpPowThetaTn:
      if (!(parameter > 0.0 && std::isfinite(parameter))) {
        throw DomainError("tp_pow_theta_tn: theta must be positive");
      }
      break;
    default:
      break;
  }
}

std::string CmmSpec::to_string() const {
  switch (kind) {
    case Kind::kAccuracy:
      return "accuracy";
    case Kind::kWeightedAccuracy:
      return "weighted_accuracy:" + format_parameter(parameter);
    case Kind::kPrecision:
      return "precision";
    case Kind::kRecall:
      return "recall";
    case Kind::kFBeta:
      return "f_beta:" + format_parameter(parameter);
    case Kind::kMcc:
      return "mcc";
    case Kind::kTpTnProduct:
      return "tp_tn_product";
    case Kind::kTpPowThetaTn:
      return "tp_pow_theta_tn:" + format_parameter(parameter);
  }
  return "unknown";
}

CmmSpec parse_cmm(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const bool has_param = colon != std::string::npos;
  const auto require_param = [&]() {
    if (!has_param) throw DomainError("metric '" + name + "' requires a parameter, e.g. " + name + ":1");
    return parse_parameter(text.substr(colon + 1), name);
  };
  const auto forbid_param = [&]() {
    if (has_param) throw DomainError("metric '" + name + "' takes no parameter");
  };

  CmmSpec spec;
  if (name == "accuracy") {
    forbid_param();
    spec = CmmSpec::accuracy();
  } else if (name == "weighted_accuracy") {
    spec = CmmSpec::weighted_accuracy(require_param());
  } else if (name == "precision") {
    forbid_param();
    spec = CmmSpec::precision();
  } else if (name == "recall") {
    forbid_param();
    spec = CmmSpec::recall();
  } else if (name == "f_beta") {
    spec = CmmSpec::f_beta(require_param());
  } else if (name == "f1") {
    forbid_param();
    spec = CmmSpec::f1();
  } else if (name == "mcc") {
    forbid_param();
    spec = CmmSpec::mcc();
  } else if (name == "tp_tn_product") {
    forbid_param();
    spec = CmmSpec::tp_tn_product();
  } else if (name == "tp_pow_theta_tn") {
    spec = CmmSpec::tp_pow_theta_tn(require_param());
  } else {
    throw DomainError("unknown metric '" + name + "'");
  }
  spec.validate();
  return spec;
}

std::vector<CmmSpec> registered_cmms() {
  return {CmmSpec::accuracy(),
          CmmSpec::weighted_accuracy(0.3),
          CmmSpec::weighted_accuracy(0.9),
          CmmSpec::precision(),
          CmmSpec::recall(),
          CmmSpec::f_beta(0.5),
          CmmSpec::f1(),
          CmmSpec::f_beta(2.0),
          CmmSpec::mcc(),
          CmmSpec::tp_tn_product(),
          CmmSpec::tp_pow_theta_tn(0.5),
          CmmSpec::tp_pow_theta_tn(2.0)};
}

RocCurve roc_and_auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw DegenerateInputError("roc_and_auroc: scores and labels must be non-empty and of equal length");
  }
  std::size_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw DegenerateInputError("roc_and_auroc: labels must be 0 or 1");
    positives += static_cast<std::size_t>(y);
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DegenerateInputError("roc_and_auroc: both classes must be present");
  }

  // Highest scores are accepted first; each tied group enters as one step.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.knots.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double group_score = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == group_score; ++i) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
    }
    roc.knots.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                         static_cast<double>(tp) / static_cast<double>(positives)});
  }

  double area = 0.0;
  for (std::size_t i = 1; i < roc.knots.size(); ++i) {
    const auto& a = roc.knots[i - 1];
    const auto& b = roc.knots[i];
    area += (b.fp_rate_x - a.fp_rate_x) * 0.5 * (a.max_tp + b.max_tp);
  }
  roc.auroc = std::clamp(area, 0.0, 1.0);
  return roc;
}

}  // namespace rtc
