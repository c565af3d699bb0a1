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

#ifndef RTC_SYNTH_HPP
#define RTC_SYNTH_HPP

#include <cstdint>
#include <span>
#include <string>

#include "rtc/classify.hpp"
#include "rtc/dataset.hpp"

namespace rtc {

/// Covariates uniform on [0, 1]^d (or the single point 0), labels
/// Bernoulli(eta(x_0)).
struct SyntheticProblem {
  std::string name;
  RegressionFunction eta;
  int d = 1;

  static SyntheticProblem exp1();
  static SyntheticProblem exp2_uci(double r);
  static SyntheticProblem exp2_nonuci(double r);
  static SyntheticProblem singleton(double eta0);
  static SyntheticProblem constant(double c, int d = 1);
  static SyntheticProblem custom(RegressionFunction eta, int d = 1);

  /// Same problem with covariate dimension d (extra coordinates are noise).
  SyntheticProblem with_dimension(int d) const;
};

/// "exp1", "exp2_uci:R", "exp2_nonuci:R", "singleton:ETA0", "constant:C".
SyntheticProblem parse_problem(const std::string& text);

/// n i.i.d. rows with labels and draws. Covariates, labels and draws come
/// from three streams derived from `seed`, so identical arguments give
/// bit-identical output.
LabeledDataset generate(const SyntheticProblem& problem, std::size_t n, std::uint64_t seed);

/// eta at a covariate point; DomainError outside the support.
double eval_eta(const SyntheticProblem& problem, std::span<const double> x);

}  // namespace rtc

#endif  // RTC_SYNTH_HPP
