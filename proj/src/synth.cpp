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

#include "rtc/synth.hpp"

#include <charconv>

#include "rtc/random.hpp"

namespace rtc {
namespace {

enum Stream : std::uint64_t { kCovariates = 1, kLabels = 2, kDraws = 3 };

double parse_number(const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw DomainError("cannot parse number '" + text + "'");
  return value;
}

}  // namespace

SyntheticProblem SyntheticProblem::exp1() { return {"exp1", RegressionFunction::experiment1(), 1}; }

SyntheticProblem SyntheticProblem::exp2_uci(double r) {
  return {"exp2_uci", RegressionFunction::linear_uci(r), 1};
}

SyntheticProblem SyntheticProblem::exp2_nonuci(double r) {
  return {"exp2_nonuci", RegressionFunction::triangle_nonuci(r), 1};
}

SyntheticProblem SyntheticProblem::singleton(double eta0) {
  return {"singleton", RegressionFunction::singleton(eta0), 1};
}

SyntheticProblem SyntheticProblem::constant(double c, int d) {
  return SyntheticProblem{"constant", RegressionFunction::constant(c), 1}.with_dimension(d);
}

SyntheticProblem SyntheticProblem::custom(RegressionFunction eta, int d) {
  return SyntheticProblem{"custom", std::move(eta), 1}.with_dimension(d);
}

SyntheticProblem SyntheticProblem::with_dimension(int dim) const {
  if (dim < 1) throw DomainError("covariate dimension must be >= 1");
  if (dim != 1 && eta.law() == RegressionFunction::Law::kPointMassAtZero) {
    throw UnsupportedSpecError("singleton problems are one-dimensional");
  }
  SyntheticProblem copy = *this;
  copy.d = dim;
  return copy;
}

SyntheticProblem parse_problem(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const auto param = [&]() {
    if (colon == std::string::npos) throw DomainError("problem '" + name + "' requires a parameter");
    return parse_number(text.substr(colon + 1));
  };
  if (name == "exp1") return SyntheticProblem::exp1();
  if (name == "exp2_uci") return SyntheticProblem::exp2_uci(param());
  if (name == "exp2_nonuci") return SyntheticProblem::exp2_nonuci(param());
  if (name == "singleton") return SyntheticProblem::singleton(param());
  if (name == "constant") return SyntheticProblem::constant(param());
  throw DomainError("unknown problem '" + name + "'");
}

LabeledDataset generate(const SyntheticProblem& problem, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("generate: n must be >= 1");
  UniformStream covariate_stream(derive_seed(seed, {kCovariates}));
  UniformStream label_stream(derive_seed(seed, {kLabels}));
  UniformStream draw_stream(derive_seed(seed, {kDraws}));
  const bool point_mass = problem.eta.law() == RegressionFunction::Law::kPointMassAtZero;

  LabeledDataset ds;
  ds.covariates = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), problem.d);
  ds.labels.resize(n);
  ds.draws.resize(n);
  for (int j = 0; j < problem.d; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (!point_mass) {
      for (int j = 0; j < problem.d; ++j) ds.covariates(row, j) = covariate_stream.next();
    }
    ds.labels[i] = label_stream.next() < problem.eta(ds.covariates(row, 0)) ? 1 : 0;
    ds.draws[i] = draw_stream.next();
  }
  return ds;
}

double eval_eta(const SyntheticProblem& problem, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(problem.d)) throw ShapeError("eval_eta: wrong covariate dimension");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("eval_eta: covariate outside [0, 1]^d");
  }
  return problem.eta(x[0]);
}

}  // namespace rtc
