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

#include "rtc/classify.hpp"

#include <algorithm>

namespace rtc {
namespace {

struct CellMass {
  double positive = 0.0;  // integral of eta
  double negative = 0.0;  // integral of 1 - eta
};

// Integral of a linear function over an interval of length `length` with
// endpoint values a and b.
CellMass integrate_linear(double length, double a, double b) {
  const double pos = length * 0.5 * (a + b);
  return {pos, length - pos};
}

}  // namespace

double LinearPiece::at(double x) const {
  if (is_constant()) return eta_lo;
  return eta_lo + (eta_hi - eta_lo) * ((x - lo) / (hi - lo));
}

RegressionFunction::RegressionFunction(Law law, std::vector<LinearPiece> pieces, double r)
    : law_(law), pieces_(std::move(pieces)), r_(r) {}

RegressionFunction RegressionFunction::piecewise(std::vector<LinearPiece> pieces, double r) {
  if (pieces.empty()) throw DomainError("regression function needs at least one piece");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("UCI degree r must lie in (0, 1]");
  if (pieces.front().lo != 0.0 || pieces.back().hi != 1.0) {
    throw DomainError("regression function pieces must cover [0, 1]");
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& piece = pieces[i];
    if (!(piece.lo < piece.hi)) throw DomainError("regression function piece has empty support");
    if (i + 1 < pieces.size() && piece.hi != pieces[i + 1].lo) {
      throw DomainError("regression function pieces must be contiguous");
    }
    for (double v : {piece.eta_lo, piece.eta_hi}) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("regression function values must lie in [0, 1]");
    }
  }
  return RegressionFunction(Law::kUniformUnit, std::move(pieces), r);
}

RegressionFunction RegressionFunction::constant(double c) {
  return piecewise({{0.0, 1.0, c, c}});
}

RegressionFunction RegressionFunction::singleton(double eta0) {
  if (!(eta0 >= 0.0 && eta0 <= 1.0)) throw DomainError("singleton eta(0) must lie in [0, 1]");
  return RegressionFunction(Law::kPointMassAtZero, {{0.0, 1.0, eta0, eta0}}, 1.0);
}

RegressionFunction RegressionFunction::experiment1() {
  const double third = 1.0 / 3.0;
  const double two_thirds = 2.0 / 3.0;
  return piecewise({{0.0, third, 0.0, 0.0}, {third, two_thirds, 0.5, 0.5}, {two_thirds, 1.0, 1.0, 1.0}});
}

RegressionFunction RegressionFunction::linear_uci(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("UCI degree r must lie in (0, 1]");
  return piecewise({{0.0, 1.0, r, 0.0}}, r);
}

RegressionFunction RegressionFunction::triangle_nonuci(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("triangle width r must lie in (0, 1]");
  if (r == 1.0) return piecewise({{0.0, 1.0, 1.0, 0.0}});
  return piecewise({{0.0, r, 1.0, 0.0}, {r, 1.0, 0.0, 0.0}});
}

double RegressionFunction::operator()(double x) const {
  if (law_ == Law::kPointMassAtZero) {
    if (x != 0.0) throw DomainError("singleton regression function is defined only at x = 0");
    return pieces_.front().eta_lo;
  }
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("covariate outside [0, 1]");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double value, const LinearPiece& piece) { return value < piece.lo; });
  return std::prev(it)->at(x);
}

std::vector<double> RegressionFunction::knots() const {
  if (law_ == Law::kPointMassAtZero) return {0.0};
  std::vector<double> out;
  out.reserve(pieces_.size() + 1);
  for (const auto& piece : pieces_) out.push_back(piece.lo);
  out.push_back(1.0);
  return out;
}

std::vector<double> RegressionFunction::atoms() const {
  std::vector<double> out;
  for (const auto& piece : pieces_) {
    if (piece.is_constant()) out.push_back(piece.eta_lo);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double RegressionFunction::min_value() const {
  double v = 1.0;
  for (const auto& piece : pieces_) v = std::min({v, piece.eta_lo, piece.eta_hi});
  return v;
}

double RegressionFunction::max_value() const {
  double v = 0.0;
  for (const auto& piece : pieces_) v = std::max({v, piece.eta_lo, piece.eta_hi});
  return v;
}

double RegressionFunction::mean() const {
  if (law_ == Law::kPointMassAtZero) return pieces_.front().eta_lo;
  double total = 0.0;
  for (const auto& piece : pieces_) {
    total += integrate_linear(piece.hi - piece.lo, piece.eta_lo, piece.eta_hi).positive;
  }
  return total;
}

ConfusionMatrixd empirical_confusion(const StochasticThreshold& th, std::span<const ScoredSample> samples) {
  if (samples.empty()) throw DegenerateInputError("empirical_confusion: no samples");
  std::size_t counts[2][2] = {{0, 0}, {0, 0}};  // [label][prediction]
  for (const auto& s : samples) {
    ++counts[s.label == 1 ? 1 : 0][classify_sample(th, s.score, s.draw)];
  }
  return ConfusionMatrixd::from_counts(counts[0][0], counts[0][1], counts[1][0], counts[1][1]);
}

ConfusionMatrixd population_confusion(const RegressionFunction& eta, const StochasticThreshold& th) {
  ConfusionMatrixd c;
  const auto accept = [&c](const CellMass& m, double prob) {
    c.tp += prob * m.positive;
    c.fp += prob * m.negative;
    c.fn += (1.0 - prob) * m.positive;
    c.tn += (1.0 - prob) * m.negative;
  };
  // Acceptance probability of a region where eta compares to t as `value`.
  const auto acceptance = [&th](double value) { return value > th.t ? 1.0 : (value == th.t ? th.p : 0.0); };

  for (const auto& piece : eta.pieces()) {
    const double length = eta.law() == RegressionFunction::Law::kPointMassAtZero ? 1.0 : piece.hi - piece.lo;
    if (piece.is_constant()) {
      accept(integrate_linear(length, piece.eta_lo, piece.eta_lo), acceptance(piece.eta_lo));
      continue;
    }
    const double a = piece.eta_lo;
    const double b = piece.eta_hi;
    if (th.t > std::min(a, b) && th.t < std::max(a, b)) {
      // eta crosses t at a single point; the tie set has measure zero.
      const double fraction = (th.t - a) / (b - a);
      const double left = length * fraction;
      accept(integrate_linear(left, a, th.t), a > th.t ? 1.0 : 0.0);
      accept(integrate_linear(length - left, th.t, b), b > th.t ? 1.0 : 0.0);
    } else {
      accept(integrate_linear(length, a, b), 0.5 * (a + b) > th.t ? 1.0 : 0.0);
    }
  }
  return c;
}

double estimate_margin_probability(std::span<const double> scores, double t, double eps) {
  if (scores.empty()) throw DegenerateInputError("estimate_margin_probability: no scores");
  if (!(eps >= 0.0)) throw DomainError("estimate_margin_probability: eps must be non-negative");
  const auto inside = std::count_if(scores.begin(), scores.end(),
                                    [&](double s) { return std::abs(s - t) <= eps; });
  return static_cast<double>(inside) / static_cast<double>(scores.size());
}

}  // namespace rtc
