// Copyright 2026 The cmw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmw/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cmw {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + " has non-finite entry");
    }
  }
}

}  // namespace

LossVector::LossVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("loss vector must be nonempty");
  }
  require_finite(values_, "loss vector");
}

BoxConstraint::BoxConstraint(std::vector<double> lower,
                             std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw std::invalid_argument("box bounds must be nonempty and same length");
  }
  require_finite(lower_, "box lower bounds");
  require_finite(upper_, "box upper bounds");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (lower_[i] > upper_[i]) {
      throw std::invalid_argument("box has lower[" + std::to_string(i) +
                                  "] > upper[" + std::to_string(i) + "]");
    }
  }
}

bool BoxConstraint::contains(std::span<const double> point, double tol) const {
  if (point.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (point[i] < lower_[i] - tol || point[i] > upper_[i] + tol) return false;
  }
  return true;
}

Distribution::Distribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("distribution must be nonempty");
  }
  require_finite(probs_, "distribution");
  for (double& p : probs_) {
    if (p < -kNegativeProbTol) {
      throw std::invalid_argument("distribution entry below -1e-12");
    }
    if (p < 0.0) p = 0.0;
  }
  double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(sum - 1.0) > kProbSumTol) {
    throw std::invalid_argument("distribution does not sum to one");
  }
  for (double& p : probs_) p /= sum;
}

Distribution Distribution::uniform(std::size_t m) {
  return Distribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

void GameHistory::record(const Distribution& p, const LossVector& loss,
                         int action) {
  if (p.size() != cumulative_per_option.size() ||
      loss.size() != cumulative_per_option.size()) {
    throw std::invalid_argument("history record with mismatched sizes");
  }
  if (action < 0 || static_cast<std::size_t>(action) >= loss.size()) {
    throw std::invalid_argument("history record with invalid action");
  }
  expected_losses.push_back(dot(p.probs(), loss.values()));
  realized_losses.push_back(loss[static_cast<std::size_t>(action)]);
  for (std::size_t i = 0; i < loss.size(); ++i) {
    cumulative_per_option[i] += loss[i];
  }
}

LossRange loss_range(std::span<const BoxConstraint> constraints) {
  if (constraints.empty()) {
    throw std::invalid_argument("no constraints");
  }
  double best = 0.0;
  for (const BoxConstraint& box : constraints) {
    double max_upper = *std::max_element(box.upper().begin(), box.upper().end());
    double min_lower = *std::min_element(box.lower().begin(), box.lower().end());
    best = std::max(best, max_upper - min_lower);
  }
  return LossRange{best};
}

double regret(const GameHistory& history) {
  if (history.steps() == 0) {
    throw std::invalid_argument("regret of empty history");
  }
  double total = std::accumulate(history.expected_losses.begin(),
                                 history.expected_losses.end(), 0.0);
  auto [idx, best] = best_in_hindsight(history.cumulative_per_option);
  (void)idx;
  return total - best;
}

std::pair<std::size_t, double> best_in_hindsight(
    std::span<const double> cumulative) {
  if (cumulative.empty()) {
    throw std::invalid_argument("best_in_hindsight of empty vector");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < cumulative.size(); ++i) {
    if (cumulative[i] < cumulative[best]) best = i;
  }
  return {best, cumulative[best]};
}

int sample(const Distribution& dist, Pcg32& rng) {
  double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
    acc += dist[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(dist.size() - 1);
}

std::vector<LossVector> corners(const BoxConstraint& box) {
  const std::size_t m = box.size();
  if (m > 25) {
    throw std::invalid_argument("corner enumeration too large");
  }
  std::vector<LossVector> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) {
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) {
      c[i] = ((k >> i) & 1u) ? box.upper()[i] : box.lower()[i];
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

std::pair<std::vector<double>, double> shifted_exp_weights(
    std::span<const double> cumulative, double eps,
    std::span<const int> active) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("step size must be positive");
  }
  if (active.empty()) {
    throw std::invalid_argument("no active options");
  }
  double min_cum = std::numeric_limits<double>::infinity();
  for (int i : active) {
    min_cum = std::min(min_cum, cumulative[static_cast<std::size_t>(i)]);
  }
  std::vector<double> w(cumulative.size(), 0.0);
  double phi = 0.0;
  for (int i : active) {
    auto idx = static_cast<std::size_t>(i);
    w[idx] = std::exp(-eps * (cumulative[idx] - min_cum));
    phi += w[idx];
  }
  return {std::move(w), phi};
}

std::pair<std::vector<double>, double> shifted_exp_weights(
    std::span<const double> cumulative, double eps) {
  std::vector<int> all(cumulative.size());
  std::iota(all.begin(), all.end(), 0);
  return shifted_exp_weights(cumulative, eps, all);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace cmw
