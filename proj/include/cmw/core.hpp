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

// Domain types shared by every module: loss vectors, per-option loss
// intervals, distributions on the simplex, regret accounting and sampling.
// All types are immutable values after construction and safe to copy across
// threads.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmw/rng.hpp"

namespace cmw {

inline constexpr const char* kVersion = "0.1.0";

// Distribution entries may round to tiny negatives; anything in
// [-kNegativeProbTol, 0) is clamped to zero, anything below is an error.
inline constexpr double kNegativeProbTol = 1e-12;
// Tolerance on the probability sum at construction.
inline constexpr double kProbSumTol = 1e-9;
// Tolerance used for membership/feasibility checks throughout.
inline constexpr double kFeasTol = 1e-9;

// The environment broke the interaction protocol (e.g. revealed a loss
// outside the announced constraint set).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure inside the LP/QP kernels or a per-round solver.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A runtime-checked inequality (step-size schedule bookkeeping, regret
// bounds) was violated during a run.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Loss vector revealed by the environment, one finite entry per option.
class LossVector {
 public:
  explicit LossVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// Per-option loss intervals [lower_i, upper_i]; the round's constraint set
// is their Cartesian product.
class BoxConstraint {
 public:
  BoxConstraint(std::vector<double> lower, std::vector<double> upper);

  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  std::size_t size() const { return lower_.size(); }

  bool contains(std::span<const double> point, double tol = kFeasTol) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Point on the m-simplex. Construction clamps negatives in
// [-kNegativeProbTol, 0) to zero and renormalizes; a sum further than
// kProbSumTol from one, or an entry below -kNegativeProbTol, is an error.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t m);

  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

// Running record of one game: expected and realized per-step losses plus
// per-option cumulative losses, enough to evaluate regret at any prefix.
struct GameHistory {
  std::vector<double> expected_losses;       // p_t . l_t per step
  std::vector<double> realized_losses;       // l_t[a_t] per step
  std::vector<double> cumulative_per_option; // sum_t l_t[i]

  explicit GameHistory(std::size_t m) : cumulative_per_option(m, 0.0) {}

  void record(const Distribution& p, const LossVector& loss, int action);
  std::size_t steps() const { return expected_losses.size(); }
};

// The spread constant L: largest gap between any option's upper bound and
// any option's lower bound seen over the recorded rounds.
struct LossRange {
  double value = 0.0;
};

// Largest upper-minus-lower gap over all steps and option pairs. For a
// single box this is max_i upper[i] - min_j lower[j]. Errors on an empty
// sequence.
LossRange loss_range(std::span<const BoxConstraint> constraints);

// Cumulative expected loss minus the cost of the best single option in
// hindsight. May be negative.
double regret(const GameHistory& history);

// Smallest index attaining the minimum cumulative loss, with the value.
std::pair<std::size_t, double> best_in_hindsight(
    std::span<const double> cumulative);

// Draws an option index according to `dist`; deterministic given the
// generator state.
int sample(const Distribution& dist, Pcg32& rng);

// All 2^m vertices of the box, ordered by binary counting with bit i of the
// counter selecting upper[i]. Degenerate intervals are enumerated without
// deduplication. Guarded at m <= 25.
std::vector<LossVector> corners(const BoxConstraint& box);

// Weights exp(-eps * cumulative[i]) rescaled so the largest active weight is
// one (the rescaling cancels everywhere the weights are used), plus their
// sum. Entries outside `active` are zero. Shared by the classical and the
// constraint-aware algorithm so that the two produce bit-identical
// distributions on the q = 0 path.
std::pair<std::vector<double>, double> shifted_exp_weights(
    std::span<const double> cumulative, double eps,
    std::span<const int> active);

// Convenience overload with every option active.
std::pair<std::vector<double>, double> shifted_exp_weights(
    std::span<const double> cumulative, double eps);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace cmw
