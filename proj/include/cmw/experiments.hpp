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

// Desk-scale experiments: random per-round loss intervals, online
// identification of a logistic map from candidate models, and worst-case
// corner play. Each trial derives every random stream from (seed, trial), so
// records are bit-identical across reruns and across --jobs settings, and
// changing the inner solver never perturbs the environment draws.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cmw/cmw.hpp"
#include "cmw/core.hpp"
#include "cmw/hedge.hpp"

namespace cmw {

struct RandomIntervalConfig {
  int m = 10;
  int T = 200;
  int trials = 100;
  std::uint64_t seed = 0;
  SolverKind solver_kind = SolverKind::kExactLp;
  double hedge_L = 1.0;  // loss range used by both step-size schedules
  double c1 = 1e-2;
  std::optional<double> c2;  // empty: the proved default
};

struct LogisticMapConfig {
  int m = 50;
  double theta_lo = 3.0;
  double theta_hi = 3.9;
  double theta_true = 3.57;
  double noise_bound = 0.05;
  int T = 200;
  double x0 = 0.2;
  std::uint64_t seed = 0;
  SolverKind solver_kind = SolverKind::kApproximate;
  double hedge_L = 0.0;  // 0: tightest uniform bound (theta spread + noise) / 4
  double c1 = 1e-2;
  std::optional<double> c2;
};

struct AdversarialConfig {
  int m = 10;
  int T = 200;
  int trials = 100;
  std::uint64_t seed = 0;
  SolverKind solver_kind = SolverKind::kExactLp;
  double hedge_L = 1.0;
  double c1 = 1e-2;
  std::optional<double> c2;
};

struct StepRow {
  int t = 0;
  double epsilon = 0.0;
  double r_tilde = 0.0;  // zero for the fixed-step baseline
  double p_expected_loss = 0.0;
  double realized_loss = 0.0;
  int action = 0;  // zero-based option index
  double best_cum = 0.0;
  double regret = 0.0;
  double bound = 0.0;
};

struct TrialRecord {
  std::vector<StepRow> rows;
  double final_regret = 0.0;
  double final_expected_cost = 0.0;
  double final_realized_cost = 0.0;
};

struct TrialResult {
  TrialRecord cmw;
  TrialRecord mw;
  double best_cost = 0.0;
  int best_index = 0;  // zero-based
};

// Environment seen by one agent for one game. reveal() may inspect the
// agent's current weights and step size (worst-case play does).
class Environment {
 public:
  virtual ~Environment() = default;
  virtual BoxConstraint next_box() = 0;
  virtual LossVector reveal(const BoxConstraint& box,
                            std::span<const double> u, double eps) = 0;
};

// Fixed pre-generated (box, loss) steps; both algorithms can consume copies
// to face identical losses.
class PregenEnvironment : public Environment {
 public:
  struct Step {
    BoxConstraint box;
    LossVector loss;
  };
  explicit PregenEnvironment(std::vector<Step> steps)
      : steps_(std::move(steps)) {}

  BoxConstraint next_box() override { return steps_[t_].box; }
  LossVector reveal(const BoxConstraint&, std::span<const double>,
                    double) override {
    return steps_[t_++].loss;
  }

 private:
  std::vector<Step> steps_;
  std::size_t t_ = 0;
};

// Worst-case corner play against whatever weights the agent shows up with.
class CornerAdversaryEnvironment : public Environment {
 public:
  CornerAdversaryEnvironment(std::vector<BoxConstraint> boxes, Pcg32 rng)
      : boxes_(std::move(boxes)), rng_(rng) {}

  BoxConstraint next_box() override { return boxes_[t_]; }
  LossVector reveal(const BoxConstraint& box, std::span<const double> u,
                    double eps) override;

 private:
  std::vector<BoxConstraint> boxes_;
  std::size_t t_ = 0;
  Pcg32 rng_;
};

// Per-step random streams for one trial; trial index selects the substream.
struct TrialStreams {
  Pcg32 env;
  Pcg32 cmw_actions;
  Pcg32 mw_actions;
  Pcg32 cmw_env;  // only adaptive environments consume these
  Pcg32 mw_env;

  TrialStreams(std::uint64_t seed, int trial);
};

// Plays the constraint-aware algorithm against `env`; asserts the revealed
// losses respect each box and the final regret respects the bound.
TrialRecord play_cmw_game(Environment& env, const CmwConfig& config,
                          Pcg32& action_rng);

// Fixed-step baseline on the same interface; `L` scales both the step size
// and the recorded bound.
TrialRecord play_hedge_game(Environment& env, int m, int T, double L,
                            Pcg32& action_rng);

TrialResult random_intervals_trial(const RandomIntervalConfig& config,
                                   int trial);

// One-step truth update (theta_true + noise) * x * (1 - x).
double logistic_truth_step(double x, double theta_true, double noise);

// Prediction-error interval for candidate theta_i given state x: the
// smallest and largest |theta_true + n - theta_i| x (1 - x) over the noise
// range.
std::pair<double, double> logistic_interval(double x, double theta_i,
                                            double theta_true,
                                            double noise_bound);

// Realized one-step prediction error |x_next - theta_i x (1 - x)|.
double logistic_loss(double x, double x_next, double theta_i);

// Equidistant candidate grid from theta_lo to theta_hi inclusive.
std::vector<double> logistic_grid(const LogisticMapConfig& config);

// Tightest uniform loss bound for the candidate grid.
double logistic_loss_range(const LogisticMapConfig& config);

TrialResult logistic_map_trial(const LogisticMapConfig& config, int trial);

// Worst-case corner play on the unit box for both algorithms (each faces
// its own adaptive opponent).
TrialResult adversarial_trial(const AdversarialConfig& config, int trial);

struct Histogram {
  double lo = 0.0;
  double width = 0.0;
  std::vector<int> counts;
};

struct AlgoSummary {
  double mean_expected_cost = 0.0;
  double median_expected_cost = 0.0;
  double mean_realized_cost = 0.0;
  double mean_regret = 0.0;
  double median_regret = 0.0;
  Histogram expected_cost_hist;
};

struct AggregateSummary {
  int trials = 0;
  AlgoSummary cmw;
  AlgoSummary mw;
  double mean_best_cost = 0.0;
  double median_best_cost = 0.0;
  Histogram best_cost_hist;
  double frac_cmw_beats_mw_expected = 0.0;
  double frac_cmw_beats_mw_realized = 0.0;
  double frac_cmw_negative_regret = 0.0;
};

// Cross-trial summary; bin_width 0 picks range/20 over all recorded costs.
// The three histograms share lo/width, and each one's counts sum to the
// trial count.
AggregateSummary aggregate(std::span<const TrialResult> trials,
                           double bin_width = 0.0);

}  // namespace cmw
