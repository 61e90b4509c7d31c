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

#include "cmw/experiments.hpp"

#include <cmath>
#include <cstring>
#include <numeric>

#include "doctest.h"

using namespace cmw;

namespace {

bool records_identical(const TrialRecord& a, const TrialRecord& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (std::memcmp(&a.rows[i], &b.rows[i], sizeof(StepRow)) != 0) return false;
  }
  return a.final_regret == b.final_regret &&
         a.final_expected_cost == b.final_expected_cost &&
         a.final_realized_cost == b.final_realized_cost;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("random intervals: identical seeds give bit-identical records") {
  RandomIntervalConfig cfg;
  cfg.m = 5;
  cfg.T = 40;
  cfg.trials = 1;
  cfg.seed = 9;
  TrialResult a = random_intervals_trial(cfg, 0);
  TrialResult b = random_intervals_trial(cfg, 0);
  CHECK(records_identical(a.cmw, b.cmw));
  CHECK(records_identical(a.mw, b.mw));
  CHECK(a.best_cost == b.best_cost);

  // A different trial index yields different draws.
  TrialResult c = random_intervals_trial(cfg, 1);
  CHECK_FALSE(records_identical(a.cmw, c.cmw));
}

TEST_CASE("random intervals: solver choice does not perturb the environment") {
  RandomIntervalConfig exact;
  exact.m = 4;
  exact.T = 30;
  exact.seed = 21;
  exact.solver_kind = SolverKind::kExactLp;
  RandomIntervalConfig approx = exact;
  approx.solver_kind = SolverKind::kApproximate;
  TrialResult a = random_intervals_trial(exact, 3);
  TrialResult b = random_intervals_trial(approx, 3);
  // Same realized environment: the hindsight cost is identical.
  CHECK(a.best_cost == b.best_cost);
  CHECK(records_identical(a.mw, b.mw));
}

TEST_CASE("random intervals: single-step record is well-formed") {
  RandomIntervalConfig cfg;
  cfg.m = 2;
  cfg.T = 1;
  cfg.seed = 4;
  cfg.solver_kind = SolverKind::kClosedFormM2;
  TrialResult r = random_intervals_trial(cfg, 0);
  REQUIRE(r.cmw.rows.size() == 1);
  REQUIRE(r.mw.rows.size() == 1);
  CHECK(r.cmw.rows[0].t == 0);
  CHECK(r.cmw.final_regret == r.cmw.rows.back().regret);
  CHECK(r.mw.final_regret == r.mw.rows.back().regret);
  CHECK(r.cmw.rows[0].epsilon == doctest::Approx(1.0));  // default schedule, L = 1
}

TEST_CASE("random intervals: the constraint-aware run beats the baseline") {
  RandomIntervalConfig cfg;
  cfg.m = 10;
  cfg.T = 200;
  cfg.seed = 2;
  cfg.solver_kind = SolverKind::kExactLp;
  int cmw_wins = 0, negative = 0;
  const int trials = 8;
  for (int t = 0; t < trials; ++t) {
    TrialResult r = random_intervals_trial(cfg, t);
    if (r.cmw.final_expected_cost < r.mw.final_expected_cost) ++cmw_wins;
    if (r.cmw.final_regret < 0.0) ++negative;
    CHECK(r.cmw.rows.size() == 200);
  }
  CHECK(cmw_wins == trials);
  CHECK(negative == trials);
}

TEST_CASE("logistic helpers: truth step, intervals, grid") {
  CHECK(logistic_truth_step(0.0, 3.57, 0.03) == doctest::Approx(0.0));
  CHECK(logistic_truth_step(0.5, 3.57, 0.0) == doctest::Approx(0.8925));

  // Interval for x = 0.5, theta_i = 3.5: d = 0.07, g = 0.25.
  auto [lo, hi] = logistic_interval(0.5, 3.5, 3.57, 0.05);
  CHECK(lo == doctest::Approx(0.02 * 0.25).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.12 * 0.25).epsilon(1e-12));

  auto [lo_true, hi_true] = logistic_interval(0.37, 3.57, 3.57, 0.05);
  CHECK(lo_true == doctest::Approx(0.0));
  CHECK(hi_true == doctest::Approx(0.05 * 0.37 * 0.63).epsilon(1e-12));

  auto [lo0, hi0] = logistic_interval(0.0, 3.1, 3.57, 0.05);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == 0.0);

  LogisticMapConfig cfg;
  std::vector<double> grid = logistic_grid(cfg);
  REQUIRE(grid.size() == 50);
  CHECK(grid.front() == 3.0);
  CHECK(grid.back() == 3.9);
  CHECK(grid[1] - grid[0] == doctest::Approx(0.9 / 49).epsilon(1e-15));
  // 3.57 sits strictly between the 32nd and 33rd candidates (1-based).
  CHECK(grid[31] < 3.57);
  CHECK(grid[32] > 3.57);
  CHECK(logistic_loss_range(cfg) == doctest::Approx(0.155).epsilon(1e-12));
}

TEST_CASE("logistic: trajectory stays in [0, 1] for ten thousand steps") {
  Pcg32 rng(5);
  double x = 0.2;
  for (int t = 0; t < 10000; ++t) {
    x = logistic_truth_step(x, 3.57, rng.uniform(-0.05, 0.05));
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
  }
}

TEST_CASE("logistic: losses live inside the announced intervals") {
  LogisticMapConfig cfg;
  cfg.T = 120;
  cfg.seed = 31;
  TrialResult r = logistic_map_trial(cfg, 0);
  CHECK(r.cmw.rows.size() == 120);
  // The engine's protocol check ran every step; also sanity-check hindsight.
  CHECK(r.best_cost <= r.cmw.final_expected_cost);
  CHECK(r.best_index >= 0);
  CHECK(r.best_index < cfg.m);
}

TEST_CASE("logistic: noiseless variant concentrates on the nearest candidate") {
  LogisticMapConfig cfg;
  cfg.noise_bound = 0.0;
  cfg.T = 200;
  cfg.seed = 77;
  std::vector<double> grid = logistic_grid(cfg);

  // Deterministic simulation oracle: the candidate nearest 3.57 in one-step
  // error accumulates the strictly smallest cost.
  double x = cfg.x0;
  std::vector<double> cum(static_cast<std::size_t>(cfg.m), 0.0);
  for (int t = 0; t < cfg.T; ++t) {
    double x_next = logistic_truth_step(x, cfg.theta_true, 0.0);
    for (int i = 0; i < cfg.m; ++i) {
      cum[static_cast<std::size_t>(i)] += logistic_loss(x, x_next, grid[static_cast<std::size_t>(i)]);
    }
    x = x_next;
  }
  auto [oracle_best, oracle_cost] = best_in_hindsight(cum);
  (void)oracle_cost;
  CHECK(oracle_best == 31);  // theta^32 in 1-based numbering, d = 6e-4

  TrialResult r = logistic_map_trial(cfg, 0);
  CHECK(r.best_index == static_cast<int>(oracle_best));

  // Replay the engine to inspect the final distribution.
  CmwConfig engine_cfg = CmwConfig::make(
      cfg.m, cfg.T, LossRange{logistic_loss_range(cfg)}, cfg.solver_kind);
  CmwEngine engine(engine_cfg);
  x = cfg.x0;
  for (int t = 0; t < cfg.T; ++t) {
    double x_next = logistic_truth_step(x, cfg.theta_true, 0.0);
    std::vector<double> lo(static_cast<std::size_t>(cfg.m)),
        hi(static_cast<std::size_t>(cfg.m)), loss(static_cast<std::size_t>(cfg.m));
    for (int i = 0; i < cfg.m; ++i) {
      auto idx = static_cast<std::size_t>(i);
      auto [l, h] = logistic_interval(x, grid[idx], cfg.theta_true, 0.0);
      lo[idx] = l;
      hi[idx] = h;
      loss[idx] = logistic_loss(x, x_next, grid[idx]);
    }
    RoundPlan plan = engine.plan_round(BoxConstraint(lo, hi));
    engine.commit(plan, LossVector(loss));
    x = x_next;
  }
  RoundPlan last = engine.plan_round(BoxConstraint(
      std::vector<double>(static_cast<std::size_t>(cfg.m), 0.0),
      std::vector<double>(static_cast<std::size_t>(cfg.m), 1.0)));
  double max_p = 0.0;
  for (std::size_t i = 0; i < last.p.size(); ++i) max_p = std::max(max_p, last.p[i]);
  CHECK(max_p >= 0.9);
}

TEST_CASE("adversarial trial: bounds hold for both algorithms") {
  AdversarialConfig cfg;
  cfg.m = 3;
  cfg.T = 60;
  cfg.seed = 13;
  TrialResult r = adversarial_trial(cfg, 0);  // would throw on violation
  CHECK(r.cmw.rows.size() == 60);
  CHECK(r.mw.rows.size() == 60);
}

TEST_CASE("aggregate: single trial, histogram partition, fractions") {
  RandomIntervalConfig cfg;
  cfg.m = 4;
  cfg.T = 50;
  cfg.seed = 3;
  std::vector<TrialResult> trials;
  for (int t = 0; t < 7; ++t) trials.push_back(random_intervals_trial(cfg, t));

  AggregateSummary one = aggregate(std::span<const TrialResult>(trials.data(), 1));
  CHECK(one.trials == 1);
  CHECK(one.cmw.mean_expected_cost == doctest::Approx(trials[0].cmw.final_expected_cost));
  CHECK(one.cmw.median_regret == doctest::Approx(trials[0].cmw.final_regret));

  AggregateSummary all = aggregate(trials);
  for (const Histogram* h :
       {&all.cmw.expected_cost_hist, &all.mw.expected_cost_hist, &all.best_cost_hist}) {
    int total = std::accumulate(h->counts.begin(), h->counts.end(), 0);
    CHECK(total == static_cast<int>(trials.size()));
  }
  CHECK(all.frac_cmw_beats_mw_expected >= 0.0);
  CHECK(all.frac_cmw_beats_mw_expected <= 1.0);

  AggregateSummary wide = aggregate(trials, 1000.0);
  CHECK(wide.cmw.expected_cost_hist.counts.size() == 1);
}

TEST_SUITE_END();
