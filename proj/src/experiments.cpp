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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cmw/adversary.hpp"

namespace cmw {

namespace {

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return (n % 2 == 1) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

void check_bound(const char* algo, double regret_value, double bound_value) {
  if (regret_value > bound_value + kFeasTol) {
    throw InvariantError(std::string(algo) + " regret " +
                         std::to_string(regret_value) + " exceeds bound " +
                         std::to_string(bound_value));
  }
}

void finish_record(TrialRecord* rec, const GameHistory& history) {
  rec->final_regret = rec->rows.empty() ? 0.0 : rec->rows.back().regret;
  rec->final_expected_cost =
      std::accumulate(history.expected_losses.begin(),
                      history.expected_losses.end(), 0.0);
  rec->final_realized_cost =
      std::accumulate(history.realized_losses.begin(),
                      history.realized_losses.end(), 0.0);
}

Histogram make_histogram(std::span<const double> values, double lo,
                         double width, int bins) {
  Histogram h;
  h.lo = lo;
  h.width = width;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>(std::floor((v - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

}  // namespace

LossVector CornerAdversaryEnvironment::reveal(const BoxConstraint& box,
                                              std::span<const double> u,
                                              double eps) {
  ++t_;
  return adversarial_loss(u, eps, box, rng_);
}

TrialStreams::TrialStreams(std::uint64_t seed, int trial)
    : env(seed, 8ULL * static_cast<std::uint64_t>(trial)),
      cmw_actions(seed, 8ULL * static_cast<std::uint64_t>(trial) + 1),
      mw_actions(seed, 8ULL * static_cast<std::uint64_t>(trial) + 2),
      cmw_env(seed, 8ULL * static_cast<std::uint64_t>(trial) + 3),
      mw_env(seed, 8ULL * static_cast<std::uint64_t>(trial) + 4) {}

TrialRecord play_cmw_game(Environment& env, const CmwConfig& config,
                          Pcg32& action_rng) {
  CmwEngine engine(config);
  GameHistory history(static_cast<std::size_t>(config.m));
  TrialRecord rec;
  rec.rows.reserve(static_cast<std::size_t>(config.T));
  double expected_sum = 0.0;
  for (int t = 0; t < config.T; ++t) {
    BoxConstraint box = env.next_box();
    RoundPlan plan = engine.plan_round(box);
    int action = sample(plan.p, action_rng);
    LossVector loss = env.reveal(box, plan.u, plan.epsilon);
    double r_tilde = engine.commit(plan, loss);
    history.record(plan.p, loss, action);
    expected_sum += history.expected_losses.back();
    auto [best_idx, best_val] = best_in_hindsight(history.cumulative_per_option);
    (void)best_idx;
    StepRow row;
    row.t = t;
    row.epsilon = plan.epsilon;
    row.r_tilde = r_tilde;
    row.p_expected_loss = history.expected_losses.back();
    row.realized_loss = history.realized_losses.back();
    row.action = action;
    row.best_cum = best_val;
    row.regret = expected_sum - best_val;
    row.bound = engine.bound().value;
    rec.rows.push_back(row);
  }
  finish_record(&rec, history);
  check_bound("cmw", rec.final_regret, engine.bound().value);
  if (engine.state().claim1_violation > kFeasTol ||
      engine.state().claim2_violation > kFeasTol) {
    throw InvariantError("step-size bookkeeping inequality violated in game");
  }
  return rec;
}

TrialRecord play_hedge_game(Environment& env, int m, int T, double L,
                            Pcg32& action_rng) {
  HedgeAgent agent(m, T, L);
  const double bound_value = hedge_regret_bound(m, T, L);
  GameHistory history(static_cast<std::size_t>(m));
  TrialRecord rec;
  rec.rows.reserve(static_cast<std::size_t>(T));
  double expected_sum = 0.0;
  for (int t = 0; t < T; ++t) {
    BoxConstraint box = env.next_box();
    Distribution p = agent.distribution();
    int action = sample(p, action_rng);
    LossVector loss = env.reveal(box, p.probs(), agent.state().epsilon);
    if (!box.contains(loss.values())) {
      throw ProtocolError("environment violated constraint");
    }
    agent.observe(loss);
    history.record(p, loss, action);
    expected_sum += history.expected_losses.back();
    auto [best_idx, best_val] = best_in_hindsight(history.cumulative_per_option);
    (void)best_idx;
    StepRow row;
    row.t = t;
    row.epsilon = agent.state().epsilon;
    row.r_tilde = 0.0;
    row.p_expected_loss = history.expected_losses.back();
    row.realized_loss = history.realized_losses.back();
    row.action = action;
    row.best_cum = best_val;
    row.regret = expected_sum - best_val;
    row.bound = bound_value;
    rec.rows.push_back(row);
  }
  finish_record(&rec, history);
  check_bound("mw", rec.final_regret, bound_value);
  return rec;
}

TrialResult random_intervals_trial(const RandomIntervalConfig& config,
                                   int trial) {
  if (config.m < 2 || config.T < 1) {
    throw std::invalid_argument("random intervals: need m >= 2, T >= 1");
  }
  TrialStreams streams(config.seed, trial);
  const auto m = static_cast<std::size_t>(config.m);

  std::vector<PregenEnvironment::Step> steps;
  steps.reserve(static_cast<std::size_t>(config.T));
  for (int t = 0; t < config.T; ++t) {
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
      double a = streams.env.uniform01();
      double b = streams.env.uniform01();
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b);
    }
    BoxConstraint box(lo, hi);
    std::vector<double> loss(m);
    for (std::size_t i = 0; i < m; ++i) {
      loss[i] = streams.env.uniform(lo[i], hi[i]);
    }
    steps.push_back({std::move(box), LossVector(std::move(loss))});
  }

  CmwConfig cmw_config =
      CmwConfig::make(config.m, config.T, LossRange{config.hedge_L},
                      config.solver_kind, config.c1, config.c2);

  TrialResult result;
  {
    PregenEnvironment env(steps);
    result.cmw = play_cmw_game(env, cmw_config, streams.cmw_actions);
  }
  {
    PregenEnvironment env(steps);
    result.mw = play_hedge_game(env, config.m, config.T, config.hedge_L,
                                streams.mw_actions);
  }
  std::vector<double> cumulative(m, 0.0);
  for (const auto& step : steps) {
    for (std::size_t i = 0; i < m; ++i) cumulative[i] += step.loss[i];
  }
  auto [best_idx, best_val] = best_in_hindsight(cumulative);
  result.best_index = static_cast<int>(best_idx);
  result.best_cost = best_val;
  return result;
}

double logistic_truth_step(double x, double theta_true, double noise) {
  return (theta_true + noise) * x * (1.0 - x);
}

std::pair<double, double> logistic_interval(double x, double theta_i,
                                            double theta_true,
                                            double noise_bound) {
  double g = x * (1.0 - x);
  double d = std::abs(theta_true - theta_i);
  double lo = std::max(0.0, d - noise_bound) * g;
  double hi = (d + noise_bound) * g;
  return {lo, hi};
}

double logistic_loss(double x, double x_next, double theta_i) {
  return std::abs(x_next - theta_i * x * (1.0 - x));
}

std::vector<double> logistic_grid(const LogisticMapConfig& config) {
  if (config.m < 2) throw std::invalid_argument("logistic grid needs m >= 2");
  std::vector<double> grid(static_cast<std::size_t>(config.m));
  double step = (config.theta_hi - config.theta_lo) / (config.m - 1);
  for (int i = 0; i < config.m; ++i) {
    grid[static_cast<std::size_t>(i)] = config.theta_lo + step * i;
  }
  grid.back() = config.theta_hi;  // exact endpoint
  return grid;
}

double logistic_loss_range(const LogisticMapConfig& config) {
  double spread = std::max(config.theta_true - config.theta_lo,
                           config.theta_hi - config.theta_true);
  return (spread + config.noise_bound) * 0.25;
}

TrialResult logistic_map_trial(const LogisticMapConfig& config, int trial) {
  if (!(config.x0 > 0.0 && config.x0 < 1.0)) {
    throw std::invalid_argument("x0 must lie strictly inside (0, 1)");
  }
  if (config.noise_bound < 0.0) {
    throw std::invalid_argument("noise bound must be nonnegative");
  }
  TrialStreams streams(config.seed, trial);
  const auto m = static_cast<std::size_t>(config.m);
  std::vector<double> grid = logistic_grid(config);

  std::vector<PregenEnvironment::Step> steps;
  steps.reserve(static_cast<std::size_t>(config.T));
  double x = config.x0;
  for (int t = 0; t < config.T; ++t) {
    double noise =
        streams.env.uniform(-config.noise_bound, config.noise_bound);
    double x_next = logistic_truth_step(x, config.theta_true, noise);
    std::vector<double> lo(m), hi(m), loss(m);
    for (std::size_t i = 0; i < m; ++i) {
      auto [l, h] = logistic_interval(x, grid[i], config.theta_true,
                                      config.noise_bound);
      lo[i] = l;
      hi[i] = h;
      loss[i] = logistic_loss(x, x_next, grid[i]);
    }
    steps.push_back({BoxConstraint(std::move(lo), std::move(hi)),
                     LossVector(std::move(loss))});
    x = x_next;
  }

  double L = config.hedge_L > 0.0 ? config.hedge_L : logistic_loss_range(config);
  CmwConfig cmw_config = CmwConfig::make(
      config.m, config.T, LossRange{L}, config.solver_kind, config.c1,
      config.c2);

  TrialResult result;
  {
    PregenEnvironment env(steps);
    result.cmw = play_cmw_game(env, cmw_config, streams.cmw_actions);
  }
  {
    PregenEnvironment env(steps);
    result.mw = play_hedge_game(env, config.m, config.T, L,
                                streams.mw_actions);
  }
  std::vector<double> cumulative(m, 0.0);
  for (const auto& step : steps) {
    for (std::size_t i = 0; i < m; ++i) cumulative[i] += step.loss[i];
  }
  auto [best_idx, best_val] = best_in_hindsight(cumulative);
  result.best_index = static_cast<int>(best_idx);
  result.best_cost = best_val;
  return result;
}

TrialResult adversarial_trial(const AdversarialConfig& config, int trial) {
  TrialStreams streams(config.seed, trial);
  const auto m = static_cast<std::size_t>(config.m);
  std::vector<BoxConstraint> boxes(
      static_cast<std::size_t>(config.T),
      BoxConstraint(std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)));

  CmwConfig cmw_config =
      CmwConfig::make(config.m, config.T, LossRange{config.hedge_L},
                      config.solver_kind, config.c1, config.c2);

  TrialResult result;
  {
    CornerAdversaryEnvironment env(boxes, streams.cmw_env);
    result.cmw = play_cmw_game(env, cmw_config, streams.cmw_actions);
  }
  {
    CornerAdversaryEnvironment env(boxes, streams.mw_env);
    result.mw = play_hedge_game(env, config.m, config.T, config.hedge_L,
                                streams.mw_actions);
  }
  // Each algorithm faced its own adaptive opponent; report the tougher of
  // the two hindsight baselines (the per-record regrets remain
  // self-consistent).
  result.best_cost = std::min(
      result.cmw.rows.empty() ? 0.0 : result.cmw.rows.back().best_cum,
      result.mw.rows.empty() ? 0.0 : result.mw.rows.back().best_cum);
  result.best_index = 0;
  return result;
}

AggregateSummary aggregate(std::span<const TrialResult> trials,
                           double bin_width) {
  if (trials.empty()) throw std::invalid_argument("aggregate of no trials");
  AggregateSummary s;
  s.trials = static_cast<int>(trials.size());

  std::vector<double> cmw_costs, mw_costs, best_costs, cmw_regrets, mw_regrets;
  std::vector<double> cmw_realized, mw_realized;
  int beats_expected = 0, beats_realized = 0, negative = 0;
  for (const TrialResult& tr : trials) {
    cmw_costs.push_back(tr.cmw.final_expected_cost);
    mw_costs.push_back(tr.mw.final_expected_cost);
    best_costs.push_back(tr.best_cost);
    cmw_regrets.push_back(tr.cmw.final_regret);
    mw_regrets.push_back(tr.mw.final_regret);
    cmw_realized.push_back(tr.cmw.final_realized_cost);
    mw_realized.push_back(tr.mw.final_realized_cost);
    if (tr.cmw.final_expected_cost < tr.mw.final_expected_cost) ++beats_expected;
    if (tr.cmw.final_realized_cost < tr.mw.final_realized_cost) ++beats_realized;
    if (tr.cmw.final_regret < 0.0) ++negative;
  }
  auto mean = [](const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) /
           static_cast<double>(xs.size());
  };
  s.cmw.mean_expected_cost = mean(cmw_costs);
  s.cmw.median_expected_cost = median(cmw_costs);
  s.cmw.mean_realized_cost = mean(cmw_realized);
  s.cmw.mean_regret = mean(cmw_regrets);
  s.cmw.median_regret = median(cmw_regrets);
  s.mw.mean_expected_cost = mean(mw_costs);
  s.mw.median_expected_cost = median(mw_costs);
  s.mw.mean_realized_cost = mean(mw_realized);
  s.mw.mean_regret = mean(mw_regrets);
  s.mw.median_regret = median(mw_regrets);
  s.mean_best_cost = mean(best_costs);
  s.median_best_cost = median(best_costs);
  s.frac_cmw_beats_mw_expected =
      static_cast<double>(beats_expected) / static_cast<double>(s.trials);
  s.frac_cmw_beats_mw_realized =
      static_cast<double>(beats_realized) / static_cast<double>(s.trials);
  s.frac_cmw_negative_regret =
      static_cast<double>(negative) / static_cast<double>(s.trials);

  double lo = *std::min_element(best_costs.begin(), best_costs.end());
  double hi = lo;
  for (const auto* v : {&cmw_costs, &mw_costs, &best_costs}) {
    lo = std::min(lo, *std::min_element(v->begin(), v->end()));
    hi = std::max(hi, *std::max_element(v->begin(), v->end()));
  }
  double width = bin_width > 0.0 ? bin_width : (hi - lo) / 20.0;
  if (!(width > 0.0)) width = 1.0;  // all costs identical
  int bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  s.cmw.expected_cost_hist = make_histogram(cmw_costs, lo, width, bins);
  s.mw.expected_cost_hist = make_histogram(mw_costs, lo, width, bins);
  s.best_cost_hist = make_histogram(best_costs, lo, width, bins);
  return s;
}

}  // namespace cmw
