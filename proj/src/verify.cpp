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

#include "cmw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "cmw/adversary.hpp"
#include "cmw/curvature.hpp"
#include "cmw/experiments.hpp"

namespace cmw {

namespace {

std::vector<double> random_simplex(int m, Pcg32& rng, double spikiness) {
  std::vector<double> u(static_cast<std::size_t>(m));
  double sum = 0.0;
  for (double& ui : u) {
    ui = std::exp(spikiness * rng.uniform01()) * (1e-6 + rng.uniform01());
    sum += ui;
  }
  for (double& ui : u) ui /= sum;
  return u;
}

BoxConstraint random_box(int m, Pcg32& rng) {
  std::vector<double> lo(static_cast<std::size_t>(m)),
      hi(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double a = rng.uniform01();
    double b = rng.uniform01();
    lo[static_cast<std::size_t>(i)] = std::min(a, b);
    hi[static_cast<std::size_t>(i)] = std::max(a, b);
  }
  return BoxConstraint(std::move(lo), std::move(hi));
}

// Overlapping random box: no option dominates another.
BoxConstraint random_overlapping_box(int m, Pcg32& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    BoxConstraint box = random_box(m, rng);
    if (prune_dominated(box).fixed_zero.empty()) return box;
  }
  // Intervals sharing a common point always overlap pairwise.
  std::vector<double> lo(static_cast<std::size_t>(m)),
      hi(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    lo[static_cast<std::size_t>(i)] = 0.4 * rng.uniform01();
    hi[static_cast<std::size_t>(i)] = 0.5 + 0.5 * rng.uniform01();
  }
  return BoxConstraint(std::move(lo), std::move(hi));
}

}  // namespace

BatteryGameResult play_battery_game(int index, std::uint64_t seed,
                                    bool run_hedge, bool run_cmw) {
  BatteryGameResult out;
  out.m = 2 + index % 9;
  out.T = 10 + (index * 37) % 191;
  out.env_kind = index % 3;
  const double L = 1.0;
  TrialStreams streams(seed, index);

  std::vector<PregenEnvironment::Step> steps;
  std::vector<BoxConstraint> boxes;
  if (out.env_kind == 1) {
    for (int t = 0; t < out.T; ++t) boxes.push_back(random_box(out.m, streams.env));
  } else {
    const auto m = static_cast<std::size_t>(out.m);
    for (int t = 0; t < out.T; ++t) {
      if (out.env_kind == 0) {
        BoxConstraint box = random_box(out.m, streams.env);
        std::vector<double> loss(m);
        for (std::size_t i = 0; i < m; ++i) {
          loss[i] = streams.env.uniform(box.lower()[i], box.upper()[i]);
        }
        steps.push_back({std::move(box), LossVector(std::move(loss))});
      } else {
        // Unit box, independent fair-coin corners: the classical hostile
        // environment for the fixed-step baseline.
        BoxConstraint box(std::vector<double>(m, 0.0), std::vector<double>(m, 1.0));
        std::vector<double> loss(m);
        for (std::size_t i = 0; i < m; ++i) {
          loss[i] = streams.env.uniform01() < 0.5 ? 0.0 : 1.0;
        }
        steps.push_back({std::move(box), LossVector(std::move(loss))});
      }
    }
  }

  if (run_hedge) {
    TrialRecord rec;
    if (out.env_kind == 1) {
      CornerAdversaryEnvironment env(boxes, streams.mw_env);
      rec = play_hedge_game(env, out.m, out.T, L, streams.mw_actions);
    } else {
      PregenEnvironment env(steps);
      rec = play_hedge_game(env, out.m, out.T, L, streams.mw_actions);
    }
    out.hedge_regret = rec.final_regret;
    out.hedge_bound = hedge_regret_bound(out.m, out.T, L);
  }
  if (run_cmw) {
    SolverKind kind =
        out.m == 2 ? SolverKind::kClosedFormM2 : SolverKind::kExactLp;
    CmwConfig config = CmwConfig::make(out.m, out.T, LossRange{L}, kind);
    CmwEngine engine(config);
    Pcg32& action_rng = streams.cmw_actions;
    std::unique_ptr<Environment> env;
    if (out.env_kind == 1) {
      env = std::make_unique<CornerAdversaryEnvironment>(boxes, streams.cmw_env);
    } else {
      env = std::make_unique<PregenEnvironment>(steps);
    }
    GameHistory history(static_cast<std::size_t>(out.m));
    for (int t = 0; t < out.T; ++t) {
      BoxConstraint box = env->next_box();
      RoundPlan plan = engine.plan_round(box);
      int action = sample(plan.p, action_rng);
      LossVector loss = env->reveal(box, plan.u, plan.epsilon);
      engine.commit(plan, loss);
      history.record(plan.p, loss, action);
    }
    out.cmw_regret = regret(history);
    out.cmw_bound = engine.bound().value;
    out.claim1_violation = engine.state().claim1_violation;
    out.claim2_violation = engine.state().claim2_violation;
    out.r_tilde_cap_violation = engine.state().r_tilde_cap_violation;
  }
  return out;
}

SuiteResult run_psd_suite(int vectors, std::uint64_t seed) {
  Pcg32 rng(seed, 101);
  double min_eig = 0.0;
  double max_ones_residual = 0.0;
  for (int k = 0; k < vectors; ++k) {
    int m = 2 + k % 11;
    double spikiness = 12.0 * rng.uniform01();
    CurvatureMatrix q(random_simplex(m, rng, spikiness));
    min_eig = std::min(min_eig, min_eigenvalue_symmetric(q.dense()));
    std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
    for (double v : q.apply(ones)) {
      max_ones_residual = std::max(max_ones_residual, std::abs(v));
    }
  }
  SuiteResult res;
  res.name = "psd";
  res.passed = min_eig >= -1e-10 && max_ones_residual <= 1e-12;
  std::ostringstream os;
  os << vectors << " weight vectors, min eigenvalue " << min_eig
     << ", max |Q 1| " << max_ones_residual;
  res.detail = os.str();
  return res;
}

SuiteResult run_solver_suite(int instances, std::uint64_t seed) {
  Pcg32 rng(seed, 202);
  double max_value_diff_m2 = 0.0;   // exact LP vs closed form
  double max_q_diff_m2 = 0.0;       // and vs projection
  double max_corner_gap = 0.0;      // |r* - best corner at q*|
  double max_bound_breach = 0.0;    // projection bound vs realized corners
  double max_interior_excess = 0.0; // interior point above best corner

  for (int k = 0; k < instances; ++k) {
    {
      BoxConstraint box = random_overlapping_box(2, rng);
      std::vector<double> u = random_simplex(2, rng, 3.0);
      double eps = 0.1 * (0.1 + 0.9 * rng.uniform01());  // eps * L <= 0.1
      SolverOutcome exact = solve_exact(u, eps, box);
      SolverOutcome m2 = solve_m2(u, eps, box);
      SolverOutcome approx = solve_approx(u, eps, box);
      max_value_diff_m2 =
          std::max(max_value_diff_m2, std::abs(exact.value - m2.value));
      for (int i = 0; i < 2; ++i) {
        auto idx = static_cast<std::size_t>(i);
        max_q_diff_m2 = std::max(max_q_diff_m2,
                                 std::abs(exact.q[idx] - m2.q[idx]));
        max_q_diff_m2 = std::max(max_q_diff_m2,
                                 std::abs(approx.q[idx] - m2.q[idx]));
      }
    }
    {
      int m = 3 + k % 3;
      BoxConstraint box = random_box(m, rng);
      std::vector<double> u = random_simplex(m, rng, 3.0);
      double eps = 0.1 * (0.1 + 0.9 * rng.uniform01());
      SolverOutcome exact = solve_exact(u, eps, box);
      std::vector<double> w(u.size(), 0.0);
      {
        // Reduced weights actually defining the game.
        PruneResult pruned = prune_dominated(box);
        double mass = 0.0;
        for (int i : pruned.active) {
          w[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
          mass += u[static_cast<std::size_t>(i)];
        }
        for (double& wi : w) wi /= mass;
      }
      double best_corner = -1e300;
      for (const LossVector& c : corners(box)) {
        best_corner = std::max(
            best_corner, objective_value(w, c.values(), exact.q));
      }
      max_corner_gap =
          std::max(max_corner_gap, std::abs(exact.value - best_corner));

      SolverOutcome approx = solve_approx(u, eps, box);
      double best_at_qhat = -1e300;
      for (const LossVector& c : corners(box)) {
        best_at_qhat = std::max(
            best_at_qhat, objective_value(w, c.values(), approx.q));
      }
      max_bound_breach =
          std::max(max_bound_breach, best_at_qhat - approx.value);

      for (int s = 0; s < 100; ++s) {
        std::vector<double> interior(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
          auto idx = static_cast<std::size_t>(i);
          interior[idx] = rng.uniform(box.lower()[idx], box.upper()[idx]);
        }
        max_interior_excess =
            std::max(max_interior_excess,
                     objective_value(w, interior, exact.q) - best_corner);
      }
    }
  }
  SuiteResult res;
  res.name = "solvers";
  res.passed = max_value_diff_m2 <= 1e-9 && max_q_diff_m2 <= 1e-6 &&
               max_corner_gap <= 1e-7 && max_bound_breach <= 1e-9 &&
               max_interior_excess <= 1e-9;
  std::ostringstream os;
  os << instances << " instances: |value(exact)-value(m2)| " << max_value_diff_m2
     << ", max q mismatch " << max_q_diff_m2 << ", corner-value gap "
     << max_corner_gap << ", projection bound breach " << max_bound_breach
     << ", interior excess " << max_interior_excess;
  res.detail = os.str();
  return res;
}

SuiteResult run_bounds_suite(int games, std::uint64_t seed) {
  double worst_hedge = -1e300;  // regret - bound, must stay <= tolerance
  double worst_cmw = -1e300;
  double worst_claim = 0.0;
  double worst_cap = 0.0;
  double max_ratio = 0.0;
  for (int g = 0; g < games; ++g) {
    BatteryGameResult r = play_battery_game(g, seed, true, true);
    worst_hedge = std::max(worst_hedge, r.hedge_regret - r.hedge_bound);
    worst_cmw = std::max(worst_cmw, r.cmw_regret - r.cmw_bound);
    worst_claim =
        std::max({worst_claim, r.claim1_violation, r.claim2_violation});
    worst_cap = std::max(worst_cap, r.r_tilde_cap_violation);
    if (r.hedge_bound > 0.0) {
      max_ratio = std::max(max_ratio, r.hedge_regret / r.hedge_bound);
    }
  }
  SuiteResult res;
  res.name = "bounds";
  res.passed = worst_hedge <= 1e-9 && worst_cmw <= 1e-9 &&
               worst_claim <= 1e-9 && worst_cap <= 1e-9;
  std::ostringstream os;
  os << games << " games: max (regret - bound) hedge " << worst_hedge
     << ", cmw " << worst_cmw << ", max hedge regret/bound ratio " << max_ratio
     << ", max claim violation " << worst_claim;
  res.detail = os.str();
  return res;
}

SuiteResult run_equilibrium_suite(int instances, int max_m,
                                  std::uint64_t seed) {
  Pcg32 rng(seed, 303);
  double max_gap = -1e300;
  for (int k = 0; k < instances; ++k) {
    int m = 2 + k % std::max(1, max_m - 1);
    BoxConstraint box = random_box(m, rng);
    std::vector<double> u = random_simplex(m, rng, 4.0);
    double eps = 0.02 + 0.2 * rng.uniform01();
    Equilibrium eq = worst_case_strategy(u, eps, box);
    double gap = verify_equilibrium(eq.strategy, u, eps, box);
    max_gap = std::max(max_gap, std::abs(gap));
  }
  SuiteResult res;
  res.name = "equilibrium";
  res.passed = max_gap <= 1e-6;
  std::ostringstream os;
  os << instances << " instances (m <= " << max_m << "), max |gap| " << max_gap;
  res.detail = os.str();
  return res;
}

}  // namespace cmw
