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

// Runtime verification suites: semi-definiteness of the curvature matrix,
// solver cross-checks, regret-bound checks over a seeded game battery, and
// equilibrium certification. Shared by the `verify` command and the
// acceptance tests.

#pragma once

#include <cstdint>
#include <string>

namespace cmw {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Seeded battery game: option counts cycle 2..10, horizons 10..200, and the
// environment rotates among iid random intervals, adaptive worst-case corner
// play, and Bernoulli corners of the unit box. Losses stay in [0, 1].
struct BatteryGameResult {
  int m = 0;
  int T = 0;
  int env_kind = 0;
  double hedge_regret = 0.0;
  double hedge_bound = 0.0;
  double cmw_regret = 0.0;
  double cmw_bound = 0.0;
  double claim1_violation = 0.0;
  double claim2_violation = 0.0;
  double r_tilde_cap_violation = 0.0;
};

BatteryGameResult play_battery_game(int index, std::uint64_t seed,
                                    bool run_hedge, bool run_cmw);

// Min eigenvalue of Q = diag(u) - uu' over random weight vectors must stay
// above -1e-10, and Q applied to the all-ones vector must vanish.
SuiteResult run_psd_suite(int vectors, std::uint64_t seed);

// Cross-checks the three inner solvers against each other and against the
// corner structure of the objective.
SuiteResult run_solver_suite(int instances, std::uint64_t seed);

// Regret <= bound for both algorithms over `games` battery games, plus the
// step-size bookkeeping inequalities every step.
SuiteResult run_bounds_suite(int games, std::uint64_t seed);

// Equilibrium gap of the worst-case strategy on random instances.
SuiteResult run_equilibrium_suite(int instances, int max_m, std::uint64_t seed);

}  // namespace cmw
