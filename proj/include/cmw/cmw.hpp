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

// Constraint-aware multiplicative weights with an adaptive step size. Each
// round: shrink the step size according to the accumulated second-order
// values, form the exponential weights, ask an inner solver for the best
// direction q against the revealed constraint box, tilt the distribution
//   p = u - (eps / 2) Q q,
// then record r_tilde = max(l'Q(l - q), r_bar) from the revealed loss.

#pragma once

#include <optional>
#include <vector>

#include "cmw/core.hpp"
#include "cmw/curvature.hpp"
#include "cmw/solvers.hpp"

namespace cmw {

struct CmwConfig {
  int m = 0;
  int T = 0;
  double c1 = 1e-2;
  double c2 = 0.0;
  LossRange L;
  SolverKind solver_kind = SolverKind::kExactLp;
  // True when c2 equals 2 ln(m) L^2, the schedule the regret bound and the
  // two step-size bookkeeping inequalities are proved for.
  bool default_c2 = true;

  // c2 defaults to 2 ln(m) L^2 when not supplied.
  static CmwConfig make(int m, int T, LossRange L, SolverKind solver_kind,
                        double c1 = 1e-2,
                        std::optional<double> c2 = std::nullopt);
};

struct CmwState {
  std::vector<double> cumulative;      // per-option loss totals
  std::vector<double> r_tilde_trace;   // recorded second-order values
  double r_tilde_sum = 0.0;
  double r_bar = 0.0;                  // floor on every recorded r_tilde
  int step = 0;

  // Step-size bookkeeping inequalities, tracked with default c2:
  //   (1) sum_j r_tilde_j / sqrt(s_{j-1})  <=  2 sqrt(2 s_t)
  //   (2) sum_j 1 / s_{j-1}  <=  ln(4 s_t / L^2) / r_bar + 1 / c2
  // where s_t = c2 + sum_{j<=t} r_tilde_j. The worst signed violation is
  // recorded every step; it must stay <= 1e-9 on sound runs.
  double claim1_lhs = 0.0;
  double claim2_lhs = 0.0;
  double claim1_violation = 0.0;
  double claim2_violation = 0.0;
  // Worst excess of r_tilde over L^2/4, recorded on exact-direction rounds.
  double r_tilde_cap_violation = 0.0;
};

// Floor c1 * ln(m)^{2/3} * L^2 * T^{-1/3} that keeps the adaptive step size
// from collapsing.
double r_bar(const CmwConfig& config);

// Adaptive step size sqrt(2 ln(m) / (c2 + r_tilde_sum)); strictly decreasing
// in the accumulated second-order values.
double epsilon_for(double r_tilde_sum, const CmwConfig& config);

// Tilted distribution u - (eps/2) Q q. Throws std::invalid_argument
// ("direction outside feasible set") when q fails membership.
Distribution distribution(std::span<const double> u, double eps,
                          std::span<const double> q);

struct BoundValue {
  double value = 0.0;
  // False when the configuration is not on the proved c2 schedule; the
  // number is then advisory.
  bool default_c2 = true;
};

// Instance-dependent regret bound at the current accumulated second-order
// values:
//   3 sqrt(ln(m) S) + (7 ln(m) L^3 / (4 r_bar)) ln(8 ln(m) + 4 S / L^2).
BoundValue regret_bound(const CmwState& state, const CmwConfig& config);

// Records one revealed loss: protocol check against the round's box, then
// r_tilde update and claim bookkeeping. `exact_direction` marks rounds whose
// q came from an exact inner solver, for which r_tilde <= L^2/4 is also
// checked. Returns the recorded r_tilde.
double observe(CmwState& state, const CmwConfig& config,
               std::span<const double> u, std::span<const double> q,
               const LossVector& loss, const BoxConstraint& box,
               bool exact_direction);

// True when the per-step inequality checks raise InvariantError instead of
// only recording violations: debug builds, or CMW_DEBUG_ASSERT=1.
bool claims_assert_enabled();

// Everything the agent committed to for one round.
struct RoundPlan {
  double epsilon = 0.0;
  std::vector<double> u;   // pruned, renormalized weights (zeros on dominated)
  SolverOutcome outcome;
  Distribution p;
  BoxConstraint box;
  bool exact_direction = false;
};

class CmwEngine {
 public:
  explicit CmwEngine(const CmwConfig& config);

  const CmwConfig& config() const { return config_; }
  const CmwState& state() const { return state_; }

  RoundPlan plan_round(const BoxConstraint& box) const;
  double commit(const RoundPlan& plan, const LossVector& loss);
  BoundValue bound() const { return regret_bound(state_, config_); }

 private:
  CmwConfig config_;
  CmwState state_;
};

}  // namespace cmw
