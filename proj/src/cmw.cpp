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

#include "cmw/cmw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

namespace cmw {

CmwConfig CmwConfig::make(int m, int T, LossRange L, SolverKind solver_kind,
                          double c1, std::optional<double> c2) {
  if (m < 2) throw std::invalid_argument("need at least two options");
  if (T < 1) throw std::invalid_argument("horizon must be positive");
  if (!(L.value > 0.0)) throw std::invalid_argument("loss range must be positive");
  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
  if (solver_kind == SolverKind::kClosedFormM2 && m != 2) {
    throw std::invalid_argument("closed-form solver requires m = 2");
  }
  CmwConfig cfg;
  cfg.m = m;
  cfg.T = T;
  cfg.c1 = c1;
  cfg.L = L;
  cfg.solver_kind = solver_kind;
  const double c2_default = 2.0 * std::log(static_cast<double>(m)) * L.value * L.value;
  if (c2.has_value()) {
    if (!(*c2 > 0.0)) throw std::invalid_argument("c2 must be positive");
    cfg.c2 = *c2;
    cfg.default_c2 = std::abs(*c2 - c2_default) <= 1e-12 * c2_default;
  } else {
    cfg.c2 = c2_default;
    cfg.default_c2 = true;
  }
  return cfg;
}

double r_bar(const CmwConfig& config) {
  double lg = std::log(static_cast<double>(config.m));
  return config.c1 * std::pow(lg, 2.0 / 3.0) * config.L.value * config.L.value *
         std::pow(static_cast<double>(config.T), -1.0 / 3.0);
}

double epsilon_for(double r_tilde_sum, const CmwConfig& config) {
  return std::sqrt(2.0 * std::log(static_cast<double>(config.m)) /
                   (config.c2 + r_tilde_sum));
}

Distribution distribution(std::span<const double> u, double eps,
                          std::span<const double> q) {
  FeasibleSetSpec set{std::vector<double>(u.begin(), u.end()), eps};
  if (!set.contains(q)) {
    throw std::invalid_argument("direction outside feasible set");
  }
  // The tilt d = Q q sums to zero analytically; enforce that numerically,
  // because u'q can be huge for near-degenerate weights and the cancellation
  // otherwise amplifies the roundoff of sum(u) into the probability sum.
  double uq = dot(u, q);
  std::vector<double> d(u.size());
  double tilt_sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d[i] = u[i] * (q[i] - uq);
    tilt_sum += d[i];
  }
  std::vector<double> p(u.size());
  const double clamp_tol = kFeasTol * std::max(1.0, 0.5 * eps * std::abs(uq));
  for (std::size_t i = 0; i < u.size(); ++i) {
    p[i] = u[i] - 0.5 * eps * (d[i] - u[i] * tilt_sum);
    if (p[i] < 0.0 && p[i] >= -clamp_tol) p[i] = 0.0;  // roundoff only
  }
  // Normalization happens once, inside the constructor, so the q = 0 path
  // stays bit-identical to the plain multiplicative-weights distribution.
  return Distribution(std::move(p));
}

BoundValue regret_bound(const CmwState& state, const CmwConfig& config) {
  double lg = std::log(static_cast<double>(config.m));
  double L = config.L.value;
  double S = state.r_tilde_sum;
  double value = 3.0 * std::sqrt(lg * S) +
                 (7.0 * lg * L * L * L / (4.0 * state.r_bar)) *
                     std::log(8.0 * lg + 4.0 * S / (L * L));
  return BoundValue{value, config.default_c2};
}

bool claims_assert_enabled() {
#ifndef NDEBUG
  return true;
#else
  static const bool enabled = [] {
    const char* v = std::getenv("CMW_DEBUG_ASSERT");
    return v != nullptr && v[0] == '1';
  }();
  return enabled;
#endif
}

double observe(CmwState& state, const CmwConfig& config,
               std::span<const double> u, std::span<const double> q,
               const LossVector& loss, const BoxConstraint& box,
               bool exact_direction) {
  if (loss.size() != state.cumulative.size() || box.size() != loss.size()) {
    throw std::invalid_argument("observe size mismatch");
  }
  if (!box.contains(loss.values())) {
    throw ProtocolError("environment violated constraint");
  }
  const double realized = objective_value(u, loss.values(), q);
  const double r_tilde = std::max(realized, state.r_bar);
  const double L = config.L.value;

  if (exact_direction) {
    double excess = r_tilde - (L * L / 4.0);
    state.r_tilde_cap_violation = std::max(state.r_tilde_cap_violation, excess);
    if (excess > kFeasTol && claims_assert_enabled()) {
      throw InvariantError("r_tilde exceeds L^2/4 by " + std::to_string(excess));
    }
  }

  if (config.default_c2) {
    const double s_prev = config.c2 + state.r_tilde_sum;
    const double s_new = s_prev + r_tilde;
    state.claim1_lhs += r_tilde / std::sqrt(s_prev);
    state.claim2_lhs += 1.0 / s_prev;
    double v1 = state.claim1_lhs - 2.0 * std::sqrt(2.0 * s_new);
    double v2 = state.claim2_lhs -
                (std::log(4.0 * s_new / (L * L)) / state.r_bar + 1.0 / config.c2);
    state.claim1_violation = std::max(state.claim1_violation, v1);
    state.claim2_violation = std::max(state.claim2_violation, v2);
    if ((v1 > kFeasTol || v2 > kFeasTol) && claims_assert_enabled()) {
      throw InvariantError("step-size bookkeeping inequality violated");
    }
  }

  for (std::size_t i = 0; i < loss.size(); ++i) {
    state.cumulative[i] += loss[i];
  }
  state.r_tilde_trace.push_back(r_tilde);
  state.r_tilde_sum += r_tilde;
  ++state.step;
  return r_tilde;
}

CmwEngine::CmwEngine(const CmwConfig& config) : config_(config) {
  state_.cumulative.assign(static_cast<std::size_t>(config_.m), 0.0);
  state_.r_bar = r_bar(config_);
  double eps0 = epsilon_for(0.0, config_);
  if (eps0 * config_.L.value > 1.0 + 1e-12) {
    std::cerr << "cmw: warning: initial step size " << eps0
              << " times loss range " << config_.L.value
              << " exceeds one; the second-order expansion is loose\n";
  }
}

RoundPlan CmwEngine::plan_round(const BoxConstraint& box) const {
  if (static_cast<int>(box.size()) != config_.m) {
    throw std::invalid_argument("box size does not match option count");
  }
  double eps = epsilon_for(state_.r_tilde_sum, config_);
  PruneResult pruned = prune_dominated(box);
  auto [w, phi] = shifted_exp_weights(state_.cumulative, eps, pruned.active);
  std::vector<double> u = std::move(w);
  for (double& ui : u) ui /= phi;

  SolverOutcome outcome = solve(config_.solver_kind, u, eps, box);

  int effective = 0;
  for (int i : pruned.active) {
    if (u[static_cast<std::size_t>(i)] > 0.0) ++effective;
  }
  bool exact = effective <= 2 || config_.solver_kind == SolverKind::kExactLp;

  Distribution p = distribution(u, eps, outcome.q);
  return RoundPlan{eps, std::move(u), std::move(outcome), std::move(p), box, exact};
}

double CmwEngine::commit(const RoundPlan& plan, const LossVector& loss) {
  return observe(state_, config_, plan.u, plan.outcome.q, loss, plan.box,
                 plan.exact_direction);
}

}  // namespace cmw
