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

#include "cmw/adversary.hpp"

#include <cmath>
#include <vector>

#include "cmw/curvature.hpp"
#include "cmw/lp.hpp"

namespace cmw {

namespace {

// Weights actually defining the round's curvature: zero on dominated
// options, renormalized over the rest. Mirrors the reduction the solvers
// apply so that strategy and certification use the same game.
std::vector<double> pruned_weights(std::span<const double> u,
                                   const BoxConstraint& box) {
  PruneResult pruned = prune_dominated(box);
  std::vector<double> out(u.size(), 0.0);
  double mass = 0.0;
  for (int i : pruned.active) {
    auto idx = static_cast<std::size_t>(i);
    if (u[idx] > 0.0) {
      out[idx] = u[idx];
      mass += u[idx];
    }
  }
  if (!(mass > 0.0)) {
    throw std::invalid_argument("all weight sits on dominated options");
  }
  for (double& ui : out) ui /= mass;
  return out;
}

LossVector corner_from_index(const BoxConstraint& box, int index) {
  std::vector<double> c(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    c[i] = ((index >> i) & 1) ? box.upper()[i] : box.lower()[i];
  }
  return LossVector(std::move(c));
}

}  // namespace

Equilibrium worst_case_strategy(std::span<const double> u, double eps,
                                const BoxConstraint& box) {
  SolverOutcome outcome = solve_exact(u, eps, box);
  Equilibrium eq;
  eq.r_star = outcome.value;
  eq.strategy.corner_probs = std::move(*outcome.duals);
  return eq;
}

double verify_equilibrium(const CornerStrategy& strategy,
                          std::span<const double> u, double eps,
                          const BoxConstraint& box) {
  const std::size_t m = box.size();
  std::vector<double> w = pruned_weights(u, box);
  CurvatureMatrix qmat(w);

  // Expected objective is K - g'q with K = E[l'Ql] and g = Q E[l]; both are
  // plain averages over the strategy's support.
  double k_const = 0.0;
  std::vector<double> mean_loss(m, 0.0);
  double mass = 0.0;
  for (const auto& [index, prob] : strategy.corner_probs) {
    if (prob < -1e-9) {
      throw std::invalid_argument("corner strategy has negative probability");
    }
    LossVector corner = corner_from_index(box, index);
    k_const += prob * qmat.quad(corner.values(), corner.values());
    for (std::size_t i = 0; i < m; ++i) mean_loss[i] += prob * corner[i];
    mass += prob;
  }
  if (std::abs(mass - 1.0) > 1e-7) {
    throw std::invalid_argument("corner strategy does not sum to one");
  }
  std::vector<double> g = qmat.apply(mean_loss);

  // Minimize K - g'q over the feasible set: one equality, m cap rows.
  LinearProgram lp = LinearProgram::with_vars(static_cast<int>(m));
  for (std::size_t j = 0; j < m; ++j) {
    lp.set_free(static_cast<int>(j));
    lp.objective[j] = -g[j];
  }
  lp.add_row(std::vector<double>(m, 1.0), RowSense::kEq, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) {
      row[j] = 0.5 * eps * ((i == j ? 1.0 : 0.0) - w[j]);
    }
    lp.add_row(std::move(row), RowSense::kLe, 1.0);
  }
  LpSolution sol = lp_solve_or_throw(lp, "verify_equilibrium");
  double guaranteed = k_const + sol.objective;

  double r_star = solve_exact(u, eps, box).value;
  return r_star - guaranteed;
}

LossVector adversarial_loss(std::span<const double> u, double eps,
                            const BoxConstraint& box, Pcg32& rng) {
  Equilibrium eq = worst_case_strategy(u, eps, box);
  double draw = rng.uniform01();
  double acc = 0.0;
  int chosen = eq.strategy.corner_probs.begin()->first;
  for (const auto& [index, prob] : eq.strategy.corner_probs) {
    chosen = index;
    acc += prob;
    if (draw < acc) break;
  }
  return corner_from_index(box, chosen);
}

}  // namespace cmw
