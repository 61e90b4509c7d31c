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

// The environment's worst-case randomized play over box corners. By minimax
// duality the optimal corner distribution comes out of the same linear
// program that computes the agent's direction, and it guarantees expected
// second-order cost at least r* against every feasible direction.

#pragma once

#include <map>

#include "cmw/core.hpp"
#include "cmw/solvers.hpp"

namespace cmw {

// Randomized environment play over corner indices (corners() ordering).
struct CornerStrategy {
  std::map<int, double> corner_probs;  // nonnegative, sums to one
};

struct Equilibrium {
  CornerStrategy strategy;
  double r_star = 0.0;
};

// Corner distribution certified to achieve expected objective >= r* against
// every feasible q; exactly the dual of the exact solver's LP. m <= 16.
Equilibrium worst_case_strategy(std::span<const double> u, double eps,
                                const BoxConstraint& box);

// r* minus the strategy's guaranteed value min_q E[l'Q(l - q)]; a gap within
// 1e-6 certifies the strategy as an equilibrium play.
double verify_equilibrium(const CornerStrategy& strategy,
                          std::span<const double> u, double eps,
                          const BoxConstraint& box);

// One round of worst-case play: recomputes the strategy for the current
// weights (caching across rounds would be stale as soon as u drifts) and
// samples a corner.
LossVector adversarial_loss(std::span<const double> u, double eps,
                            const BoxConstraint& box, Pcg32& rng);

}  // namespace cmw
