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

// Per-round solvers for the direction q: the exact minmax over box corners
// (a linear program), the closed form for two options, and the Euclidean
// projection approximation for many options. All three prune dominated
// options first: an option whose lower bound clears some other option's
// upper bound never deserves probability, so its weight is zeroed and its q
// entry reported as zero.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cmw/core.hpp"
#include "cmw/curvature.hpp"

namespace cmw {

enum class SolverKind { kExactLp, kClosedFormM2, kApproximate };

struct SolverOutcome {
  std::vector<double> q;  // full length; zero on pruned options
  // Exact solver: the minmax value r*. Approximate solver: a certified upper
  // bound on the worst-case objective at q.
  double value = 0.0;
  // Exact solver only: optimal randomized environment play as probabilities
  // over corner indices (corners() ordering, pruned coordinates pinned to
  // their lower bound). Sums to one.
  std::optional<std::map<int, double>> duals;
};

struct PruneResult {
  std::vector<int> active;      // surviving options, ascending
  std::vector<int> fixed_zero;  // dominated options, ascending
};

// Option i is dominated when lower[i] >= upper[j] for some j != i. The
// smallest-index option attaining the smallest upper bound always survives,
// which also resolves mutual domination between identical degenerate
// intervals.
PruneResult prune_dominated(const BoxConstraint& box);

// Worst-case second-order objective l'Q(l - q) with Q = diag(u) - uu'.
double objective_value(std::span<const double> u, std::span<const double> l,
                       std::span<const double> q);

// Same quantity in its pairwise form
//   sum_{i,j} (u_i u_j / 2) [ (l_i - l_j)^2 - (l_i - l_j)(q_i - q_j) ],
// kept as an independent self-check of objective_value.
double objective_value_pairwise(std::span<const double> u,
                                std::span<const double> l,
                                std::span<const double> q);

// Upper bound sum_{i != j} (u_i u_j / 2) (upper_i - lower_j)(upper_j - lower_i)
// achieved by the projection solver. `u` and `box` must already be pruned to
// overlapping intervals for the bound to be meaningful.
double approx_value_bound(std::span<const double> u, const BoxConstraint& box);

// Exact minmax over the box corners via a linear program in the environment
// orientation: variables are corner probabilities, and the agent's (q, r*)
// appear as the duals of its m+1 equality rows. Capped at 16 options.
SolverOutcome solve_exact(std::span<const double> u, double eps,
                          const BoxConstraint& box);

// Closed form for exactly two overlapping intervals: q_1 is the difference
// of interval midpoints clamped to the feasible range, q_2 = -q_1.
SolverOutcome solve_m2(std::span<const double> u, double eps,
                       const BoxConstraint& box);

// Euclidean projection of the midpoint-offset vector mu onto the feasible
// set (exact KKT via the active-set kernel). The value field carries the
// certified upper bound above.
SolverOutcome solve_approx(std::span<const double> u, double eps,
                           const BoxConstraint& box);

// Dispatch used by the engine: prune, then one surviving option is trivial,
// two use the closed form, otherwise the requested solver.
SolverOutcome solve(SolverKind kind, std::span<const double> u, double eps,
                    const BoxConstraint& box);

}  // namespace cmw
