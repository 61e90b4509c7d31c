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

#include "cmw/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cmw/lp.hpp"
#include "cmw/qp.hpp"

namespace cmw {

namespace {

// Options that survive pruning *and* carry positive weight. Weight that sits
// on dominated options is dropped and the remainder renormalized, matching
// the rule "set p_i = 0 and w_i = 0 for dominated i".
struct ReducedGame {
  std::vector<int> active;
  std::vector<double> u;      // renormalized, indexed by position in active
  std::vector<double> lower;  // reduced box
  std::vector<double> upper;
};

// Weights below this floor are numerically indistinguishable from zero for
// every quantity the solvers influence (their contribution to the objective
// is O(u L^2 / (eps L))), and keeping them would poison the conditioning of
// the q recovery.
constexpr double kWeightFloor = 1e-12;

ReducedGame reduce(std::span<const double> u, const BoxConstraint& box) {
  if (u.size() != box.size()) {
    throw std::invalid_argument("weights and box must have equal length");
  }
  PruneResult pruned = prune_dominated(box);
  ReducedGame g;
  double mass = 0.0;
  for (int i : pruned.active) {
    auto idx = static_cast<std::size_t>(i);
    if (u[idx] > kWeightFloor) {
      g.active.push_back(i);
      g.u.push_back(u[idx]);
      g.lower.push_back(box.lower()[idx]);
      g.upper.push_back(box.upper()[idx]);
      mass += u[idx];
    }
  }
  if (g.active.empty() || !(mass > 0.0)) {
    throw std::invalid_argument("all weight sits on dominated options");
  }
  for (double& ui : g.u) ui /= mass;
  return g;
}

// Enforce the direction invariants exactly: zero sum over the active
// coordinates and every probability constraint respected, by a mean shift
// and (if roundoff pushed a constraint past its cap) a contraction toward
// zero. Both operations move the objective by O(roundoff).
void snap_feasible(std::vector<double>* q, std::span<const double> u,
                   double eps, std::span<const int> active) {
  // Neumaier-compensated sum: the shift should not inherit cancellation
  // error when entries span many orders of magnitude.
  double sum = 0.0, comp = 0.0;
  for (int i : active) {
    double v = (*q)[static_cast<std::size_t>(i)];
    double t = sum + v;
    comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double shift = (sum + comp) / static_cast<double>(active.size());
  for (int i : active) (*q)[static_cast<std::size_t>(i)] -= shift;
  double uq = dot(u, *q);
  double worst = 0.0;
  for (std::size_t i = 0; i < q->size(); ++i) {
    worst = std::max(worst, 0.5 * eps * ((*q)[i] - uq));
  }
  if (worst > 1.0) {
    double scale = 1.0 / worst;
    for (double& qi : *q) qi *= scale;
  }
}

SolverOutcome trivial_outcome(std::size_t m) {
  SolverOutcome out;
  out.q.assign(m, 0.0);
  out.value = 0.0;
  return out;
}

// Closed form on a reduced two-option game; returns (q_first, value).
std::pair<double, double> m2_direction(double u1, double u2, double eps,
                                       double lo1, double hi1, double lo2,
                                       double hi2) {
  double a = hi1 - lo2;
  double b = lo1 - hi2;
  if (a < 0.0 || b > 0.0) {
    throw std::invalid_argument("intervals must overlap (prune first)");
  }
  double mu1 = 0.5 * ((lo1 + hi1) - (lo2 + hi2));
  double lo_thr = (u1 > 0.0) ? -1.0 / (eps * u1)
                             : -std::numeric_limits<double>::infinity();
  double hi_thr = (u2 > 0.0) ? 1.0 / (eps * u2)
                             : std::numeric_limits<double>::infinity();
  double q1 = std::clamp(mu1, lo_thr, hi_thr);
  double z = 2.0 * q1;
  double value = u1 * u2 * std::max(a * (a - z), b * (b - z));
  return {q1, value};
}

}  // namespace

PruneResult prune_dominated(const BoxConstraint& box) {
  const std::size_t m = box.size();
  // The smallest-index option with the smallest upper bound is kept
  // unconditionally; it weakly dominates anything that could prune it.
  std::size_t keeper = 0;
  for (std::size_t j = 1; j < m; ++j) {
    if (box.upper()[j] < box.upper()[keeper]) keeper = j;
  }
  PruneResult out;
  for (std::size_t i = 0; i < m; ++i) {
    bool dominated = false;
    if (i != keeper) {
      for (std::size_t j = 0; j < m && !dominated; ++j) {
        if (j != i && box.lower()[i] >= box.upper()[j]) dominated = true;
      }
    }
    if (dominated) {
      out.fixed_zero.push_back(static_cast<int>(i));
    } else {
      out.active.push_back(static_cast<int>(i));
    }
  }
  return out;
}

double objective_value(std::span<const double> u, std::span<const double> l,
                       std::span<const double> q) {
  if (u.size() != l.size() || u.size() != q.size()) {
    throw std::invalid_argument("objective_value size mismatch");
  }
  double ul = dot(u, l);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += u[i] * (l[i] - ul) * (l[i] - q[i]);
  }
  return s;
}

double objective_value_pairwise(std::span<const double> u,
                                std::span<const double> l,
                                std::span<const double> q) {
  if (u.size() != l.size() || u.size() != q.size()) {
    throw std::invalid_argument("objective_value size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      double dl = l[i] - l[j];
      double dq = q[i] - q[j];
      s += 0.5 * u[i] * u[j] * (dl * dl - dl * dq);
    }
  }
  return s;
}

double approx_value_bound(std::span<const double> u, const BoxConstraint& box) {
  if (u.size() != box.size()) {
    throw std::invalid_argument("approx_value_bound size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (i == j) continue;
      s += 0.5 * u[i] * u[j] * (box.upper()[i] - box.lower()[j]) *
           (box.upper()[j] - box.lower()[i]);
    }
  }
  return s;
}

SolverOutcome solve_exact(std::span<const double> u, double eps,
                          const BoxConstraint& box) {
  if (box.size() > 16) {
    throw SolverError("use approximate solver (corner enumeration beyond 16)");
  }
  ReducedGame g = reduce(u, box);
  const int n = static_cast<int>(g.active.size());
  const std::size_t num_corners = std::size_t{1} << n;

  // Environment-side LP in the scaled direction y = diag(u) q, which keeps
  // every coefficient O(L) no matter how lopsided the weights are (the
  // objective is invariant along q + delta 1, so the zero-sum normalization
  // may be replaced by u'q = 0 and restored afterwards). Variables: one
  // probability per reduced corner, one multiplier per probability
  // constraint, one free normalizer. The agent's (r*, y) fall out as the
  // duals of the n+1 equality rows:
  //   row 0:          sum_c lambda_c = 1                         (dual -r*)
  //   row k = 1..n:   sum_c (c_k - u'c) lambda_c
  //                     - (eps/2) sum_j (delta_jk - u_j) nu_j
  //                     + tau = 0                                (dual -y_k)
  // maximizing sum_c (c'Qc) lambda_c - sum_j u_j nu_j.
  const int var_lambda = 0;
  const int var_nu = static_cast<int>(num_corners);
  const int var_tau = var_nu + n;
  LinearProgram lp = LinearProgram::with_vars(var_tau + 1);
  lp.set_free(var_tau);

  std::vector<std::vector<double>> rows(
      static_cast<std::size_t>(n) + 1,
      std::vector<double>(static_cast<std::size_t>(var_tau) + 1, 0.0));
  std::vector<double> corner(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < num_corners; ++c) {
    double uc = 0.0;
    for (int k = 0; k < n; ++k) {
      corner[static_cast<std::size_t>(k)] =
          ((c >> k) & 1u) ? g.upper[static_cast<std::size_t>(k)]
                          : g.lower[static_cast<std::size_t>(k)];
      uc += g.u[static_cast<std::size_t>(k)] * corner[static_cast<std::size_t>(k)];
    }
    double variance = 0.0;
    for (int k = 0; k < n; ++k) {
      double centered = corner[static_cast<std::size_t>(k)] - uc;
      variance += g.u[static_cast<std::size_t>(k)] * centered * centered;
      rows[static_cast<std::size_t>(k) + 1][var_lambda + c] = centered;
    }
    lp.objective[var_lambda + c] = -variance;  // maximize E[c'Qc]
    rows[0][var_lambda + c] = 1.0;
  }
  for (int j = 0; j < n; ++j) {
    lp.objective[static_cast<std::size_t>(var_nu + j)] =
        g.u[static_cast<std::size_t>(j)];
    for (int k = 0; k < n; ++k) {
      double delta = (j == k) ? 1.0 : 0.0;
      rows[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(var_nu + j)] =
          -0.5 * eps * (delta - g.u[static_cast<std::size_t>(j)]);
    }
  }
  for (int k = 0; k < n; ++k) {
    rows[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(var_tau)] = 1.0;
  }
  lp.add_row(std::move(rows[0]), RowSense::kEq, 1.0);
  for (int k = 0; k < n; ++k) {
    lp.add_row(std::move(rows[static_cast<std::size_t>(k) + 1]), RowSense::kEq, 0.0);
  }

  LpSolution sol = lp_solve_or_throw(lp, "solve_exact");

  SolverOutcome out;
  out.q.assign(box.size(), 0.0);
  for (int k = 0; k < n; ++k) {
    out.q[static_cast<std::size_t>(g.active[static_cast<std::size_t>(k)])] =
        -sol.duals[static_cast<std::size_t>(k) + 1] /
        g.u[static_cast<std::size_t>(k)];
  }
  std::vector<double> u_pruned(box.size(), 0.0);
  for (int k = 0; k < n; ++k) {
    u_pruned[static_cast<std::size_t>(g.active[static_cast<std::size_t>(k)])] =
        g.u[static_cast<std::size_t>(k)];
  }
  snap_feasible(&out.q, u_pruned, eps, g.active);
  out.value = -sol.objective;

  // Corner probabilities, remapped to full-box corner indices with pruned
  // coordinates pinned to their lower bound.
  std::map<int, double> strategy;
  double mass = 0.0;
  for (std::size_t c = 0; c < num_corners; ++c) {
    double p = sol.x[var_lambda + c];
    if (p <= 0.0) continue;
    int full = 0;
    for (int k = 0; k < n; ++k) {
      if ((c >> k) & 1u) full |= 1 << g.active[static_cast<std::size_t>(k)];
    }
    strategy[full] += p;
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-7) {
    throw SolverError("solve_exact: corner probabilities sum to " +
                      std::to_string(mass));
  }
  for (auto& [idx, p] : strategy) p /= mass;
  out.duals = std::move(strategy);
  return out;
}

SolverOutcome solve_m2(std::span<const double> u, double eps,
                       const BoxConstraint& box) {
  if (box.size() != 2 || u.size() != 2) {
    throw std::invalid_argument("solve_m2 requires exactly two options");
  }
  auto [q1, value] = m2_direction(u[0], u[1], eps, box.lower()[0],
                                  box.upper()[0], box.lower()[1],
                                  box.upper()[1]);
  SolverOutcome out;
  out.q = {q1, -q1};
  out.value = value;
  std::vector<int> active = {0, 1};
  snap_feasible(&out.q, u, eps, active);
  return out;
}

SolverOutcome solve_approx(std::span<const double> u, double eps,
                           const BoxConstraint& box) {
  ReducedGame g = reduce(u, box);
  const std::size_t n = g.active.size();
  SolverOutcome out;
  out.q.assign(box.size(), 0.0);
  if (n == 1) return out;

  std::vector<double> mu(n);
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) mean += g.upper[k] + g.lower[k];
  mean /= static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) mu[k] = g.upper[k] + g.lower[k] - mean;

  FeasibleSetSpec set{g.u, eps};
  std::vector<double> q_reduced = qp_project(mu, set);

  std::vector<double> u_pruned(box.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out.q[static_cast<std::size_t>(g.active[k])] = q_reduced[k];
    u_pruned[static_cast<std::size_t>(g.active[k])] = g.u[k];
  }
  snap_feasible(&out.q, u_pruned, eps, g.active);
  out.value = approx_value_bound(
      g.u, BoxConstraint(g.lower, g.upper));
  return out;
}

SolverOutcome solve(SolverKind kind, std::span<const double> u, double eps,
                    const BoxConstraint& box) {
  if (kind == SolverKind::kClosedFormM2 && box.size() != 2) {
    throw std::invalid_argument("closed-form solver requires m = 2");
  }
  if (kind == SolverKind::kExactLp && box.size() > 16) {
    throw SolverError("use approximate solver (corner enumeration beyond 16)");
  }
  ReducedGame g = reduce(u, box);
  if (g.active.size() == 1) return trivial_outcome(box.size());
  if (g.active.size() == 2) {
    auto [q1, value] =
        m2_direction(g.u[0], g.u[1], eps, g.lower[0], g.upper[0], g.lower[1],
                     g.upper[1]);
    SolverOutcome out;
    out.q.assign(box.size(), 0.0);
    out.q[static_cast<std::size_t>(g.active[0])] = q1;
    out.q[static_cast<std::size_t>(g.active[1])] = -q1;
    out.value = value;
    std::vector<double> u_pruned(box.size(), 0.0);
    u_pruned[static_cast<std::size_t>(g.active[0])] = g.u[0];
    u_pruned[static_cast<std::size_t>(g.active[1])] = g.u[1];
    snap_feasible(&out.q, u_pruned, eps, g.active);
    return out;
  }
  if (kind == SolverKind::kExactLp) return solve_exact(u, eps, box);
  return solve_approx(u, eps, box);
}

}  // namespace cmw
