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

#include "cmw/qp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmw {

namespace {

// Solves the dense system M z = rhs by Gaussian elimination with partial
// pivoting. Returns false on a (near-)singular pivot.
bool solve_dense(std::vector<std::vector<double>> m, std::vector<double> rhs,
                 std::vector<double>* z) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(m[r][k]) > std::abs(m[piv][k])) piv = r;
    }
    if (std::abs(m[piv][k]) < 1e-12) return false;
    std::swap(m[k], m[piv]);
    std::swap(rhs[k], rhs[piv]);
    for (std::size_t r = k + 1; r < n; ++r) {
      double f = m[r][k] / m[k][k];
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) m[r][c] -= f * m[k][c];
      rhs[r] -= f * rhs[k];
    }
  }
  z->assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= m[k][c] * (*z)[c];
    (*z)[k] = s / m[k][k];
  }
  return true;
}

}  // namespace

std::vector<double> qp_project(std::span<const double> mu,
                               const FeasibleSetSpec& set) {
  const std::size_t m = set.u.size();
  if (mu.size() != m) throw std::invalid_argument("qp_project size mismatch");
  if (!(set.epsilon > 0.0)) throw std::invalid_argument("qp_project needs eps > 0");
  const double cap = set.cap();
  const auto& u = set.u;

  // Constraint row i is a_i = e_i - u with a_i' q <= cap; the zero-sum
  // equality row is all ones. Gram entries are cheap closed forms:
  //   a_i . a_j = delta_ij - u_i - u_j + |u|^2,   a_i . 1 = 1 - sum(u) ...
  // computed directly below to keep the code obvious.
  auto a_dot_q = [&](std::size_t i, std::span<const double> q) {
    return q[i] - dot(u, q);
  };

  std::vector<double> q(m, 0.0);  // feasible start
  std::vector<int> working;       // active inequality indices
  std::vector<char> in_working(m, 0);

  const int iter_cap = 50 * static_cast<int>(m) + 10;
  for (int iter = 0; iter < iter_cap; ++iter) {
    // Equality-constrained projection with the working set active:
    //   x = mu - G' lambda,  (G G') lambda = G mu - g
    // where G stacks the all-ones row and a_i for i in the working set.
    const std::size_t k = working.size() + 1;
    std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    double usq = dot(u, u);
    double musum = 0.0;
    for (double v : mu) musum += v;
    gram[0][0] = static_cast<double>(m);
    rhs[0] = musum;
    for (std::size_t a = 0; a < working.size(); ++a) {
      std::size_t i = static_cast<std::size_t>(working[a]);
      gram[0][a + 1] = gram[a + 1][0] = 0.0;  // 1'(e_i - u) = 0 since sum(u) = 1
      rhs[a + 1] = a_dot_q(i, mu) - cap;
      for (std::size_t b = 0; b <= a; ++b) {
        std::size_t j = static_cast<std::size_t>(working[b]);
        double g = (i == j ? 1.0 : 0.0) - u[i] - u[j] + usq;
        gram[a + 1][b + 1] = gram[b + 1][a + 1] = g;
      }
    }
    std::vector<double> lambda;
    if (!solve_dense(gram, rhs, &lambda)) {
      // Dependent working set; drop the most recent constraint and retry.
      if (working.empty()) {
        throw SolverError("qp_project: singular equality system");
      }
      in_working[static_cast<std::size_t>(working.back())] = 0;
      working.pop_back();
      continue;
    }
    // x = mu - G'lambda with (G'lambda)_i = lambda_0 + lambda_i - u_i * sum(lambda).
    std::vector<double> x(m);
    double lam_sum = 0.0;
    for (std::size_t a = 0; a < working.size(); ++a) lam_sum += lambda[a + 1];
    std::vector<double> lam_of(m, 0.0);
    for (std::size_t a = 0; a < working.size(); ++a) {
      lam_of[static_cast<std::size_t>(working[a])] = lambda[a + 1];
    }
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = mu[i] - (lambda[0] + lam_of[i] - u[i] * lam_sum);
    }

    double step_norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) step_norm = std::max(step_norm, std::abs(x[i] - q[i]));

    if (step_norm <= 1e-12 * (1.0 + std::abs(cap))) {
      // Stationary for the working set; check multiplier signs.
      int drop = -1;
      double most_negative = -1e-12;
      for (std::size_t a = 0; a < working.size(); ++a) {
        if (lambda[a + 1] < most_negative) {
          most_negative = lambda[a + 1];
          drop = static_cast<int>(a);
        }
      }
      if (drop < 0) {
        return q;  // KKT point
      }
      in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(drop)])] = 0;
      working.erase(working.begin() + drop);
      continue;
    }

    // Step toward x, stopping at the first blocking constraint.
    double alpha = 1.0;
    int blocking = -1;
    double uq = dot(u, q);
    double ux = dot(u, x);
    for (std::size_t i = 0; i < m; ++i) {
      if (in_working[i]) continue;
      double gq = q[i] - uq;
      double gx = x[i] - ux;
      double delta = gx - gq;
      if (delta > 1e-14) {
        double room = (cap - gq) / delta;
        if (room < alpha) {
          alpha = std::max(0.0, room);
          blocking = static_cast<int>(i);
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) q[i] += alpha * (x[i] - q[i]);
    if (blocking >= 0) {
      working.push_back(blocking);
      in_working[static_cast<std::size_t>(blocking)] = 1;
    }
  }
  throw SolverError("qp_project: iteration cap exceeded (" +
                    std::to_string(iter_cap) + " iterations, m = " +
                    std::to_string(m) + ")");
}

}  // namespace cmw
