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

// Dense two-phase simplex for small linear programs.
//
//   minimize    c' x
//   subject to  a_r' x {<=, =, >=} b_r      for every row r
//               lower_j <= x_j <= upper_j   (either bound may be infinite)
//
// Duals follow the Lagrangian  L(x, y) = c'x - sum_r y_r (a_r'x - b_r), so a
// >= row carries y_r >= 0, a <= row y_r <= 0 and an equality row a free
// multiplier. At an optimum, c'x* = b'y* up to roundoff.
//
// Pricing is Dantzig's rule with a permanent switch to Bland's rule after a
// fixed iteration budget, which guarantees termination on degenerate
// problems.

#pragma once

#include <limits>
#include <vector>

#include "cmw/core.hpp"

namespace cmw {

enum class RowSense { kLe, kEq, kGe };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;  // -inf allowed
  std::vector<double> upper;  // +inf allowed

  // n variables, each x_j >= 0 and objective zero until set.
  static LinearProgram with_vars(int n);

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  void set_free(int j);
  void set_bounds(int j, double lo, double hi);
  void add_row(std::vector<double> coeffs, RowSense sense, double b);
};

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> duals;  // one per row, see convention above
  int iterations = 0;
};

LpSolution lp_solve(const LinearProgram& lp);

// As lp_solve, but non-optimal outcomes raise SolverError with `what` and the
// status in the message.
LpSolution lp_solve_or_throw(const LinearProgram& lp, const char* what);

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

}  // namespace cmw
