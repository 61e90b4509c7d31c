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

#include "cmw/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace cmw {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kRelPivotTol = 1e-7;   // pivot floor relative to its column
constexpr double kSaneColumnMax = 1e3;  // beyond this the column is junk
constexpr double kCostTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;

// One canonical column per transformed variable:
//   x_j = shift + sign * z_k            (single column)
//   x_j = z_k - z_{k+1}                 (free variable, split)
struct VarMap {
  int col = -1;        // first canonical column
  int col_neg = -1;    // second column for split variables
  double shift = 0.0;
  double sign = 1.0;
};

class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {}

  LpSolution run();

 private:
  void canonicalize();
  void build_objective_row(const std::vector<double>& costs);
  bool price_and_pivot(bool phase1, bool* unbounded);
  void pivot(int row, int col);
  void drive_out_artificials();
  bool solve_basis(const std::vector<double>& rhs, bool transpose,
                   std::vector<double>* out) const;
  LpSolution extract();

  double& at(int r, int c) { return tab_[static_cast<std::size_t>(r) * stride_ + c]; }

  const LinearProgram& lp_;
  int rows_ = 0;        // canonical row count
  int cols_ = 0;        // canonical columns including artificials
  int structural_ = 0;  // columns before artificials
  int stride_ = 0;
  std::vector<double> tab_;   // rows_ x stride_, last column is rhs
  std::vector<double> a0_;    // pristine canonical data for the final solves
  std::vector<double> obj_;   // reduced-cost row, size cols_ + 1
  std::vector<int> basis_;
  std::vector<double> row_sign_;  // canonical row = sign * original row
  std::vector<VarMap> vmap_;
  std::vector<double> phase2_costs_;
  int iterations_ = 0;
  int bland_after_ = 0;
  int iter_cap_ = 0;
  LpStatus status_ = LpStatus::kOptimal;
};

void Simplex::canonicalize() {
  const int n = lp_.num_vars();
  const int r0 = lp_.num_rows();

  vmap_.assign(static_cast<std::size_t>(n), VarMap{});
  int next_col = 0;
  // Upper-bounded columns get an extra <= row appended after the originals.
  struct UpperRow {
    int col;
    double bound;
  };
  std::vector<UpperRow> upper_rows;
  for (int j = 0; j < n; ++j) {
    double lo = lp_.lower[static_cast<std::size_t>(j)];
    double hi = lp_.upper[static_cast<std::size_t>(j)];
    VarMap& vm = vmap_[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      vm.col = next_col++;
      vm.shift = lo;
      vm.sign = 1.0;
      if (std::isfinite(hi)) upper_rows.push_back({vm.col, hi - lo});
    } else if (std::isfinite(hi)) {
      vm.col = next_col++;
      vm.shift = hi;
      vm.sign = -1.0;
    } else {
      vm.col = next_col++;
      vm.col_neg = next_col++;
      vm.shift = 0.0;
      vm.sign = 1.0;
    }
  }

  const int extra = static_cast<int>(upper_rows.size());
  rows_ = r0 + extra;
  int num_slacks = 0;
  for (RowSense s : lp_.senses) {
    if (s != RowSense::kEq) ++num_slacks;
  }
  num_slacks += extra;
  structural_ = next_col + num_slacks;
  cols_ = structural_ + rows_;  // one artificial per row
  stride_ = cols_ + 1;

  tab_.assign(static_cast<std::size_t>(rows_) * stride_, 0.0);
  basis_.assign(static_cast<std::size_t>(rows_), -1);
  row_sign_.assign(static_cast<std::size_t>(rows_), 1.0);

  int slack = next_col;
  for (int r = 0; r < rows_; ++r) {
    double sense_sign = 1.0;
    double b;
    if (r < r0) {
      const auto& coeffs = lp_.rows[static_cast<std::size_t>(r)];
      RowSense sense = lp_.senses[static_cast<std::size_t>(r)];
      sense_sign = (sense == RowSense::kGe) ? -1.0 : 1.0;
      b = sense_sign * lp_.rhs[static_cast<std::size_t>(r)];
      for (int j = 0; j < n; ++j) {
        double a = sense_sign * coeffs[static_cast<std::size_t>(j)];
        if (a == 0.0) continue;
        const VarMap& vm = vmap_[static_cast<std::size_t>(j)];
        b -= a * vm.shift;
        at(r, vm.col) += a * vm.sign;
        if (vm.col_neg >= 0) at(r, vm.col_neg) -= a;
      }
      if (sense != RowSense::kEq) at(r, slack++) = 1.0;
    } else {
      const UpperRow& ur = upper_rows[static_cast<std::size_t>(r - r0)];
      at(r, ur.col) = 1.0;
      b = ur.bound;
      at(r, slack++) = 1.0;
    }
    double flip = (b < 0.0) ? -1.0 : 1.0;
    if (flip < 0.0) {
      for (int c = 0; c < structural_; ++c) at(r, c) = -at(r, c);
      b = -b;
    }
    row_sign_[static_cast<std::size_t>(r)] = sense_sign * flip;
    at(r, structural_ + r) = 1.0;  // artificial
    at(r, cols_) = b;
    basis_[static_cast<std::size_t>(r)] = structural_ + r;
  }

  a0_ = tab_;

  phase2_costs_.assign(static_cast<std::size_t>(cols_), 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vmap_[static_cast<std::size_t>(j)];
    double c = lp_.objective[static_cast<std::size_t>(j)];
    phase2_costs_[static_cast<std::size_t>(vm.col)] += c * vm.sign;
    if (vm.col_neg >= 0) phase2_costs_[static_cast<std::size_t>(vm.col_neg)] -= c;
  }

  bland_after_ = 500 + 10 * (rows_ + cols_);
  iter_cap_ = 50000 + 100 * (rows_ + cols_);
}

void Simplex::build_objective_row(const std::vector<double>& costs) {
  obj_.assign(static_cast<std::size_t>(cols_) + 1, 0.0);
  for (int c = 0; c < cols_; ++c) obj_[static_cast<std::size_t>(c)] = costs[static_cast<std::size_t>(c)];
  for (int r = 0; r < rows_; ++r) {
    double cb = costs[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
    if (cb == 0.0) continue;
    for (int c = 0; c <= cols_; ++c) {
      obj_[static_cast<std::size_t>(c)] -= cb * at(r, c);
    }
  }
}

void Simplex::pivot(int row, int col) {
  double p = at(row, col);
  double inv = 1.0 / p;
  for (int c = 0; c <= cols_; ++c) at(row, c) *= inv;
  at(row, col) = 1.0;
  for (int r = 0; r < rows_; ++r) {
    if (r == row) continue;
    double f = at(r, col);
    if (f == 0.0) continue;
    for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(row, c);
    at(r, col) = 0.0;
  }
  double f = obj_[static_cast<std::size_t>(col)];
  if (f != 0.0) {
    for (int c = 0; c <= cols_; ++c) obj_[static_cast<std::size_t>(c)] -= f * at(row, c);
    obj_[static_cast<std::size_t>(col)] = 0.0;
  }
  basis_[static_cast<std::size_t>(row)] = col;
}

// Runs simplex iterations for the current objective row until optimal,
// unbounded or the iteration cap. Artificial columns (index >= structural_)
// may not enter in phase 2. A pivot must clear a threshold relative to its
// column's magnitude; a tiny pivot inside an inflated column is how the
// basis turns near-singular. Columns that offer no sound pivot are banned
// until the next successful pivot instead of being read as recession rays.
bool Simplex::price_and_pivot(bool phase1, bool* unbounded) {
  const int eligible = phase1 ? cols_ : structural_;
  *unbounded = false;
  std::vector<char> banned(static_cast<std::size_t>(eligible), 0);
  for (;;) {
    if (iterations_ >= iter_cap_) {
      status_ = LpStatus::kIterationLimit;
      return false;
    }
    const bool bland = iterations_ >= bland_after_;
    int enter = -1;
    double best = -kCostTol;
    for (int c = 0; c < eligible; ++c) {
      if (banned[static_cast<std::size_t>(c)]) continue;
      double rc = obj_[static_cast<std::size_t>(c)];
      if (rc < best) {
        enter = c;
        if (bland) break;  // lowest eligible index
        best = rc;
      }
    }
    if (enter < 0) return true;  // optimal for this phase

    double col_max = 0.0;
    for (int r = 0; r < rows_; ++r) {
      col_max = std::max(col_max, std::abs(at(r, enter)));
    }
    const double pivot_floor = std::max(kPivotTol, kRelPivotTol * col_max);

    int leave = -1;
    double best_ratio = 0.0;
    bool any_positive = false;
    for (int r = 0; r < rows_; ++r) {
      double a = at(r, enter);
      any_positive = any_positive || a > 0.0;
      if (a > pivot_floor) {
        double ratio = at(r, cols_) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             (bland ? basis_[static_cast<std::size_t>(r)] <
                          basis_[static_cast<std::size_t>(leave)]
                    : a > at(leave, enter)))) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      if (!any_positive && col_max <= kSaneColumnMax) {
        *unbounded = true;  // a genuine recession direction
        return false;
      }
      banned[static_cast<std::size_t>(enter)] = 1;
      continue;
    }
    pivot(leave, enter);
    std::fill(banned.begin(), banned.end(), 0);
    ++iterations_;
  }
}

void Simplex::drive_out_artificials() {
  for (int r = 0; r < rows_; ++r) {
    if (basis_[static_cast<std::size_t>(r)] < structural_) continue;
    int col = -1;
    double best = 0.0;
    for (int c = 0; c < structural_; ++c) {
      double a = std::abs(at(r, c));
      if (a > best) {
        best = a;
        col = c;
      }
    }
    if (col >= 0 && best > kPivotTol) {
      pivot(r, col);
      ++iterations_;
    }
    // Otherwise the row is redundant; its artificial stays basic at zero and
    // never re-enters the ratio test with a nonzero value.
  }
}

// Solves against the rows_ x rows_ basis matrix taken from the pristine
// canonical data (`transpose` solves B'y = c) by LU with partial pivoting,
// one step of iterative refinement, and a residual gate.
bool Simplex::solve_basis(const std::vector<double>& rhs, bool transpose,
                          std::vector<double>* out) const {
  const std::size_t n = static_cast<std::size_t>(rows_);
  std::vector<double> basis_mat(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      double v = a0_[r * static_cast<std::size_t>(stride_) +
                     static_cast<std::size_t>(basis_[k])];
      basis_mat[(transpose ? k : r) * n + (transpose ? r : k)] = v;
    }
  }

  std::vector<double> m = basis_mat;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(m[perm[r] * n + k]) > std::abs(m[perm[piv] * n + k])) piv = r;
    }
    if (std::abs(m[perm[piv] * n + k]) < 1e-300) return false;
    std::swap(perm[k], perm[piv]);
    for (std::size_t r = k + 1; r < n; ++r) {
      double f = m[perm[r] * n + k] / m[perm[k] * n + k];
      m[perm[r] * n + k] = f;  // keep the multiplier for refinement solves
      for (std::size_t c = k + 1; c < n; ++c) m[perm[r] * n + c] -= f * m[perm[k] * n + c];
    }
  }
  auto lu_solve = [&](const std::vector<double>& b, std::vector<double>* x) {
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      double s = b[perm[k]];
      for (std::size_t c = 0; c < k; ++c) s -= m[perm[k] * n + c] * y[c];
      y[k] = s;
    }
    x->assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
      double s = y[k];
      for (std::size_t c = k + 1; c < n; ++c) s -= m[perm[k] * n + c] * (*x)[c];
      (*x)[k] = s / m[perm[k] * n + k];
    }
  };
  auto residual = [&](const std::vector<double>& x, std::vector<double>* r) {
    r->assign(n, 0.0);
    double worst = 0.0;
    for (std::size_t row = 0; row < n; ++row) {
      double s = rhs[row];
      for (std::size_t c = 0; c < n; ++c) s -= basis_mat[row * n + c] * x[c];
      (*r)[row] = s;
      worst = std::max(worst, std::abs(s));
    }
    return worst;
  };

  lu_solve(rhs, out);
  std::vector<double> r, dx;
  residual(*out, &r);
  lu_solve(r, &dx);
  for (std::size_t i = 0; i < n; ++i) (*out)[i] += dx[i];
  double scale = 1.0;
  for (double b : rhs) scale = std::max(scale, std::abs(b));
  return residual(*out, &r) <= 1e-6 * scale;
}

LpSolution Simplex::extract() {
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.iterations = iterations_;

  // The tableau only chose the basis; values and duals are recomputed from
  // the pristine canonical data so that degenerate pivot sequences leave no
  // numerical residue.
  std::vector<double> b0(static_cast<std::size_t>(rows_));
  for (int r = 0; r < rows_; ++r) {
    b0[static_cast<std::size_t>(r)] =
        a0_[static_cast<std::size_t>(r) * stride_ + cols_];
  }
  std::vector<double> xb;
  std::vector<double> z(static_cast<std::size_t>(cols_), 0.0);
  if (solve_basis(b0, /*transpose=*/false, &xb)) {
    for (int r = 0; r < rows_; ++r) {
      z[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] =
          xb[static_cast<std::size_t>(r)];
    }
  } else {
    for (int r = 0; r < rows_; ++r) {
      z[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = at(r, cols_);
    }
  }
  const int n = lp_.num_vars();
  sol.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vmap_[static_cast<std::size_t>(j)];
    double v = vm.shift + vm.sign * z[static_cast<std::size_t>(vm.col)];
    if (vm.col_neg >= 0) v -= z[static_cast<std::size_t>(vm.col_neg)];
    sol.x[static_cast<std::size_t>(j)] = v;
  }
  sol.objective = dot(lp_.objective, sol.x);

  std::vector<double> cb(static_cast<std::size_t>(rows_));
  for (int r = 0; r < rows_; ++r) {
    cb[static_cast<std::size_t>(r)] =
        phase2_costs_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
  }
  std::vector<double> y;
  sol.duals.assign(static_cast<std::size_t>(lp_.num_rows()), 0.0);
  if (solve_basis(cb, /*transpose=*/true, &y)) {
    for (int r = 0; r < lp_.num_rows(); ++r) {
      sol.duals[static_cast<std::size_t>(r)] =
          row_sign_[static_cast<std::size_t>(r)] * y[static_cast<std::size_t>(r)];
    }
  } else {
    // Fall back to the accumulated reduced costs under the artificials.
    for (int r = 0; r < lp_.num_rows(); ++r) {
      double yr = -obj_[static_cast<std::size_t>(structural_ + r)];
      sol.duals[static_cast<std::size_t>(r)] =
          row_sign_[static_cast<std::size_t>(r)] * yr;
    }
  }
  return sol;
}

LpSolution Simplex::run() {
  canonicalize();

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1_costs(static_cast<std::size_t>(cols_), 0.0);
  for (int r = 0; r < rows_; ++r) phase1_costs[static_cast<std::size_t>(structural_ + r)] = 1.0;
  build_objective_row(phase1_costs);
  bool unbounded = false;
  if (!price_and_pivot(/*phase1=*/true, &unbounded)) {
    LpSolution sol;
    sol.status = status_ == LpStatus::kIterationLimit ? LpStatus::kIterationLimit
                                                      : LpStatus::kInfeasible;
    sol.iterations = iterations_;
    return sol;
  }
  double infeas = -obj_[static_cast<std::size_t>(cols_)];  // phase-1 objective value
  double scale = 1.0;
  for (int r = 0; r < rows_; ++r) scale = std::max(scale, std::abs(at(r, cols_)));
  if (infeas > kPhase1Tol * scale) {
    LpSolution sol;
    sol.status = LpStatus::kInfeasible;
    sol.iterations = iterations_;
    return sol;
  }
  drive_out_artificials();

  // Phase 2: original objective; artificial columns may not re-enter.
  build_objective_row(phase2_costs_);
  if (!price_and_pivot(/*phase1=*/false, &unbounded)) {
    LpSolution sol;
    sol.status = unbounded ? LpStatus::kUnbounded : status_;
    sol.iterations = iterations_;
    return sol;
  }
  return extract();
}

}  // namespace

LinearProgram LinearProgram::with_vars(int n) {
  LinearProgram lp;
  lp.objective.assign(static_cast<std::size_t>(n), 0.0);
  lp.lower.assign(static_cast<std::size_t>(n), 0.0);
  lp.upper.assign(static_cast<std::size_t>(n), kLpInf);
  return lp;
}

void LinearProgram::set_free(int j) {
  lower[static_cast<std::size_t>(j)] = -kLpInf;
  upper[static_cast<std::size_t>(j)] = kLpInf;
}

void LinearProgram::set_bounds(int j, double lo, double hi) {
  lower[static_cast<std::size_t>(j)] = lo;
  upper[static_cast<std::size_t>(j)] = hi;
}

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double b) {
  if (coeffs.size() != objective.size()) {
    throw std::invalid_argument("LP row length mismatch");
  }
  if (!std::isfinite(b)) {
    throw std::invalid_argument("LP rhs must be finite");
  }
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(b);
}

LpSolution lp_solve(const LinearProgram& lp) {
  if (lp.rows.size() != lp.senses.size() || lp.rows.size() != lp.rhs.size()) {
    throw std::invalid_argument("LP with inconsistent row data");
  }
  for (const auto& row : lp.rows) {
    for (double a : row) {
      if (!std::isfinite(a)) throw std::invalid_argument("LP has non-finite coefficient");
    }
  }
  Simplex s(lp);
  return s.run();
}

LpSolution lp_solve_or_throw(const LinearProgram& lp, const char* what) {
  LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::kOptimal) {
    const char* st = sol.status == LpStatus::kInfeasible    ? "infeasible"
                     : sol.status == LpStatus::kUnbounded   ? "unbounded"
                                                            : "iteration limit";
    throw SolverError(std::string(what) + ": LP " + st + " after " +
                      std::to_string(sol.iterations) + " iterations");
  }
  return sol;
}

}  // namespace cmw
