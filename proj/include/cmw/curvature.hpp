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

#pragma once

#include <span>
#include <vector>

#include "cmw/core.hpp"

namespace cmw {

// Curvature matrix Q = diag(u) - u u' for normalized weights u, stored
// implicitly through u. Q is positive semi-definite, annihilates constant
// vectors (Q 1 = 0), and x'Qx is the variance of x under u.
class CurvatureMatrix {
 public:
  explicit CurvatureMatrix(std::vector<double> u);

  const std::vector<double>& u() const { return u_; }
  std::size_t size() const { return u_.size(); }

  // Q x in O(m).
  std::vector<double> apply(std::span<const double> x) const;

  // x' Q y in O(m).
  double quad(std::span<const double> x, std::span<const double> y) const;

  // Dense materialization, for tests and eigenvalue checks.
  std::vector<std::vector<double>> dense() const;

 private:
  std::vector<double> u_;
};

// Feasible directions for the distribution tilt: q sums to zero and keeps
// every constructed probability nonnegative,
//   (eps / 2) * (q_i - u'q) <= 1  for all i.
struct FeasibleSetSpec {
  std::vector<double> u;
  double epsilon = 0.0;

  // Right-hand side 2 / eps of the per-option constraint.
  double cap() const { return 2.0 / epsilon; }

  bool contains(std::span<const double> q, double tol = kFeasTol) const;
};

// Smallest eigenvalue of a dense symmetric matrix via cyclic Jacobi
// rotations. Used by the positive semi-definiteness checks.
double min_eigenvalue_symmetric(std::vector<std::vector<double>> a);

}  // namespace cmw
