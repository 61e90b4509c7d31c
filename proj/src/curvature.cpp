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

#include "cmw/curvature.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cmw {

CurvatureMatrix::CurvatureMatrix(std::vector<double> u) : u_(std::move(u)) {
  if (u_.empty()) throw std::invalid_argument("curvature matrix needs weights");
  double sum = 0.0;
  for (double ui : u_) {
    if (!(ui >= 0.0)) throw std::invalid_argument("negative weight");
    sum += ui;
  }
  if (std::abs(sum - 1.0) > kProbSumTol) {
    throw std::invalid_argument("weights must sum to one");
  }
}

std::vector<double> CurvatureMatrix::apply(std::span<const double> x) const {
  double ux = dot(u_, x);
  std::vector<double> out(u_.size());
  for (std::size_t i = 0; i < u_.size(); ++i) {
    out[i] = u_[i] * (x[i] - ux);
  }
  return out;
}

double CurvatureMatrix::quad(std::span<const double> x,
                             std::span<const double> y) const {
  double ux = dot(u_, x);
  double s = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i) {
    s += u_[i] * (x[i] - ux) * y[i];
  }
  return s;
}

std::vector<std::vector<double>> CurvatureMatrix::dense() const {
  const std::size_t m = u_.size();
  std::vector<std::vector<double>> q(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      q[i][j] = (i == j ? u_[i] : 0.0) - u_[i] * u_[j];
    }
  }
  return q;
}

bool FeasibleSetSpec::contains(std::span<const double> q, double tol) const {
  if (q.size() != u.size()) return false;
  double sum = 0.0;
  double scale = 1.0;
  for (double qi : q) {
    sum += qi;
    scale = std::max(scale, std::abs(qi));
  }
  // The zero-sum check is relative to the entry scale: low-weight options
  // can carry directions of size 1/(eps u_i), where an absolute 1e-9
  // residual is below the rounding floor of the sum itself.
  if (std::abs(sum) > tol * scale) return false;
  double uq = dot(u, q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    // Same scale-awareness: q_i and u'q may cancel from huge magnitudes, so
    // the slack grows with the conditioning of the difference. On O(1)
    // directions this is exactly the absolute 1e-9 tolerance.
    double cond = 0.5 * epsilon * (std::abs(q[i]) + std::abs(uq));
    if (0.5 * epsilon * (q[i] - uq) > 1.0 + tol * std::max(1.0, cond)) {
      return false;
    }
  }
  return true;
}

double min_eigenvalue_symmetric(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("empty matrix");
  for (std::size_t sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  double min_eig = a[0][0];
  for (std::size_t i = 1; i < n; ++i) min_eig = std::min(min_eig, a[i][i]);
  return min_eig;
}

}  // namespace cmw
