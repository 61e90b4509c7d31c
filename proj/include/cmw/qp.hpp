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

#include "cmw/curvature.hpp"

namespace cmw {

// Euclidean projection of `mu` onto the feasible direction set: one equality
// (zero sum) and one inequality per option. Primal active-set iteration from
// the always-feasible q = 0; exact KKT at termination (residual <= 1e-9).
// Throws SolverError if 50 * m iterations are exceeded.
std::vector<double> qp_project(std::span<const double> mu,
                               const FeasibleSetSpec& set);

}  // namespace cmw
