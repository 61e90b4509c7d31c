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

// Classical multiplicative weights (hedge) with the fixed step size tuned to
// a known horizon. Serves as the "MW" baseline in every experiment.

#pragma once

#include <vector>

#include "cmw/core.hpp"

namespace cmw {

struct HedgeState {
  std::vector<double> cumulative;  // per-option loss totals so far
  double epsilon = 0.0;            // fixed step size, > 0
  int steps_seen = 0;
};

// Step size sqrt(8 ln(m) / T) / L for m options, horizon T and loss range L.
double hedge_epsilon(int m, int T, double L);

// Worst-case regret bound L * sqrt(ln(m) * T / 2) for losses in [0, L].
double hedge_regret_bound(int m, int T, double L);

// Plays proportionally to exp(-eps * cumulative[i]), computed with a max
// shift so the result is stable for |eps * cumulative| up to ~1e6.
Distribution hedge_distribution(const HedgeState& state);

// Value-semantics runner used by the experiment harness.
class HedgeAgent {
 public:
  HedgeAgent(int m, int T, double L);

  const HedgeState& state() const { return state_; }
  Distribution distribution() const { return hedge_distribution(state_); }
  void observe(const LossVector& loss);

 private:
  HedgeState state_;
};

}  // namespace cmw
