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

#include "cmw/hedge.hpp"

#include <cmath>
#include <stdexcept>

namespace cmw {

double hedge_epsilon(int m, int T, double L) {
  if (m < 2 || T < 1 || !(L > 0.0)) {
    throw std::invalid_argument("hedge_epsilon requires m >= 2, T >= 1, L > 0");
  }
  return std::sqrt(8.0 * std::log(static_cast<double>(m)) / T) / L;
}

double hedge_regret_bound(int m, int T, double L) {
  if (m < 2 || T < 1) {
    throw std::invalid_argument("hedge_regret_bound requires m >= 2, T >= 1");
  }
  return L * std::sqrt(std::log(static_cast<double>(m)) * T / 2.0);
}

Distribution hedge_distribution(const HedgeState& state) {
  auto [w, phi] = shifted_exp_weights(state.cumulative, state.epsilon);
  for (double& wi : w) wi /= phi;
  return Distribution(std::move(w));
}

HedgeAgent::HedgeAgent(int m, int T, double L) {
  state_.cumulative.assign(static_cast<std::size_t>(m), 0.0);
  state_.epsilon = hedge_epsilon(m, T, L);
  state_.steps_seen = 0;
}

void HedgeAgent::observe(const LossVector& loss) {
  if (loss.size() != state_.cumulative.size()) {
    throw std::invalid_argument("loss size mismatch");
  }
  for (std::size_t i = 0; i < loss.size(); ++i) {
    state_.cumulative[i] += loss[i];
  }
  ++state_.steps_seen;
}

}  // namespace cmw
