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

#include <algorithm>
#include <cmath>

#include "doctest.h"

using namespace cmw;

TEST_SUITE_BEGIN("hedge");

TEST_CASE("hedge_epsilon: direct evaluations and scaling in L") {
  CHECK(hedge_epsilon(2, 200, 1.0) ==
        doctest::Approx(std::sqrt(8.0 * std::log(2.0) / 200.0)).epsilon(1e-15));
  CHECK(hedge_epsilon(2, 200, 1.0) == doctest::Approx(0.16651092223153955));
  CHECK(hedge_epsilon(10, 200, 1.0) == doctest::Approx(0.30348542587702927));
  CHECK(hedge_epsilon(10, 200, 2.0) ==
        doctest::Approx(0.5 * hedge_epsilon(10, 200, 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(hedge_epsilon(1, 200, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hedge_epsilon(2, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hedge_epsilon(2, 200, 0.0), std::invalid_argument);
}

TEST_CASE("hedge_regret_bound: direct evaluations, linear in L") {
  CHECK(hedge_regret_bound(10, 200, 1.0) == doctest::Approx(15.174271293851464));
  CHECK(hedge_regret_bound(2, 2, 1.0) == doctest::Approx(0.83255461115769776));
  CHECK(hedge_regret_bound(5, 77, 2.0) ==
        doctest::Approx(2.0 * hedge_regret_bound(5, 77, 1.0)).epsilon(1e-15));
}

TEST_CASE("hedge_distribution: uniform start, exact ratios, shift invariance") {
  HedgeState s;
  s.epsilon = 0.3;
  s.cumulative = {0, 0, 0};
  Distribution p0 = hedge_distribution(s);
  for (int i = 0; i < 3; ++i) CHECK(p0[static_cast<std::size_t>(i)] == doctest::Approx(1.0 / 3));

  // eps * c = ln 2 makes the weights 1 : 1/2.
  s.cumulative = {0.0, std::log(2.0) / s.epsilon};
  Distribution p1 = hedge_distribution(s);
  CHECK(p1[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(p1[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  HedgeState shifted = s;
  for (double& c : shifted.cumulative) c += 123.75;
  Distribution p2 = hedge_distribution(shifted);
  CHECK(std::abs(p1[0] - p2[0]) <= 1e-12);
  CHECK(std::abs(p1[1] - p2[1]) <= 1e-12);
}

TEST_CASE("hedge_distribution: stable for |eps * cumulative| up to 1e6") {
  HedgeState s;
  s.epsilon = 1.0;
  s.cumulative = {0.0, 1e6, 5e5};
  Distribution p = hedge_distribution(s);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 0.0);
}

TEST_CASE("hedge: regret stays within the bound over random and crafted games") {
  // 1000 games: random iid losses, identical-loss ties, and the alternating
  // two-option pattern that maximizes the variance term.
  int games = 0;
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    for (int kind = 0; kind < 4; ++kind, ++games) {
      int m = 2 + static_cast<int>(seed % 4);
      int T = 5 + static_cast<int>((seed * 13) % 60);
      double L = (kind == 3) ? 2.5 : 1.0;
      HedgeAgent agent(m, T, L);
      GameHistory history(static_cast<std::size_t>(m));
      Pcg32 rng(seed, 77 + static_cast<std::uint64_t>(kind));
      for (int t = 0; t < T; ++t) {
        Distribution p = agent.distribution();
        std::vector<double> l(static_cast<std::size_t>(m));
        switch (kind) {
          case 0:
            for (double& x : l) x = rng.uniform01();
            break;
          case 1:
            for (double& x : l) x = rng.uniform01() < 0.5 ? 0.0 : 1.0;
            break;
          case 2: {
            // Adversarial split: highest-probability half gets the big loss.
            std::vector<int> order(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
              return p[static_cast<std::size_t>(a)] > p[static_cast<std::size_t>(b)];
            });
            for (int r = 0; r < m; ++r) {
              l[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] =
                  (r < (m + 1) / 2) ? 1.0 : 0.0;
            }
            break;
          }
          default:
            for (double& x : l) x = L * rng.uniform01();
        }
        LossVector loss(l);
        agent.observe(loss);
        history.record(p, loss, sample(p, rng));
      }
      CHECK(regret(history) <= hedge_regret_bound(m, T, L) + 1e-9);
    }
  }
  CHECK(games == 1000);
}

TEST_SUITE_END();
