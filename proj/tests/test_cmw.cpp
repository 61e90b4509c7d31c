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

#include "cmw/cmw.hpp"

#include <cmath>
#include <vector>

#include "cmw/hedge.hpp"
#include "doctest.h"

using namespace cmw;

namespace {

CmwConfig config_m10() {
  return CmwConfig::make(10, 200, LossRange{1.0}, SolverKind::kExactLp);
}

}  // namespace

TEST_SUITE_BEGIN("cmw");

TEST_CASE("config: defaults, validation, non-default c2 detection") {
  CmwConfig cfg = config_m10();
  CHECK(cfg.c1 == doctest::Approx(1e-2));
  CHECK(cfg.c2 == doctest::Approx(2.0 * std::log(10.0)));
  CHECK(cfg.default_c2);

  CmwConfig other = CmwConfig::make(10, 200, LossRange{1.0},
                                    SolverKind::kExactLp, 1e-2, 0.25);
  CHECK_FALSE(other.default_c2);

  CHECK_THROWS_AS(CmwConfig::make(1, 200, LossRange{1.0}, SolverKind::kExactLp),
                  std::invalid_argument);
  CHECK_THROWS_AS(CmwConfig::make(3, 200, LossRange{1.0}, SolverKind::kClosedFormM2),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      CmwConfig::make(2, 200, LossRange{0.0}, SolverKind::kClosedFormM2),
      std::invalid_argument);
}

TEST_CASE("r_bar: direct evaluations and L^2 scaling") {
  CHECK(r_bar(config_m10()) == doctest::Approx(0.0029817218459525469).epsilon(1e-12));
  CmwConfig logistic = CmwConfig::make(50, 200, LossRange{0.155},
                                       SolverKind::kApproximate);
  CHECK(r_bar(logistic) == doctest::Approx(0.00010199706254182456).epsilon(1e-12));
  CmwConfig doubled = CmwConfig::make(10, 200, LossRange{2.0}, SolverKind::kExactLp);
  CHECK(r_bar(doubled) == doctest::Approx(4.0 * r_bar(config_m10())).epsilon(1e-12));
}

TEST_CASE("epsilon_for: unit start at the default schedule, halving, monotone") {
  CmwConfig cfg = config_m10();
  CHECK(epsilon_for(0.0, cfg) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(epsilon_for(3.0 * cfg.c2, cfg) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = epsilon_for(0.0, cfg);
  for (double s : {0.1, 0.5, 2.0, 10.0}) {
    double cur = epsilon_for(s, cfg);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("weights: uniform start, exact ratio, shift invariance") {
  std::vector<double> cum(4, 0.0);
  auto [w, phi] = shifted_exp_weights(cum, 0.5);
  for (double wi : w) CHECK(wi / phi == doctest::Approx(0.25));

  double eps = 0.5;
  std::vector<double> cum2{0.0, std::log(3.0) / eps};
  auto [w2, phi2] = shifted_exp_weights(cum2, eps);
  CHECK(w2[0] / phi2 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(w2[1] / phi2 == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("distribution: q = 0 recovers the weights; hand-tilted example") {
  std::vector<double> u{0.3, 0.7};
  std::vector<double> zero{0.0, 0.0};
  Distribution p0 = distribution(u, 0.4, zero);
  CHECK(p0[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p0[1] == doctest::Approx(0.7).epsilon(1e-15));

  std::vector<double> uh{0.5, 0.5};
  std::vector<double> q{-0.2, 0.2};
  Distribution p = distribution(uh, 0.1, q);
  CHECK(p[0] == doctest::Approx(0.505).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.495).epsilon(1e-12));

  std::vector<double> infeasible{-40.0, 40.0};  // cap is 2/eps = 20
  CHECK_THROWS_WITH_AS(distribution(uh, 0.1, infeasible),
                       "direction outside feasible set", std::invalid_argument);
}

TEST_CASE("distribution: sums to one for random feasible directions") {
  Pcg32 rng(61);
  for (int k = 0; k < 200; ++k) {
    int m = 2 + k % 6;
    std::vector<double> u(static_cast<std::size_t>(m));
    double s = 0.0;
    for (double& ui : u) {
      ui = 0.05 + rng.uniform01();
      s += ui;
    }
    for (double& ui : u) ui /= s;
    double eps = rng.uniform(0.05, 1.0);
    FeasibleSetSpec set{u, eps};
    std::vector<double> q(static_cast<std::size_t>(m));
    double mean = 0.0;
    for (double& qi : q) {
      qi = rng.uniform(-1, 1);
      mean += qi;
    }
    for (double& qi : q) qi -= mean / m;
    if (!set.contains(q)) continue;
    Distribution p = distribution(u, eps, q);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p[i] >= 0.0);
      sum += p[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("curvature: Q 1 = 0 and positive semi-definiteness on random weights") {
  Pcg32 rng(67);
  double min_eig = 0.0;
  for (int k = 0; k < 1000; ++k) {
    int m = 2 + k % 11;
    std::vector<double> u(static_cast<std::size_t>(m));
    double s = 0.0;
    for (double& ui : u) {
      ui = std::exp(10.0 * rng.uniform01());
      s += ui;
    }
    for (double& ui : u) ui /= s;
    CurvatureMatrix q(u);
    std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
    for (double v : q.apply(ones)) CHECK(std::abs(v) <= 1e-14);
    min_eig = std::min(min_eig, min_eigenvalue_symmetric(q.dense()));
  }
  CHECK(min_eig >= -1e-10);
}

TEST_CASE("observe: floor clipping, hand example, protocol violation") {
  CmwConfig cfg = CmwConfig::make(2, 100, LossRange{1.0}, SolverKind::kClosedFormM2);
  CmwState state;
  state.cumulative = {0.0, 0.0};
  state.r_bar = r_bar(cfg);

  std::vector<double> u{0.5, 0.5};
  std::vector<double> q{0.0, 0.0};
  BoxConstraint box({0, 0}, {1, 1});

  // Constant loss vector: realized second-order value 0, clipped to r_bar.
  double r1 = observe(state, cfg, u, q, LossVector({0.3, 0.3}), box, true);
  CHECK(r1 == doctest::Approx(state.r_bar));

  // Corner (1, 0) with uniform weights: l'Ql = 1/4.
  double r2 = observe(state, cfg, u, q, LossVector({1.0, 0.0}), box, true);
  CHECK(r2 == doctest::Approx(0.25));
  CHECK(state.step == 2);
  CHECK(state.r_tilde_sum == doctest::Approx(r1 + r2));

  CHECK_THROWS_WITH_AS(
      observe(state, cfg, u, q, LossVector({1.5, 0.0}), box, true),
      "environment violated constraint", ProtocolError);
}

TEST_CASE("regret_bound: frozen evaluations, monotonicity, advisory flag") {
  CmwConfig cfg = config_m10();
  CmwState state;
  state.cumulative.assign(10, 0.0);
  state.r_bar = r_bar(cfg);

  BoundValue at_zero = regret_bound(state, cfg);
  CHECK(at_zero.default_c2);
  CHECK(at_zero.value == doctest::Approx(3937.293183603383).epsilon(1e-10));

  state.r_tilde_sum = 12.5;
  BoundValue at_mid = regret_bound(state, cfg);
  CHECK(at_mid.value == doctest::Approx(5726.7075586755183).epsilon(1e-10));

  double prev = at_zero.value;
  for (double s : {0.5, 2.0, 8.0, 40.0}) {
    state.r_tilde_sum = s;
    double cur = regret_bound(state, cfg).value;
    CHECK(cur >= prev);
    prev = cur;
  }

  CmwConfig other = CmwConfig::make(10, 200, LossRange{1.0},
                                    SolverKind::kExactLp, 1e-2, 0.25);
  CHECK_FALSE(regret_bound(state, other).default_c2);
}

TEST_CASE("engine: full games keep the claims ledger clean and r_tilde bounded") {
  Pcg32 env_rng(71);
  for (int game = 0; game < 20; ++game) {
    int m = 2 + game % 5;
    int T = 40;
    SolverKind kind = m == 2 ? SolverKind::kClosedFormM2 : SolverKind::kExactLp;
    CmwEngine engine(CmwConfig::make(m, T, LossRange{1.0}, kind));
    for (int t = 0; t < T; ++t) {
      std::vector<double> lo(static_cast<std::size_t>(m)),
          hi(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        double a = env_rng.uniform01(), b = env_rng.uniform01();
        lo[static_cast<std::size_t>(i)] = std::min(a, b);
        hi[static_cast<std::size_t>(i)] = std::max(a, b);
      }
      BoxConstraint box(lo, hi);
      RoundPlan plan = engine.plan_round(box);
      std::vector<double> loss(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        auto idx = static_cast<std::size_t>(i);
        loss[idx] = env_rng.uniform(lo[idx], hi[idx]);
      }
      double r_tilde = engine.commit(plan, LossVector(loss));
      CHECK(r_tilde >= engine.state().r_bar);
      CHECK(r_tilde <= 0.25 + 1e-9);  // L = 1 and exact directions
    }
    CHECK(engine.state().claim1_violation <= 1e-9);
    CHECK(engine.state().claim2_violation <= 1e-9);
    CHECK(engine.state().r_tilde_cap_violation <= 1e-9);
    double trace_sum = 0.0;
    for (double r : engine.state().r_tilde_trace) trace_sum += r;
    CHECK(std::abs(engine.state().r_tilde_sum - trace_sum) <= 1e-9);
    CHECK(engine.state().r_tilde_trace.size() ==
          static_cast<std::size_t>(engine.state().step));
  }
}

TEST_CASE("feasible set: membership tolerances") {
  FeasibleSetSpec set{{0.5, 0.5}, 0.1};  // cap = 20
  std::vector<double> ok{10.0, -10.0};
  CHECK(set.contains(ok));
  std::vector<double> nonzero_sum{10.0, -9.9};
  CHECK_FALSE(set.contains(nonzero_sum));
  std::vector<double> too_far{30.0, -30.0};
  CHECK_FALSE(set.contains(too_far));
  std::vector<double> boundary{20.0 + 1e-10, -20.0 - 1e-10};
  CHECK(set.contains(boundary));  // within the 1e-9 slack
}

TEST_CASE("engine: q = 0 with the fixed step size reproduces hedge exactly") {
  const int m = 5, T = 60;
  const double L = 1.0;
  double eps = hedge_epsilon(m, T, L);
  HedgeAgent hedge(m, T, L);
  std::vector<double> cumulative(m, 0.0);
  std::vector<double> q(m, 0.0);
  Pcg32 rng(73);
  for (int t = 0; t < T; ++t) {
    auto [w, phi] = shifted_exp_weights(cumulative, eps);
    std::vector<double> u(w);
    for (double& ui : u) ui /= phi;
    Distribution p_cmw = distribution(u, eps, q);
    Distribution p_hedge = hedge.distribution();
    for (int i = 0; i < m; ++i) {
      CHECK(p_cmw[static_cast<std::size_t>(i)] ==
            p_hedge[static_cast<std::size_t>(i)]);  // bitwise equal
    }
    std::vector<double> loss(m);
    for (double& x : loss) x = rng.uniform01();
    LossVector l(loss);
    hedge.observe(l);
    for (int i = 0; i < m; ++i) cumulative[static_cast<std::size_t>(i)] += l[static_cast<std::size_t>(i)];
  }
}

TEST_CASE("engine: validates the box size") {
  CmwEngine engine(config_m10());
  BoxConstraint wrong({0, 0}, {1, 1});
  CHECK_THROWS_AS(engine.plan_round(wrong), std::invalid_argument);
}

TEST_SUITE_END();
