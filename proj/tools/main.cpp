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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cmw/cli.hpp"

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

cmw::SolverKind to_solver(const std::string& name) {
  if (name == "exact") return cmw::SolverKind::kExactLp;
  if (name == "m2") return cmw::SolverKind::kClosedFormM2;
  return cmw::SolverKind::kApproximate;
}

void add_output_flags(CLI::App* cmd, cmw::OutputOptions* out) {
  cmd->add_option("--out", out->out_dir, "Output directory");
  cmd->add_option("--jobs", out->jobs, "Parallel trial workers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--bin-width", out->bin_width,
                  "Histogram bin width (0: range/20)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained multiplicative weights: experiments and checks"};
  app.require_subcommand(1);

  std::string ri_solver = "exact";
  std::string lm_solver = "approx";
  std::string ad_solver = "exact";
  double c2 = -1.0;  // <= 0 means the proved default
  cmw::OutputOptions out;
  out.command_line = join_args(argc, argv);

  app.set_config("--config", "",
                 "TOML-like key=value file; sections name the subcommand, "
                 "e.g. [run.random-intervals]");

  // run random-intervals | logistic | adversarial
  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  run->require_subcommand(1);

  cmw::RandomIntervalConfig ri;
  CLI::App* ri_cmd = run->add_subcommand(
      "random-intervals", "Random per-round loss intervals in [0,1]");
  ri_cmd->add_option("--m", ri.m, "Options");
  ri_cmd->add_option("--T", ri.T, "Horizon");
  ri_cmd->add_option("--trials", ri.trials, "Trials");
  ri_cmd->add_option("--seed", ri.seed, "Seed");
  ri_cmd->add_option("--solver", ri_solver, "exact|m2|approx")
      ->check(CLI::IsMember({"exact", "m2", "approx"}));
  ri_cmd->add_option("--c1", ri.c1, "Step-size floor constant");
  ri_cmd->add_option("--c2", c2, "Step-size offset (default: 2 ln(m) L^2)");
  ri_cmd->add_option("--hedge-L", ri.hedge_L, "Loss range for both schedules");
  add_output_flags(ri_cmd, &out);

  cmw::LogisticMapConfig lm;
  int lm_trials = 1;
  CLI::App* lm_cmd = run->add_subcommand(
      "logistic", "Online identification of a noisy logistic map");
  lm_cmd->add_option("--m", lm.m, "Candidate models");
  lm_cmd->add_option("--T", lm.T, "Horizon");
  lm_cmd->add_option("--trials", lm_trials, "Seeds to run");
  lm_cmd->add_option("--seed", lm.seed, "Seed");
  lm_cmd->add_option("--solver", lm_solver, "exact|m2|approx")
      ->check(CLI::IsMember({"exact", "m2", "approx"}));
  lm_cmd->add_option("--c1", lm.c1, "Step-size floor constant");
  lm_cmd->add_option("--c2", c2, "Step-size offset (default: 2 ln(m) L^2)");
  lm_cmd->add_option("--theta-lo", lm.theta_lo, "Grid lower endpoint");
  lm_cmd->add_option("--theta-hi", lm.theta_hi, "Grid upper endpoint");
  lm_cmd->add_option("--theta-true", lm.theta_true, "True parameter");
  lm_cmd->add_option("--noise", lm.noise_bound, "Uniform noise half-width");
  lm_cmd->add_option("--x0", lm.x0, "Initial state");
  lm_cmd->add_option("--hedge-L", lm.hedge_L,
                     "Loss range (0: tightest uniform bound)");
  add_output_flags(lm_cmd, &out);

  cmw::AdversarialConfig ad;
  CLI::App* ad_cmd = run->add_subcommand(
      "adversarial", "Worst-case corner play on the unit box");
  ad_cmd->add_option("--m", ad.m, "Options");
  ad_cmd->add_option("--T", ad.T, "Horizon");
  ad_cmd->add_option("--trials", ad.trials, "Trials");
  ad_cmd->add_option("--seed", ad.seed, "Seed");
  ad_cmd->add_option("--solver", ad_solver, "exact|m2|approx")
      ->check(CLI::IsMember({"exact", "m2", "approx"}));
  ad_cmd->add_option("--c1", ad.c1, "Step-size floor constant");
  ad_cmd->add_option("--c2", c2, "Step-size offset (default: 2 ln(m) L^2)");
  ad_cmd->add_option("--hedge-L", ad.hedge_L, "Loss range for both schedules");
  add_output_flags(ad_cmd, &out);

  cmw::VerifyOptions vo;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run the invariant suites");
  verify_cmd->add_option("--suite", vo.suite,
                         "psd|solvers|bounds|equilibrium|all");
  verify_cmd->add_option("--games", vo.games, "Battery games (bounds suite)");
  verify_cmd->add_option("--instances", vo.instances,
                         "Random instances (solver/equilibrium suites)");
  verify_cmd->add_option("--vectors", vo.vectors, "Weight vectors (psd suite)");
  verify_cmd->add_option("--m", vo.max_m, "Largest option count (equilibrium)");
  verify_cmd->add_option("--seed", vo.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ri_cmd->parsed()) {
      ri.solver_kind = to_solver(ri_solver);
      if (c2 > 0.0) ri.c2 = c2;
      return cmw::cmd_random_intervals(ri, out, std::cout, std::cerr);
    }
    if (lm_cmd->parsed()) {
      lm.solver_kind = to_solver(lm_solver);
      if (c2 > 0.0) lm.c2 = c2;
      return cmw::cmd_logistic(lm, lm_trials, out, std::cout, std::cerr);
    }
    if (ad_cmd->parsed()) {
      ad.solver_kind = to_solver(ad_solver);
      if (c2 > 0.0) ad.c2 = c2;
      return cmw::cmd_adversarial(ad, out, std::cout, std::cerr);
    }
    if (verify_cmd->parsed()) {
      return cmw::cmd_verify(vo, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
