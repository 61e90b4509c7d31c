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

#include "cmw/cli.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "json.hpp"

namespace cmw {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
}

json histogram_json(const Histogram& h) {
  return json{{"lo", h.lo}, {"bin_width", h.width}, {"counts", h.counts}};
}

json algo_summary_json(const AlgoSummary& a) {
  return json{{"mean_expected_cost", a.mean_expected_cost},
              {"median_expected_cost", a.median_expected_cost},
              {"mean_realized_cost", a.mean_realized_cost},
              {"mean_regret", a.mean_regret},
              {"median_regret", a.median_regret},
              {"expected_cost_histogram", histogram_json(a.expected_cost_hist)}};
}

json summary_json(const AggregateSummary& s,
                  const std::vector<TrialResult>& trials) {
  json per_trial = json::array();
  for (const TrialResult& t : trials) {
    per_trial.push_back(json{{"cmw_expected_cost", t.cmw.final_expected_cost},
                             {"mw_expected_cost", t.mw.final_expected_cost},
                             {"cmw_realized_cost", t.cmw.final_realized_cost},
                             {"mw_realized_cost", t.mw.final_realized_cost},
                             {"cmw_regret", t.cmw.final_regret},
                             {"mw_regret", t.mw.final_regret},
                             {"best_cost", t.best_cost},
                             {"best_option", t.best_index + 1}});
  }
  return json{{"trials", s.trials},
              {"cmw", algo_summary_json(s.cmw)},
              {"mw", algo_summary_json(s.mw)},
              {"best", json{{"mean_cost", s.mean_best_cost},
                            {"median_cost", s.median_best_cost},
                            {"cost_histogram", histogram_json(s.best_cost_hist)}}},
              {"frac_cmw_beats_mw_expected", s.frac_cmw_beats_mw_expected},
              {"frac_cmw_beats_mw_realized", s.frac_cmw_beats_mw_realized},
              {"frac_cmw_negative_regret", s.frac_cmw_negative_regret},
              {"per_trial", per_trial}};
}

const char* solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kExactLp: return "exact";
    case SolverKind::kClosedFormM2: return "m2";
    case SolverKind::kApproximate: return "approx";
  }
  return "?";
}

// Runs `trials` jobs of `fn` with results joined by trial index; the per-trial
// streams make the outcome independent of the job count.
std::vector<TrialResult> run_trials(
    int trials, int jobs, const std::function<TrialResult(int)>& fn) {
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  if (jobs <= 1) {
    for (int t = 0; t < trials; ++t) results[static_cast<std::size_t>(t)] = fn(t);
    return results;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int t = w; t < trials; t += jobs) {
          results[static_cast<std::size_t>(t)] = fn(t);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

struct RunArtifacts {
  json config;
  std::string command;
  std::uint64_t seed = 0;
};

int write_run_outputs(const std::vector<TrialResult>& results,
                      const RunArtifacts& artifacts, const OutputOptions& out,
                      std::ostream& log) {
  AggregateSummary summary = aggregate(results, out.bin_width);

  fs::path dir(out.out_dir);
  fs::create_directories(dir / "trials");
  std::vector<std::string> outputs;
  outputs.push_back("summary.json");
  for (std::size_t t = 0; t < results.size(); ++t) {
    char name[64];
    std::snprintf(name, sizeof(name), "trials/trial_%04zu.cmw.csv", t);
    write_file(dir / name, trial_csv(results[t].cmw));
    outputs.emplace_back(name);
    std::snprintf(name, sizeof(name), "trials/trial_%04zu.mw.csv", t);
    write_file(dir / name, trial_csv(results[t].mw));
    outputs.emplace_back(name);
  }
  write_file(dir / "summary.json", summary_json(summary, results).dump(2) + "\n");

  json manifest{{"command", artifacts.command},
                {"command_line", out.command_line},
                {"artifact_version", kVersion},
                {"created_utc", utc_now()},
                {"seed", artifacts.seed},
                {"config", artifacts.config},
                {"outputs", outputs}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  log << artifacts.command << ": " << results.size() << " trials -> "
      << out.out_dir << "\n"
      << "  cmw median regret " << summary.cmw.median_regret
      << ", mw median regret " << summary.mw.median_regret
      << ", cmw beats mw (expected cost) in "
      << summary.frac_cmw_beats_mw_expected * summary.trials << "/"
      << summary.trials << " trials\n";
  return 0;
}

}  // namespace

std::string trial_csv(const TrialRecord& record) {
  std::string out =
      "t,epsilon,r_tilde,p_expected_loss,realized_loss,action,best_cum,regret,"
      "bound\n";
  for (const StepRow& r : record.rows) {
    out += std::to_string(r.t);
    out += ',';
    out += fmt17(r.epsilon);
    out += ',';
    out += fmt17(r.r_tilde);
    out += ',';
    out += fmt17(r.p_expected_loss);
    out += ',';
    out += fmt17(r.realized_loss);
    out += ',';
    out += std::to_string(r.action + 1);
    out += ',';
    out += fmt17(r.best_cum);
    out += ',';
    out += fmt17(r.regret);
    out += ',';
    out += fmt17(r.bound);
    out += '\n';
  }
  return out;
}

int cmd_random_intervals(const RandomIntervalConfig& config,
                         const OutputOptions& out, std::ostream& log,
                         std::ostream& err) {
  if (config.m < 2 || config.T < 1 || config.trials < 1) {
    err << "usage error: need --m >= 2, --T >= 1, --trials >= 1\n";
    return 2;
  }
  if (config.solver_kind == SolverKind::kExactLp && config.m > 16) {
    err << "usage error: use approximate solver for m > 16\n";
    return 2;
  }
  if (config.solver_kind == SolverKind::kClosedFormM2 && config.m != 2) {
    err << "usage error: closed-form solver requires --m 2\n";
    return 2;
  }
  try {
    auto results = run_trials(config.trials, out.jobs, [&](int t) {
      return random_intervals_trial(config, t);
    });
    json cfg{{"m", config.m},         {"T", config.T},
             {"trials", config.trials}, {"seed", config.seed},
             {"solver", solver_name(config.solver_kind)},
             {"hedge_L", config.hedge_L}, {"c1", config.c1}};
    cfg["c2"] = config.c2.has_value() ? json(*config.c2) : json("default");
    return write_run_outputs(results, {cfg, "run random-intervals", config.seed}, out, log);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_logistic(const LogisticMapConfig& config, int trials,
                 const OutputOptions& out, std::ostream& log,
                 std::ostream& err) {
  if (config.m < 2 || config.T < 1 || trials < 1) {
    err << "usage error: need --m >= 2, --T >= 1, --trials >= 1\n";
    return 2;
  }
  if (!(config.x0 > 0.0 && config.x0 < 1.0)) {
    err << "usage error: --x0 must lie strictly inside (0, 1)\n";
    return 2;
  }
  if (config.noise_bound < 0.0) {
    err << "usage error: --noise must be nonnegative\n";
    return 2;
  }
  if (!(config.theta_lo < config.theta_hi)) {
    err << "usage error: theta grid must have theta-lo < theta-hi\n";
    return 2;
  }
  if (config.solver_kind == SolverKind::kExactLp && config.m > 16) {
    err << "usage error: use approximate solver for m > 16\n";
    return 2;
  }
  if (config.solver_kind == SolverKind::kClosedFormM2 && config.m != 2) {
    err << "usage error: closed-form solver requires --m 2\n";
    return 2;
  }
  try {
    auto results = run_trials(trials, out.jobs, [&](int t) {
      return logistic_map_trial(config, t);
    });
    json cfg{{"m", config.m},
             {"T", config.T},
             {"trials", trials},
             {"seed", config.seed},
             {"solver", solver_name(config.solver_kind)},
             {"theta_lo", config.theta_lo},
             {"theta_hi", config.theta_hi},
             {"theta_true", config.theta_true},
             {"noise", config.noise_bound},
             {"x0", config.x0},
             {"hedge_L", config.hedge_L > 0.0 ? config.hedge_L
                                              : logistic_loss_range(config)},
             {"c1", config.c1}};
    cfg["c2"] = config.c2.has_value() ? json(*config.c2) : json("default");
    return write_run_outputs(results, {cfg, "run logistic", config.seed}, out, log);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_adversarial(const AdversarialConfig& config, const OutputOptions& out,
                    std::ostream& log, std::ostream& err) {
  if (config.m < 2 || config.T < 1 || config.trials < 1) {
    err << "usage error: need --m >= 2, --T >= 1, --trials >= 1\n";
    return 2;
  }
  if (config.m > 16) {
    err << "usage error: worst-case play needs m <= 16 (corner enumeration)\n";
    return 2;
  }
  try {
    auto results = run_trials(config.trials, out.jobs, [&](int t) {
      return adversarial_trial(config, t);
    });
    json cfg{{"m", config.m},         {"T", config.T},
             {"trials", config.trials}, {"seed", config.seed},
             {"solver", solver_name(config.solver_kind)},
             {"hedge_L", config.hedge_L}, {"c1", config.c1}};
    cfg["c2"] = config.c2.has_value() ? json(*config.c2) : json("default");
    return write_run_outputs(results, {cfg, "run adversarial", config.seed}, out, log);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(const VerifyOptions& options, std::ostream& log,
               std::ostream& err) {
  std::vector<SuiteResult> results;
  const std::string& s = options.suite;
  bool all = s == "all";
  try {
    if (all || s == "psd") {
      results.push_back(run_psd_suite(options.vectors, options.seed));
    }
    if (all || s == "solvers") {
      results.push_back(run_solver_suite(options.instances, options.seed));
    }
    if (all || s == "equilibrium") {
      results.push_back(
          run_equilibrium_suite(options.instances, options.max_m, options.seed));
    }
    if (all || s == "bounds") {
      results.push_back(run_bounds_suite(options.games, options.seed));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (results.empty()) {
    err << "usage error: unknown suite '" << s
        << "' (psd|solvers|bounds|equilibrium|all)\n";
    return 2;
  }
  bool ok = true;
  for (const SuiteResult& r : results) {
    log << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
        << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace cmw
