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

// Command implementations behind the `cmw` binary: run the experiments,
// write per-trial CSV traces, a JSON summary, and a manifest that makes the
// run reproducible byte for byte. Exit codes: 0 success, 1 runtime/assertion
// failure, 2 usage error.

#pragma once

#include <iosfwd>
#include <string>

#include "cmw/experiments.hpp"
#include "cmw/verify.hpp"

namespace cmw {

// Fixed trace schema; one file per trial per algorithm, 17 significant
// digits, LF line endings. Actions are serialized as 1-based option ids.
std::string trial_csv(const TrialRecord& record);

struct OutputOptions {
  std::string out_dir = "out";
  int jobs = 1;
  double bin_width = 0.0;
  std::string command_line;  // echoed into the manifest
};

int cmd_random_intervals(const RandomIntervalConfig& config,
                         const OutputOptions& out, std::ostream& log,
                         std::ostream& err);

// `trials` counts independent seeds (trial k uses substreams of seed+k's
// trial index k).
int cmd_logistic(const LogisticMapConfig& config, int trials,
                 const OutputOptions& out, std::ostream& log,
                 std::ostream& err);

int cmd_adversarial(const AdversarialConfig& config, const OutputOptions& out,
                    std::ostream& log, std::ostream& err);

struct VerifyOptions {
  std::string suite = "all";  // psd | solvers | bounds | equilibrium | all
  int games = 1000;
  int instances = 100;
  int vectors = 1000;
  int max_m = 5;
  std::uint64_t seed = 0;
};

int cmd_verify(const VerifyOptions& options, std::ostream& log,
               std::ostream& err);

}  // namespace cmw
