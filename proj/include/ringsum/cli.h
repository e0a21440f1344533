// Copyright 2026 The Ringsum Authors
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

#ifndef RINGSUM_CLI_H_
#define RINGSUM_CLI_H_

// Experiment commands behind the `ringsum` binary. Each command writes CSV or
// logs to the given streams and returns the process exit code.
//
// Scenario files are flat `key = value` text with '#' comments. Recognised
// keys: n_sources, values, value_range, modulus, total_keys, source_keys,
// edge_probability, seed, mode, adversary, rounds. Unknown or repeated keys
// are rejected.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ringsum/scenario.h"

namespace ringsum::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRefused = 2;
inline constexpr int kExitAborted = 3;

absl::StatusOr<ScenarioConfig> ParseScenarioConfig(absl::string_view text);
absl::StatusOr<ScenarioConfig> LoadScenarioConfig(const std::string& path);

// "3,4,5" or "2-50".
absl::StatusOr<std::vector<uint32_t>> ParseSizeList(absl::string_view text);

int ExitCodeFor(RoundResult::Outcome outcome);

struct RunOptions {
  std::string config_path;
  std::string transcript_path = "transcript.log";
  std::optional<uint64_t> seed;
};
int CmdRun(const RunOptions& options, std::ostream& out, std::ostream& err);

struct AttackOptions {
  std::string config_path;
  // collusion | probe | link; defaults to the config's adversary.
  std::optional<std::string> model;
  std::optional<uint32_t> target;
  std::optional<double> b;
  bool ablate_defense = false;
  std::optional<uint64_t> seed;
};
// Header: model,target,disclosed_value,true_value,exact,defense_triggered
int CmdAttack(const AttackOptions& options, std::ostream& out,
              std::ostream& err);

struct CurveOptions {
  uint32_t min_cluster = 3;
  uint32_t max_cluster = 5;
  std::vector<double> cluster_mass;  // empty = uniform
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;
  std::vector<double> grid;  // overrides start/stop/step when set
  uint64_t trials = 0;
  uint64_t seed = 0;
};
int CmdCurve(const CurveOptions& options, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::string scheme = "both";  // ours | cpda | both
  std::vector<uint32_t> sizes;  // empty = ours 2..50, cpda 3..5
  uint32_t repetitions = 101;
  uint64_t seed = 0;
};
// Header: scheme,n_nodes,op_count,wall_ns_median,repetitions
int CmdBench(const BenchOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ringsum::cli

#endif  // RINGSUM_CLI_H_
