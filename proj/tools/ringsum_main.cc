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

// ringsum: run ring secure-sum scenarios, attacks, disclosure curves, and
// kernel benchmarks.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ringsum/cli.h"

namespace {

// Runs `command` against --out when given, stdout otherwise.
template <typename Fn>
int WithOutput(const std::string& path, Fn command) {
  if (path.empty()) return command(std::cout);
  std::ofstream file(path);
  if (!file) {
    std::cerr << "cannot write " << path << "\n";
    return ringsum::cli::kExitInvalid;
  }
  return command(file);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = ringsum::cli;
  CLI::App app{"Ring secure-sum aggregation simulator"};
  app.require_subcommand(1);

  std::optional<uint64_t> seed;
  std::string out_path;

  cli::RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario");
  run_cmd->add_option("--config", run.config_path, "Scenario file")->required();
  run_cmd->add_option("--out", run.transcript_path, "Transcript log path")
      ->capture_default_str();
  run_cmd->add_option("--seed", seed, "Override the scenario seed");

  cli::AttackOptions attack;
  auto* attack_cmd = app.add_subcommand("attack", "Replay an attack");
  attack_cmd->add_option("--config", attack.config_path, "Scenario file")
      ->required();
  attack_cmd->add_option("--model", attack.model, "collusion | probe | link");
  attack_cmd->add_option("--target", attack.target, "Collusion target id");
  attack_cmd->add_option("--b", attack.b, "Link break probability");
  attack_cmd->add_flag("--ablate-defense", attack.ablate_defense,
                       "Disable the initiator's refusal check (probe only)");
  attack_cmd->add_option("--out", out_path, "CSV path (default stdout)");
  attack_cmd->add_option("--seed", seed, "Override the scenario seed");

  cli::CurveOptions curve;
  uint64_t curve_seed = 0;
  auto* curve_cmd =
      app.add_subcommand("curve", "Disclosure probability versus b");
  curve_cmd->add_option("--pc", curve.min_cluster, "Minimum cluster size")
      ->capture_default_str();
  curve_cmd->add_option("--dmax", curve.max_cluster, "Maximum cluster size")
      ->capture_default_str();
  curve_cmd
      ->add_option("--mass", curve.cluster_mass,
                   "P(k = m) for m = pc..dmax (default uniform)")
      ->delimiter(',');
  curve_cmd->add_option("--start", curve.start)->capture_default_str();
  curve_cmd->add_option("--stop", curve.stop)->capture_default_str();
  curve_cmd->add_option("--step", curve.step)->capture_default_str();
  curve_cmd->add_option("--grid", curve.grid, "Explicit b values")
      ->delimiter(',');
  curve_cmd
      ->add_option("--trials", curve.trials,
                   "Monte Carlo trials per point (0 = none)")
      ->capture_default_str();
  curve_cmd->add_option("--out", out_path, "CSV path (default stdout)");
  curve_cmd->add_option("--seed", curve_seed)->capture_default_str();

  cli::BenchOptions bench;
  std::string sizes;
  uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Kernel cost comparison");
  bench_cmd->add_option("--scheme", bench.scheme, "ours | cpda | both")
      ->capture_default_str();
  bench_cmd->add_option("--sizes", sizes, "e.g. 2-50 or 3,4,5");
  bench_cmd->add_option("--repetitions", bench.repetitions)
      ->capture_default_str();
  bench_cmd->add_option("--out", out_path, "CSV path (default stdout)");
  bench_cmd->add_option("--seed", bench_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kExitOk : cli::kExitInvalid;
  }

  if (*run_cmd) {
    run.seed = seed;
    return cli::CmdRun(run, std::cout, std::cerr);
  }
  if (*attack_cmd) {
    attack.seed = seed;
    return WithOutput(out_path, [&](std::ostream& out) {
      return cli::CmdAttack(attack, out, std::cerr);
    });
  }
  if (*curve_cmd) {
    curve.seed = curve_seed;
    return WithOutput(out_path, [&](std::ostream& out) {
      return cli::CmdCurve(curve, out, std::cerr);
    });
  }
  bench.seed = bench_seed;
  if (!sizes.empty()) {
    auto parsed = cli::ParseSizeList(sizes);
    if (!parsed.ok()) {
      std::cerr << parsed.status().message() << "\n";
      return cli::kExitInvalid;
    }
    bench.sizes = *parsed;
  }
  return WithOutput(out_path, [&](std::ostream& out) {
    return cli::CmdBench(bench, out, std::cerr);
  });
}
