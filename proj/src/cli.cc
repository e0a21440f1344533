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

#include "ringsum/cli.h"

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "ringsum/adversary.h"
#include "ringsum/analysis.h"
#include "ringsum/cpda_baseline.h"
#include "ringsum/random.h"

namespace ringsum::cli {

namespace {

constexpr uint64_t kLinkSampleStream = 0x6c696e6b;

const std::set<absl::string_view>& KnownFields() {
  static const std::set<absl::string_view> kFields = {
      "n_sources",   "values",           "value_range", "modulus", "total_keys",
      "source_keys", "edge_probability", "seed",        "mode",    "adversary",
      "rounds"};
  return kFields;
}

absl::Status FieldError(absl::string_view field, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", message));
}

template <typename Int>
absl::StatusOr<Int> ParseInt(absl::string_view field, absl::string_view text) {
  Int v;
  if (!absl::SimpleAtoi(text, &v)) {
    return FieldError(field, absl::StrCat("'", text, "' is not an integer"));
  }
  return v;
}

// Decimal or 2^k.
absl::StatusOr<uint64_t> ParseModulus(absl::string_view text) {
  if (std::vector<absl::string_view> parts = absl::StrSplit(text, '^');
      parts.size() == 2) {
    uint64_t base, exponent;
    if (!absl::SimpleAtoi(parts[0], &base) ||
        !absl::SimpleAtoi(parts[1], &exponent) || base != 2 || exponent > 63) {
      return FieldError("modulus", "expected an integer or 2^k with k <= 63");
    }
    return uint64_t{1} << exponent;
  }
  return ParseInt<uint64_t>("modulus", text);
}

absl::StatusOr<NodeId> ParseNode(absl::string_view field,
                                 absl::string_view text) {
  absl::ConsumePrefix(&text, "s");
  absl::StatusOr<uint32_t> id = ParseInt<uint32_t>(field, text);
  if (!id.ok()) return id.status();
  return Source(*id);
}

absl::StatusOr<AdversarySpec> ParseAdversary(absl::string_view text) {
  AdversarySpec spec;
  std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  const absl::string_view kind = parts[0];
  if (parts.size() > 2) return FieldError("adversary", "too many ':' parts");
  const std::optional<absl::string_view> arg =
      parts.size() == 2 ? std::optional(parts[1]) : std::nullopt;
  if (kind == "none" && !arg) return spec;
  if (kind == "collusion") {
    spec.kind = AdversaryKind::kCollusion;
    if (arg) {
      absl::StatusOr<NodeId> target = ParseNode("adversary", *arg);
      if (!target.ok()) return target.status();
      spec.target = *target;
    }
    return spec;
  }
  if (kind == "probe") {
    spec.kind = AdversaryKind::kServerProbe;
    if (arg && *arg != "ablate") {
      return FieldError("adversary", "probe accepts only ':ablate'");
    }
    spec.defense_enabled = !arg.has_value();
    return spec;
  }
  if (kind == "link" && arg) {
    spec.kind = AdversaryKind::kLinkCompromise;
    if (!absl::SimpleAtod(*arg, &spec.link_break_probability)) {
      return FieldError("adversary", "link:<b> needs a number");
    }
    return spec;
  }
  return FieldError("adversary", absl::StrCat("unknown adversary '", text,
                                              "' (none | collusion[:node] | "
                                              "probe[:ablate] | link:<b>)"));
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string CsvOptional(const std::optional<uint64_t>& v) {
  return v.has_value() ? absl::StrCat(*v) : "";
}

}  // namespace

absl::StatusOr<ScenarioConfig> ParseScenarioConfig(absl::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(line, absl::MaxSplits('=', 1));
    std::string key(absl::StripAsciiWhitespace(kv.first));
    std::string value(absl::StripAsciiWhitespace(kv.second));
    if (!absl::StrContains(line, '=')) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": expected 'key = value'"));
    }
    if (!KnownFields().contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, ": unknown field (line ", line_number, ")"));
    }
    if (!fields.emplace(key, value).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, ": given more than once (line ", line_number, ")"));
    }
  }

  ScenarioConfig config;
  for (absl::string_view required : {"n_sources", "modulus"}) {
    if (!fields.contains(required)) return FieldError(required, "missing");
  }
  for (const auto& [key, value] : fields) {
    absl::Status status;
    if (key == "n_sources") {
      auto v = ParseInt<uint32_t>(key, value);
      if (v.ok())
        config.n_sources = *v;
      else
        status = v.status();
    } else if (key == "values") {
      for (absl::string_view item : absl::StrSplit(value, ',')) {
        auto v = ParseInt<uint64_t>(key, absl::StripAsciiWhitespace(item));
        if (!v.ok()) return v.status();
        config.values.push_back(*v);
      }
    } else if (key == "value_range") {
      auto v = ParseInt<uint64_t>(key, value);
      if (v.ok())
        config.value_range = *v;
      else
        status = v.status();
    } else if (key == "modulus") {
      auto v = ParseModulus(value);
      if (v.ok())
        config.modulus = *v;
      else
        status = v.status();
    } else if (key == "total_keys") {
      auto v = ParseInt<uint32_t>(key, value);
      if (v.ok())
        config.total_keys = *v;
      else
        status = v.status();
    } else if (key == "source_keys") {
      auto v = ParseInt<uint32_t>(key, value);
      if (v.ok())
        config.source_keys = *v;
      else
        status = v.status();
    } else if (key == "edge_probability") {
      if (!absl::SimpleAtod(value, &config.edge_probability)) {
        status = FieldError(key, "not a number");
      }
    } else if (key == "seed") {
      auto v = ParseInt<uint64_t>(key, value);
      if (v.ok())
        config.seed = *v;
      else
        status = v.status();
    } else if (key == "mode") {
      if (value == "direct") {
        config.mode = RelayMode::kDirect;
      } else if (value == "strict-relay") {
        config.mode = RelayMode::kStrictRelay;
      } else {
        status = FieldError(key, "expected 'direct' or 'strict-relay'");
      }
    } else if (key == "adversary") {
      auto v = ParseAdversary(value);
      if (v.ok())
        config.adversary = *v;
      else
        status = v.status();
    } else if (key == "rounds") {
      auto v = ParseInt<uint32_t>(key, value);
      if (v.ok())
        config.rounds = *v;
      else
        status = v.status();
    }
    if (!status.ok()) return status;
  }
  if (auto s = config.Validate(); !s.ok()) return s;
  return config;
}

absl::StatusOr<ScenarioConfig> LoadScenarioConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseScenarioConfig(*text);
}

absl::StatusOr<std::vector<uint32_t>> ParseSizeList(absl::string_view text) {
  std::vector<uint32_t> sizes;
  if (std::vector<absl::string_view> range = absl::StrSplit(text, '-');
      range.size() == 2) {
    uint32_t lo, hi;
    if (!absl::SimpleAtoi(range[0], &lo) || !absl::SimpleAtoi(range[1], &hi) ||
        lo > hi) {
      return absl::InvalidArgumentError(
          absl::StrCat("sizes: bad range '", text, "'"));
    }
    for (uint32_t n = lo; n <= hi; ++n) sizes.push_back(n);
    return sizes;
  }
  for (absl::string_view item : absl::StrSplit(text, ',')) {
    uint32_t n;
    if (!absl::SimpleAtoi(item, &n)) {
      return absl::InvalidArgumentError(
          absl::StrCat("sizes: '", item, "' is not an integer"));
    }
    sizes.push_back(n);
  }
  return sizes;
}

int ExitCodeFor(RoundResult::Outcome outcome) {
  switch (outcome) {
    case RoundResult::Outcome::kSum:
      return kExitOk;
    case RoundResult::Outcome::kRefused:
      return kExitRefused;
    case RoundResult::Outcome::kAborted:
      return kExitAborted;
  }
  return kExitAborted;
}

int CmdRun(const RunOptions& options, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ScenarioConfig> config =
      LoadScenarioConfig(options.config_path);
  if (!config.ok()) {
    err << "invalid config: " << config.status().message() << "\n";
    return kExitInvalid;
  }
  if (options.seed) config->seed = *options.seed;
  absl::StatusOr<ScenarioRun> run = RunScenario(*config);
  if (!run.ok()) {
    err << "invalid config: " << run.status().message() << "\n";
    return kExitInvalid;
  }
  std::ofstream log(options.transcript_path);
  if (!log) {
    err << "cannot write " << options.transcript_path << "\n";
    return kExitInvalid;
  }
  log << run->transcript.Serialize();

  const RoundResult& result = run->transcript.final_result();
  out << "outcome,sum,rounds\n"
      << OutcomeName(result.outcome) << ','
      << (result.outcome == RoundResult::Outcome::kSum
              ? absl::StrCat(result.sum.total)
              : "")
      << ',' << run->transcript.rounds.size() << "\n";
  if (result.outcome == RoundResult::Outcome::kAborted) {
    err << "round aborted: " << result.reason << "\n";
  }
  return ExitCodeFor(result.outcome);
}

int CmdAttack(const AttackOptions& options, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<ScenarioConfig> config =
      LoadScenarioConfig(options.config_path);
  if (!config.ok()) {
    err << "invalid config: " << config.status().message() << "\n";
    return kExitInvalid;
  }
  if (options.seed) config->seed = *options.seed;

  AdversaryKind kind = config->adversary.kind;
  if (options.model) {
    if (*options.model == "collusion") {
      kind = AdversaryKind::kCollusion;
    } else if (*options.model == "probe") {
      kind = AdversaryKind::kServerProbe;
    } else if (*options.model == "link") {
      kind = AdversaryKind::kLinkCompromise;
    } else {
      err << "model: expected collusion, probe, or link\n";
      return kExitInvalid;
    }
  }
  if (options.target) config->adversary.target = Source(*options.target);
  if (options.b) config->adversary.link_break_probability = *options.b;
  if (options.ablate_defense) config->adversary.defense_enabled = false;
  if (kind == AdversaryKind::kNone) {
    err << "model: no adversary in the config and no --model given\n";
    return kExitInvalid;
  }
  config->adversary.kind = kind;
  if (auto s = config->Validate(); !s.ok()) {
    err << "invalid config: " << s.message() << "\n";
    return kExitInvalid;
  }

  out << "model,target,disclosed_value,true_value,exact,defense_triggered\n";
  auto row = [&](absl::string_view model, NodeId target,
                 std::optional<uint64_t> disclosed, uint64_t truth,
                 bool defense) {
    out << model << ',' << target.ToString() << ',' << CsvOptional(disclosed)
        << ',' << truth << ','
        << (disclosed.has_value() && *disclosed == truth ? "true" : "false")
        << ',' << (defense ? "true" : "false") << "\n";
  };

  if (kind == AdversaryKind::kServerProbe) {
    // Honest run of the same scenario, for the true_value column.
    ScenarioConfig truth_config = *config;
    truth_config.adversary = {};
    absl::StatusOr<ScenarioRun> truth = RunScenario(truth_config);
    if (!truth.ok()) {
      err << "invalid config: " << truth.status().message() << "\n";
      return kExitInvalid;
    }
    for (uint32_t i = 1; i <= config->n_sources; ++i) {
      absl::StatusOr<AttackOutcome> outcome =
          RunServerProbe(*config, Source(i));
      if (!outcome.ok()) {
        err << "probe failed: " << outcome.status().message() << "\n";
        return kExitAborted;
      }
      std::optional<uint64_t> disclosed;
      if (auto it = outcome->disclosed.find(Source(i));
          it != outcome->disclosed.end()) {
        disclosed = it->second;
      }
      row("probe", Source(i), disclosed, truth->inputs[i - 1],
          outcome->defense_triggered);
    }
    return kExitOk;
  }

  absl::StatusOr<ScenarioRun> run = RunScenario(*config);
  if (!run.ok()) {
    err << "invalid config: " << run.status().message() << "\n";
    return kExitInvalid;
  }
  const RoundRecord& round = run->transcript.rounds.back();
  const auto truth = [&](NodeId id) { return run->inputs[id.value - 1]; };

  if (kind == AdversaryKind::kCollusion) {
    std::vector<NodeId> targets = config->adversary.target.has_value()
                                      ? std::vector{*config->adversary.target}
                                      : CollusionTargets(round);
    for (NodeId target : targets) {
      absl::StatusOr<AttackOutcome> outcome =
          RunCollusionAttack(run->transcript, target);
      if (!outcome.ok()) {
        err << "collusion: " << outcome.status().message() << "\n";
        return kExitInvalid;
      }
      std::optional<uint64_t> disclosed;
      if (auto it = outcome->disclosed.find(target);
          it != outcome->disclosed.end()) {
        disclosed = it->second;
      }
      row("collusion", target, disclosed, truth(target), false);
    }
    return kExitOk;
  }

  Rng rng = Rng::Derive(config->seed, kLinkSampleStream);
  absl::StatusOr<AttackOutcome> outcome = RunLinkCompromise(
      run->transcript, config->adversary.link_break_probability, rng);
  if (!outcome.ok()) {
    err << "link: " << outcome.status().message() << "\n";
    return kExitInvalid;
  }
  for (const auto& [victim, value] : outcome->disclosed) {
    row("link", victim, value, truth(victim), false);
  }
  return kExitOk;
}

int CmdCurve(const CurveOptions& options, std::ostream& out,
             std::ostream& err) {
  absl::StatusOr<std::vector<double>> grid =
      options.grid.empty() ? MakeGrid(options.start, options.stop, options.step)
                           : absl::StatusOr<std::vector<double>>(options.grid);
  if (!grid.ok()) {
    err << "grid: " << grid.status().message() << "\n";
    return kExitInvalid;
  }
  for (double b : *grid) {
    if (!(b >= 0.0 && b <= 1.0)) {
      err << "grid: " << b << " is outside [0, 1]\n";
      return kExitInvalid;
    }
  }
  absl::StatusOr<DisclosureModel> model =
      options.cluster_mass.empty()
          ? DisclosureModel::Uniform(0.0, options.min_cluster,
                                     options.max_cluster)
          : DisclosureModel::Create(0.0, options.min_cluster,
                                    options.max_cluster, options.cluster_mass);
  if (!model.ok()) {
    err << "model: " << model.status().message() << "\n";
    return kExitInvalid;
  }
  auto cpda = SweepCurve(*model, /*ours=*/false, *grid);
  auto ours =
      SweepCurve(*model, /*ours=*/true, *grid, options.trials, options.seed);
  if (!cpda.ok() || !ours.ok()) {
    err << "curve: "
        << (cpda.ok() ? ours.status().message() : cpda.status().message())
        << "\n";
    return kExitInvalid;
  }
  if (auto s = WriteCurveCsv(out, *cpda, *ours); !s.ok()) {
    err << "curve: " << s.message() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int CmdBench(const BenchOptions& options, std::ostream& out,
             std::ostream& err) {
  if (options.repetitions == 0) {
    err << "repetitions: must be positive\n";
    return kExitInvalid;
  }
  std::vector<cpda::Scheme> schemes;
  if (options.scheme == "ours" || options.scheme == "both") {
    schemes.push_back(cpda::Scheme::kOurs);
  }
  if (options.scheme == "cpda" || options.scheme == "both") {
    schemes.push_back(cpda::Scheme::kCpda);
  }
  if (schemes.empty()) {
    err << "scheme: expected ours, cpda, or both\n";
    return kExitInvalid;
  }

  std::vector<cpda::BenchResult> results;
  for (cpda::Scheme scheme : schemes) {
    std::vector<uint32_t> sizes = options.sizes;
    if (sizes.empty()) {
      const uint32_t lo = scheme == cpda::Scheme::kOurs ? 2 : 3;
      const uint32_t hi = scheme == cpda::Scheme::kOurs ? 50 : 5;
      for (uint32_t n = lo; n <= hi; ++n) sizes.push_back(n);
    }
    for (uint32_t n : sizes) {
      absl::StatusOr<cpda::BenchResult> r =
          cpda::BenchmarkKernel(scheme, n, options.repetitions, options.seed);
      if (!r.ok()) {
        err << "sizes: " << r.status().message() << "\n";
        return kExitInvalid;
      }
      results.push_back(*r);
    }
  }
  out << "scheme,n_nodes,op_count,wall_ns_median,repetitions\n";
  for (const cpda::BenchResult& r : results) {
    out << cpda::SchemeName(r.scheme) << ',' << r.n_nodes << ',' << r.op_count
        << ',' << absl::StrFormat("%.1f", r.wall_ns_median) << ','
        << r.repetitions << "\n";
  }
  return kExitOk;
}

}  // namespace ringsum::cli
