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

#ifndef RINGSUM_SCENARIO_H_
#define RINGSUM_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ringsum/node_id.h"
#include "ringsum/protocol.h"
#include "ringsum/topology.h"
#include "ringsum/transcript.h"

namespace ringsum {

enum class AdversaryKind { kNone, kCollusion, kServerProbe, kLinkCompromise };

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::kNone;
  std::optional<NodeId> target;         // kCollusion; nullopt = every target
  double link_break_probability = 0.0;  // kLinkCompromise
  // Ablation switch for the initiator's X == x_1 check. Only a server probe
  // spec may turn it off.
  bool defense_enabled = true;
};

struct ScenarioConfig {
  uint32_t n_sources = 0;
  // Either explicit inputs, or value_range to draw each input uniformly from
  // [0, value_range) with the scenario seed.
  std::vector<uint64_t> values;
  std::optional<uint64_t> value_range;
  uint64_t modulus = 0;
  uint32_t total_keys = 100;
  uint32_t source_keys = 30;
  double edge_probability = 1.0;
  uint64_t seed = 0;
  RelayMode mode = RelayMode::kDirect;
  AdversarySpec adversary;
  // Attempt budget: rounds run until one yields a sum or the budget is
  // spent. A refused round is retried with a fresh initiator.
  uint32_t rounds = 1;

  // Not settable from config files.
  std::optional<Topology> topology;
  std::optional<NodeId> forced_initiator;
  // Sources that go offline right after the round is initiated.
  std::vector<NodeId> offline_after_start;

  // kInvalidArgument naming the offending field.
  absl::Status Validate() const;
};

struct ScenarioRun {
  Transcript transcript;
  Topology topology;
  // Ground truth; not part of the transcript.
  std::vector<uint64_t> inputs;
};

// Provisions keys, then runs rounds. Pure function of the config.
absl::StatusOr<ScenarioRun> RunScenario(const ScenarioConfig& config);

}  // namespace ringsum

#endif  // RINGSUM_SCENARIO_H_
