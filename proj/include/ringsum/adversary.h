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

#ifndef RINGSUM_ADVERSARY_H_
#define RINGSUM_ADVERSARY_H_

// Attacks replayed against recorded transcripts.
//
// Every attack reads payloads only through TraceEvent::readable_by, so what
// an attacker learns is exactly what key possession grants it.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ringsum/node_id.h"
#include "ringsum/protocol.h"
#include "ringsum/random.h"
#include "ringsum/scenario.h"
#include "ringsum/transcript.h"

namespace ringsum {

struct AttackOutcome {
  // Recovered private values, keyed by victim.
  std::map<NodeId, uint64_t> disclosed;
  bool success = false;
  bool defense_triggered = false;
};

// One message as seen by a coalition of semi-honest nodes.
struct Observation {
  uint64_t step = 0;
  uint32_t round = 0;
  MessageType type;
  NodeId origin;
  NodeId destination;
  Payload payload;
};

// Messages of `round` (every round when nullopt) readable by any node in
// `nodes`, one entry per message regardless of how many hops it took.
std::vector<Observation> SemiHonestView(
    const Transcript& transcript, const std::set<NodeId>& nodes,
    std::optional<uint32_t> round = std::nullopt);

// Masked chain values (R_i in transit, or R_N handed back to the initiator)
// within a view.
std::vector<MaskedValue> ObservedMaskedValues(
    const std::vector<Observation>& view);

// The predecessor and successor of `target` in the round's visitation order
// pool what they can read of the value entering and the value leaving the
// target. kFailedPrecondition when the target is first or last in the order.
absl::StatusOr<AttackOutcome> RunCollusionAttack(
    const Transcript& transcript, NodeId target,
    std::optional<uint32_t> round = std::nullopt);

// Targets with both a predecessor and a successor in the visitation order.
std::vector<NodeId> CollusionTargets(const RoundRecord& round);

// The server declares the initiator's neighbourhood exhausted right after
// initiation and asks it to unmask its own R_1. With `initiator` unset the
// probe is repeated once per source, each as initiator. The scenario's
// adversary.defense_enabled selects the ablation.
absl::StatusOr<AttackOutcome> RunServerProbe(
    const ScenarioConfig& scenario,
    std::optional<NodeId> initiator = std::nullopt);

// Link-level eavesdropping. Every link carrying traffic in the round is
// broken independently with probability b; a masked value is exposed when
// any hop of its route is broken. A source is disclosed when both the value
// entering it and the value leaving it are exposed.
class LinkCompromiseModel {
 public:
  static absl::StatusOr<LinkCompromiseModel> Create(
      const Transcript& transcript,
      std::optional<uint32_t> round = std::nullopt);

  AttackOutcome Sample(double b, Rng& rng) const;

  // Sources that have both an incoming and an outgoing chain value.
  std::vector<NodeId> exposable_sources() const;

 private:
  struct Transfer {
    uint64_t value = 0;
    std::vector<size_t> links;  // indices into links_
  };
  struct Victim {
    NodeId id;
    Transfer incoming;
    Transfer outgoing;
  };

  LinkCompromiseModel(uint64_t modulus, size_t link_count,
                      std::vector<Victim> victims)
      : modulus_(modulus),
        link_count_(link_count),
        victims_(std::move(victims)) {}

  uint64_t modulus_;
  size_t link_count_;
  std::vector<Victim> victims_;
};

absl::StatusOr<AttackOutcome> RunLinkCompromise(
    const Transcript& transcript, double b, Rng& rng,
    std::optional<uint32_t> round = std::nullopt);

}  // namespace ringsum

#endif  // RINGSUM_ADVERSARY_H_
