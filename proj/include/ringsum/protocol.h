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

#ifndef RINGSUM_PROTOCOL_H_
#define RINGSUM_PROTOCOL_H_

// State machines for one aggregation round.
//
// The aggregator picks a random initiator, which masks its value and reports
// its neighbourhood. From then on the aggregator repeatedly picks a random
// not-yet-participated neighbour of the current holder as the next hop. When
// every reported neighbour has participated but some sources have not, the
// holder's value is relayed through the aggregator to a random
// non-participant. Once all sources have added their value, the aggregator
// collects R_N and asks the initiator to remove its mask. The initiator
// refuses if the result equals its own input, which is what a server that
// skipped every other source would see.
//
// These classes only track state and build messages; transport, keys on the
// wire, and the transcript live in simnet.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ringsum/keying.h"
#include "ringsum/node_id.h"
#include "ringsum/random.h"
#include "ringsum/secure_sum.h"

namespace ringsum {

enum class MessageType {
  kInitiateRound,
  kKeyIndexAnnounce,
  kPermutationExchange,
  kNeighborReport,
  kNextHopDirective,
  kMaskedForward,
  kRelayUp,
  kRelayDown,
  kRequestFinal,
  kFinalMaskedValue,
  kComputeSumDirective,
  kSumReport,
  kOperationRefused,
};

absl::string_view MessageTypeName(MessageType type);

// Messages whose payload is a running masked value R_i in transit between
// chain positions.
bool IsChainTransfer(MessageType type);

// Scope tag carried by a plaintext key index.
struct KeyIndexPayload {
  KeyIndex index;
  KeyScope scope = KeyScope::kSourceAggregator;
  NodeId peer_a;  // pairwise only
  NodeId peer_b;
  friend bool operator==(const KeyIndexPayload&,
                         const KeyIndexPayload&) = default;
};

using Payload =
    std::variant<std::monostate, MaskedValue, AggregateSum, KeyIndexPayload,
                 NodeId, std::vector<NodeId>, Permutation>;

struct ProtocolMessage {
  MessageType type;
  NodeId origin;
  NodeId destination;
  Payload payload;

  // Short human-readable rendering of the payload for trace logs.
  std::string PayloadSummary() const;
  std::optional<uint64_t> ScalarValue() const;
};

enum class RelayMode { kDirect, kStrictRelay };

absl::string_view RelayModeName(RelayMode mode);

struct RoundResult {
  enum class Outcome { kSum, kRefused, kAborted };

  Outcome outcome = Outcome::kAborted;
  AggregateSum sum;    // kSum only
  std::string reason;  // kAborted only

  static RoundResult Sum(AggregateSum sum) { return {Outcome::kSum, sum, ""}; }
  static RoundResult Refused() { return {Outcome::kRefused, {}, ""}; }
  static RoundResult Aborted(std::string reason) {
    return {Outcome::kAborted, {}, std::move(reason)};
  }
};

absl::string_view OutcomeName(RoundResult::Outcome outcome);

enum class SourcePhase { kIdle, kInitiator, kAwaitingForward, kParticipated };

class SourceNode {
 public:
  SourceNode(NodeId id, PrivateValue value, Modulus modulus,
             bool defense_enabled = true)
      : id_(id),
        value_(value),
        modulus_(modulus),
        defense_enabled_(defense_enabled) {}

  NodeId id() const { return id_; }
  SourcePhase phase() const { return phase_; }
  PrivateValue value() const { return value_; }
  bool is_initiator() const { return mask_.has_value(); }
  // Number of times this node folded its value into the chain this round.
  int contributions() const { return contributions_; }

  // Handles InitiateRound: draws r uniformly from [0, M) and returns R_1.
  absl::StatusOr<MaskedValue> BeginAsInitiator(Rng& rng);
  absl::StatusOr<MaskedValue> BeginAsInitiator(InitialMask mask);

  // Handles an incoming R_{i-1}; returns R_i.
  absl::StatusOr<MaskedValue> AcceptMasked(MaskedValue previous);

  // Hands the held R_i on (forward, relay, or final report).
  absl::StatusOr<MaskedValue> ReleaseMasked();

  // Handles ComputeSumDirective. Produces SumReport, or OperationRefused
  // when the unmasked result equals this node's own input and the defense
  // is on.
  absl::StatusOr<ProtocolMessage> ComputeSum(MaskedValue final_value) const;

  void ResetRound();

 private:
  NodeId id_;
  PrivateValue value_;
  Modulus modulus_;
  bool defense_enabled_;
  SourcePhase phase_ = SourcePhase::kIdle;
  std::optional<InitialMask> mask_;
  std::optional<MaskedValue> held_;
  int contributions_ = 0;
};

// Builds the MaskedForward from `from` to `to`. Direct mode requires a
// pairwise key between them.
absl::StatusOr<ProtocolMessage> ForwardMasked(SourceNode& from, NodeId to,
                                              const SourceKeyStore& keys);

struct NeighborhoodExhausted {
  friend bool operator==(NeighborhoodExhausted,
                         NeighborhoodExhausted) = default;
};
using NextHopDecision = std::variant<NodeId, NeighborhoodExhausted>;

class AggregatorNode {
 public:
  AggregatorNode(std::vector<NodeId> sources, RelayMode mode);

  RelayMode mode() const { return mode_; }
  NodeId initiator() const { return initiator_; }
  const std::set<NodeId>& participated() const { return participated_; }
  bool AllParticipated() const {
    return participated_.size() == sources_.size();
  }

  // Picks the initiator uniformly among all sources.
  absl::StatusOr<NodeId> StartRound(Rng& rng);
  absl::Status StartRoundWith(NodeId initiator);

  // Picks uniformly among reported neighbours that have not participated;
  // the choice is recorded as participated.
  NextHopDecision SelectNext(std::span<const NodeId> reported_neighbors,
                             Rng& rng);

  // Picks uniformly among all sources that have not participated.
  absl::StatusOr<NodeId> RelayJump(Rng& rng);

 private:
  std::vector<NodeId> sources_;
  RelayMode mode_;
  NodeId initiator_;
  std::set<NodeId> participated_;
};

}  // namespace ringsum

#endif  // RINGSUM_PROTOCOL_H_
