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

#include "ringsum/protocol.h"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"

namespace ringsum {

absl::string_view MessageTypeName(MessageType type) {
  switch (type) {
    case MessageType::kInitiateRound:
      return "InitiateRound";
    case MessageType::kKeyIndexAnnounce:
      return "KeyIndexAnnounce";
    case MessageType::kPermutationExchange:
      return "PermutationExchange";
    case MessageType::kNeighborReport:
      return "NeighborReport";
    case MessageType::kNextHopDirective:
      return "NextHopDirective";
    case MessageType::kMaskedForward:
      return "MaskedForward";
    case MessageType::kRelayUp:
      return "RelayUp";
    case MessageType::kRelayDown:
      return "RelayDown";
    case MessageType::kRequestFinal:
      return "RequestFinal";
    case MessageType::kFinalMaskedValue:
      return "FinalMaskedValue";
    case MessageType::kComputeSumDirective:
      return "ComputeSumDirective";
    case MessageType::kSumReport:
      return "SumReport";
    case MessageType::kOperationRefused:
      return "OperationRefused";
  }
  return "Unknown";
}

bool IsChainTransfer(MessageType type) {
  return type == MessageType::kMaskedForward || type == MessageType::kRelayUp ||
         type == MessageType::kRelayDown ||
         type == MessageType::kFinalMaskedValue;
}

absl::string_view RelayModeName(RelayMode mode) {
  return mode == RelayMode::kDirect ? "direct" : "strict-relay";
}

absl::string_view OutcomeName(RoundResult::Outcome outcome) {
  switch (outcome) {
    case RoundResult::Outcome::kSum:
      return "sum";
    case RoundResult::Outcome::kRefused:
      return "refused";
    case RoundResult::Outcome::kAborted:
      return "aborted";
  }
  return "unknown";
}

namespace {

struct SummaryVisitor {
  std::string operator()(std::monostate) const { return "-"; }
  std::string operator()(MaskedValue v) const {
    return absl::StrCat("R=", v.value);
  }
  std::string operator()(AggregateSum v) const {
    return absl::StrCat("X=", v.total);
  }
  std::string operator()(const KeyIndexPayload& p) const {
    if (p.scope == KeyScope::kSourceAggregator) {
      return absl::StrCat("index=", p.index.value, " scope=aggregator");
    }
    return absl::StrCat("index=", p.index.value, " pair=", p.peer_a.ToString(),
                        ":", p.peer_b.ToString());
  }
  std::string operator()(NodeId id) const {
    return absl::StrCat("next=", id.ToString());
  }
  std::string operator()(const std::vector<NodeId>& ids) const {
    return absl::StrCat(
        "neighbors=",
        ids.empty() ? std::string("none")
                    : absl::StrJoin(ids, ",", [](std::string* out, NodeId id) {
                        out->append(id.ToString());
                      }));
  }
  std::string operator()(const Permutation& p) const {
    return absl::StrCat("perm[", p.size(), "]");
  }
};

}  // namespace

std::string ProtocolMessage::PayloadSummary() const {
  return std::visit(SummaryVisitor{}, payload);
}

std::optional<uint64_t> ProtocolMessage::ScalarValue() const {
  if (const auto* v = std::get_if<MaskedValue>(&payload)) return v->value;
  if (const auto* v = std::get_if<AggregateSum>(&payload)) return v->total;
  return std::nullopt;
}

absl::StatusOr<MaskedValue> SourceNode::BeginAsInitiator(Rng& rng) {
  return BeginAsInitiator(InitialMask{rng.UniformBelow(modulus_.value())});
}

absl::StatusOr<MaskedValue> SourceNode::BeginAsInitiator(InitialMask mask) {
  if (phase_ != SourcePhase::kIdle) {
    return absl::FailedPreconditionError(
        absl::StrCat(id_.ToString(), " cannot initiate: already active"));
  }
  absl::StatusOr<MaskedValue> first = MaskInitial(value_, mask, modulus_);
  if (!first.ok()) return first.status();
  mask_ = mask;
  held_ = *first;
  phase_ = SourcePhase::kInitiator;
  ++contributions_;
  return *first;
}

absl::StatusOr<MaskedValue> SourceNode::AcceptMasked(MaskedValue previous) {
  if (phase_ != SourcePhase::kIdle) {
    return absl::FailedPreconditionError(
        absl::StrCat(id_.ToString(), " already participated this round"));
  }
  absl::StatusOr<MaskedValue> next = ChainAdd(previous, value_, modulus_);
  if (!next.ok()) return next.status();
  held_ = *next;
  phase_ = SourcePhase::kAwaitingForward;
  ++contributions_;
  return *next;
}

absl::StatusOr<MaskedValue> SourceNode::ReleaseMasked() {
  if (!held_.has_value()) {
    return absl::FailedPreconditionError(
        absl::StrCat(id_.ToString(), " holds no masked value"));
  }
  MaskedValue out = *held_;
  held_.reset();
  phase_ = SourcePhase::kParticipated;
  return out;
}

absl::StatusOr<ProtocolMessage> SourceNode::ComputeSum(
    MaskedValue final_value) const {
  if (!mask_.has_value()) {
    return absl::FailedPreconditionError(absl::StrCat(
        id_.ToString(), " is not the initiator and holds no mask"));
  }
  absl::StatusOr<AggregateSum> sum = Unmask(final_value, *mask_, modulus_);
  if (!sum.ok()) return sum.status();
  if (defense_enabled_ && sum->total == value_.value) {
    // "Operation cannot be performed": revealing X would reveal x_1.
    return ProtocolMessage{MessageType::kOperationRefused, id_, kAggregator,
                           std::monostate{}};
  }
  return ProtocolMessage{MessageType::kSumReport, id_, kAggregator, *sum};
}

void SourceNode::ResetRound() {
  phase_ = SourcePhase::kIdle;
  mask_.reset();
  held_.reset();
  contributions_ = 0;
}

absl::StatusOr<ProtocolMessage> ForwardMasked(SourceNode& from, NodeId to,
                                              const SourceKeyStore& keys) {
  if (keys.id() != from.id()) {
    return absl::InvalidArgumentError("key store belongs to another source");
  }
  if (keys.pairwise_key(to) == nullptr) {
    return absl::FailedPreconditionError(
        absl::StrCat("no pairwise key between ", from.id().ToString(), " and ",
                     to.ToString()));
  }
  absl::StatusOr<MaskedValue> value = from.ReleaseMasked();
  if (!value.ok()) return value.status();
  return ProtocolMessage{MessageType::kMaskedForward, from.id(), to, *value};
}

AggregatorNode::AggregatorNode(std::vector<NodeId> sources, RelayMode mode)
    : sources_(std::move(sources)), mode_(mode) {
  std::sort(sources_.begin(), sources_.end());
}

absl::StatusOr<NodeId> AggregatorNode::StartRound(Rng& rng) {
  if (sources_.empty()) {
    return absl::FailedPreconditionError("no sources to aggregate");
  }
  NodeId chosen = sources_[rng.UniformBelow(sources_.size())];
  if (auto s = StartRoundWith(chosen); !s.ok()) return s;
  return chosen;
}

absl::Status AggregatorNode::StartRoundWith(NodeId initiator) {
  if (!std::binary_search(sources_.begin(), sources_.end(), initiator)) {
    return absl::InvalidArgumentError(
        absl::StrCat(initiator.ToString(), " is not a source"));
  }
  participated_.clear();
  participated_.insert(initiator);
  initiator_ = initiator;
  return absl::OkStatus();
}

NextHopDecision AggregatorNode::SelectNext(
    std::span<const NodeId> reported_neighbors, Rng& rng) {
  std::vector<NodeId> eligible;
  for (NodeId n : reported_neighbors) {
    if (!n.is_aggregator() && !participated_.contains(n) &&
        std::binary_search(sources_.begin(), sources_.end(), n)) {
      eligible.push_back(n);
    }
  }
  std::sort(eligible.begin(), eligible.end());
  eligible.erase(std::unique(eligible.begin(), eligible.end()), eligible.end());
  if (eligible.empty()) return NeighborhoodExhausted{};
  NodeId chosen = eligible[rng.UniformBelow(eligible.size())];
  participated_.insert(chosen);
  return chosen;
}

absl::StatusOr<NodeId> AggregatorNode::RelayJump(Rng& rng) {
  std::vector<NodeId> remaining;
  for (NodeId n : sources_) {
    if (!participated_.contains(n)) remaining.push_back(n);
  }
  if (remaining.empty()) {
    return absl::FailedPreconditionError(
        "relay jump requested but every source participated");
  }
  NodeId chosen = remaining[rng.UniformBelow(remaining.size())];
  participated_.insert(chosen);
  return chosen;
}

}  // namespace ringsum
