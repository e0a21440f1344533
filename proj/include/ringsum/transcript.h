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

#ifndef RINGSUM_TRANSCRIPT_H_
#define RINGSUM_TRANSCRIPT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ringsum/node_id.h"
#include "ringsum/protocol.h"

namespace ringsum {

// Handle for a session key in the possession ledger.
struct KeyId {
  uint32_t value = 0;
  std::string ToString() const;
  friend auto operator<=>(KeyId, KeyId) = default;
};

// One message crossing one link.
struct TraceEvent {
  uint64_t step = 0;
  uint32_t round = 0;
  // Shared by every hop of a routed message.
  uint64_t message_id = 0;
  NodeId hop_sender;
  NodeId hop_receiver;
  ProtocolMessage message;
  std::optional<KeyId> key;  // nullopt = plaintext
  // Principals able to read the payload, ascending.
  std::vector<NodeId> readable_by;

  bool ReadableBy(NodeId id) const;
};

struct RoundRecord {
  uint32_t index = 0;
  NodeId initiator;
  // Sources in the order they added their value.
  std::vector<NodeId> visitation;
  // Sources reached through the aggregator rather than a direct forward.
  std::set<NodeId> relayed_arrivals;
  std::map<NodeId, int> contributions;
  RoundResult result;
};

struct Transcript {
  uint64_t seed = 0;
  uint32_t n_sources = 0;
  uint64_t modulus = 0;
  RelayMode mode = RelayMode::kDirect;
  std::vector<TraceEvent> events;
  std::vector<RoundRecord> rounds;

  const RoundResult& final_result() const { return rounds.back().result; }

  // Line-oriented log: one
  //   step<TAB>sender<TAB>receiver<TAB>variant<TAB>keyid|PLAIN<TAB>payload
  // line per event, where sender and receiver are the hop endpoints.
  // Metadata lines start with '#'.
  std::string Serialize() const;
};

}  // namespace ringsum

#endif  // RINGSUM_TRANSCRIPT_H_
