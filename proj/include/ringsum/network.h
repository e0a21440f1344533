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

#ifndef RINGSUM_NETWORK_H_
#define RINGSUM_NETWORK_H_

// Message delivery over a Topology with possession-based confidentiality:
// an encrypted payload is readable exactly by the holders of its key, a
// plaintext payload by every principal.

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ringsum/node_id.h"
#include "ringsum/protocol.h"
#include "ringsum/topology.h"
#include "ringsum/transcript.h"

namespace ringsum {

// Who holds which session key.
class KeyRegistry {
 public:
  KeyId Register(std::set<NodeId> holders);
  // Empty set for unknown ids.
  const std::set<NodeId>& holders(KeyId id) const;
  bool Holds(KeyId id, NodeId who) const { return holders(id).contains(who); }

 private:
  std::map<KeyId, std::set<NodeId>> holders_;
  uint32_t next_ = 1;
};

// Not thread-safe; one per simulator instance.
class Network {
 public:
  Network(const Topology& topology, const KeyRegistry& keys,
          Transcript& transcript)
      : topology_(topology), keys_(keys), transcript_(transcript) {}

  void set_round(uint32_t round) { round_ = round; }

  // A node that is offline neither receives nor forwards.
  void SetOffline(NodeId id) { offline_.insert(id); }

  // Single-link delivery from message.origin to message.destination.
  // Fails with kFailedPrecondition when no link joins them or an endpoint
  // lacks the key.
  absl::StatusOr<TraceEvent> Deliver(const ProtocolMessage& message,
                                     std::optional<KeyId> key);

  // Delivery along the shortest path; every hop is recorded. Intermediate
  // hops carry the same ciphertext and cannot read it unless they hold the
  // key.
  absl::Status Route(const ProtocolMessage& message, std::optional<KeyId> key);

 private:
  absl::Status CheckKey(const ProtocolMessage& message,
                        std::optional<KeyId> key) const;
  TraceEvent Record(const ProtocolMessage& message, std::optional<KeyId> key,
                    NodeId hop_sender, NodeId hop_receiver,
                    uint64_t message_id);

  const Topology& topology_;
  const KeyRegistry& keys_;
  Transcript& transcript_;
  std::set<NodeId> offline_;
  uint32_t round_ = 0;
  uint64_t next_step_ = 0;
  uint64_t next_message_ = 0;
};

}  // namespace ringsum

#endif  // RINGSUM_NETWORK_H_
