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

#include "ringsum/network.h"

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ringsum {

KeyId KeyRegistry::Register(std::set<NodeId> holders) {
  KeyId id{next_++};
  holders_.emplace(id, std::move(holders));
  return id;
}

const std::set<NodeId>& KeyRegistry::holders(KeyId id) const {
  static const std::set<NodeId> kNobody;
  auto it = holders_.find(id);
  return it == holders_.end() ? kNobody : it->second;
}

absl::Status Network::CheckKey(const ProtocolMessage& message,
                               std::optional<KeyId> key) const {
  if (!key.has_value()) return absl::OkStatus();
  for (NodeId end : {message.origin, message.destination}) {
    if (!keys_.Holds(*key, end)) {
      return absl::FailedPreconditionError(
          absl::StrCat(end.ToString(), " does not hold key ", key->ToString(),
                       " for ", MessageTypeName(message.type)));
    }
  }
  return absl::OkStatus();
}

TraceEvent Network::Record(const ProtocolMessage& message,
                           std::optional<KeyId> key, NodeId hop_sender,
                           NodeId hop_receiver, uint64_t message_id) {
  TraceEvent event;
  event.step = next_step_++;
  event.round = round_;
  event.message_id = message_id;
  event.hop_sender = hop_sender;
  event.hop_receiver = hop_receiver;
  event.message = message;
  event.key = key;
  if (key.has_value()) {
    const std::set<NodeId>& holders = keys_.holders(*key);
    event.readable_by.assign(holders.begin(), holders.end());
  } else {
    event.readable_by.push_back(kAggregator);
    for (NodeId s : topology_.sources()) event.readable_by.push_back(s);
  }
  transcript_.events.push_back(event);
  return event;
}

absl::StatusOr<TraceEvent> Network::Deliver(const ProtocolMessage& message,
                                            std::optional<KeyId> key) {
  if (!topology_.HasLink(message.origin, message.destination)) {
    return absl::FailedPreconditionError(
        absl::StrCat("no link between ", message.origin.ToString(), " and ",
                     message.destination.ToString()));
  }
  if (offline_.contains(message.destination)) {
    return absl::UnavailableError(
        absl::StrCat(message.destination.ToString(), " is unreachable"));
  }
  if (auto s = CheckKey(message, key); !s.ok()) return s;
  return Record(message, key, message.origin, message.destination,
                next_message_++);
}

absl::Status Network::Route(const ProtocolMessage& message,
                            std::optional<KeyId> key) {
  if (offline_.contains(message.destination)) {
    return absl::UnavailableError(
        absl::StrCat(message.destination.ToString(), " is unreachable"));
  }
  std::optional<std::vector<NodeId>> path =
      topology_.Route(message.origin, message.destination, offline_);
  if (!path.has_value() || path->size() < 2) {
    return absl::UnavailableError(
        absl::StrCat("no route from ", message.origin.ToString(), " to ",
                     message.destination.ToString()));
  }
  if (auto s = CheckKey(message, key); !s.ok()) return s;
  const uint64_t id = next_message_++;
  for (size_t i = 0; i + 1 < path->size(); ++i) {
    Record(message, key, (*path)[i], (*path)[i + 1], id);
  }
  return absl::OkStatus();
}

}  // namespace ringsum
