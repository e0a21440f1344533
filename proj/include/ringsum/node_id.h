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

#ifndef RINGSUM_NODE_ID_H_
#define RINGSUM_NODE_ID_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace ringsum {

// Identifies a principal. Sources are numbered 1..N; 0 is the aggregator.
struct NodeId {
  uint32_t value = 0;

  bool is_aggregator() const { return value == 0; }
  std::string ToString() const;

  friend auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr NodeId kAggregator{0};

inline NodeId Source(uint32_t id) { return NodeId{id}; }

}  // namespace ringsum

template <>
struct std::hash<ringsum::NodeId> {
  size_t operator()(ringsum::NodeId id) const noexcept {
    return std::hash<uint32_t>{}(id.value);
  }
};

#endif  // RINGSUM_NODE_ID_H_
