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

#ifndef RINGSUM_TOPOLOGY_H_
#define RINGSUM_TOPOLOGY_H_

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ringsum/node_id.h"
#include "ringsum/random.h"

namespace ringsum {

// Undirected source graph plus the set of sources with a direct link to the
// aggregator. A valid topology lets every source reach the aggregator, and
// gives every source at least one source neighbour or an aggregator link.
class Topology {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  // Validates the connectivity invariants.
  static absl::StatusOr<Topology> Create(uint32_t n_sources,
                                         std::vector<Edge> source_edges,
                                         std::set<NodeId> aggregator_links);

  // Links each source pair, and each source to the aggregator, independently
  // with probability p. Isolated sources are then linked to the aggregator,
  // and every remaining component without an aggregator link gets one at its
  // lowest-id member. Those additions are reported by augmented_links().
  static Topology Generate(uint32_t n_sources, double p, Rng& rng);

  uint32_t n_sources() const { return n_sources_; }
  std::vector<NodeId> sources() const;
  // Source neighbours of `id`, ascending. Never includes the aggregator.
  const std::vector<NodeId>& neighbors(NodeId id) const;
  const std::set<NodeId>& aggregator_links() const { return aggregator_links_; }
  const std::set<NodeId>& augmented_links() const { return augmented_; }
  size_t source_edge_count() const;

  bool HasLink(NodeId a, NodeId b) const;

  // Shortest path from `from` to `to` over sources and the aggregator,
  // inclusive of both ends. Ties go to the lowest id at each BFS layer.
  // Nodes in `avoid` are not used as intermediate hops.
  std::optional<std::vector<NodeId>> Route(
      NodeId from, NodeId to, const std::set<NodeId>& avoid = {}) const;

 private:
  Topology(uint32_t n_sources, std::vector<std::vector<NodeId>> adjacency,
           std::set<NodeId> aggregator_links, std::set<NodeId> augmented)
      : n_sources_(n_sources),
        adjacency_(std::move(adjacency)),
        aggregator_links_(std::move(aggregator_links)),
        augmented_(std::move(augmented)) {}

  std::vector<NodeId> LinksOf(NodeId id) const;

  uint32_t n_sources_;
  std::vector<std::vector<NodeId>> adjacency_;  // index = source id
  std::set<NodeId> aggregator_links_;
  std::set<NodeId> augmented_;
};

}  // namespace ringsum

#endif  // RINGSUM_TOPOLOGY_H_
