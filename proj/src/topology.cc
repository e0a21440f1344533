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

#include "ringsum/topology.h"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ringsum {

namespace {

bool IsSource(NodeId id, uint32_t n) { return id.value >= 1 && id.value <= n; }

// Sources that can reach the aggregator.
std::set<NodeId> ReachableFromAggregator(
    const std::vector<std::vector<NodeId>>& adjacency,
    const std::set<NodeId>& aggregator_links) {
  std::set<NodeId> seen(aggregator_links.begin(), aggregator_links.end());
  std::deque<NodeId> queue(aggregator_links.begin(), aggregator_links.end());
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : adjacency[u.value]) {
      if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return seen;
}

}  // namespace

absl::StatusOr<Topology> Topology::Create(uint32_t n_sources,
                                          std::vector<Edge> source_edges,
                                          std::set<NodeId> aggregator_links) {
  if (n_sources == 0) {
    return absl::InvalidArgumentError("topology needs at least one source");
  }
  std::vector<std::vector<NodeId>> adjacency(n_sources + 1);
  for (auto [a, b] : source_edges) {
    if (!IsSource(a, n_sources) || !IsSource(b, n_sources) || a == b) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad source edge ", a.ToString(), "-", b.ToString()));
    }
    adjacency[a.value].push_back(b);
    adjacency[b.value].push_back(a);
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  for (NodeId s : aggregator_links) {
    if (!IsSource(s, n_sources)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad aggregator link to ", s.ToString()));
    }
  }
  std::set<NodeId> reachable =
      ReachableFromAggregator(adjacency, aggregator_links);
  for (uint32_t i = 1; i <= n_sources; ++i) {
    if (!reachable.contains(Source(i))) {
      return absl::InvalidArgumentError(
          absl::StrCat(Source(i).ToString(), " cannot reach the aggregator"));
    }
  }
  return Topology(n_sources, std::move(adjacency), std::move(aggregator_links),
                  {});
}

Topology Topology::Generate(uint32_t n_sources, double p, Rng& rng) {
  std::vector<std::vector<NodeId>> adjacency(n_sources + 1);
  for (uint32_t i = 1; i <= n_sources; ++i) {
    for (uint32_t j = i + 1; j <= n_sources; ++j) {
      if (rng.Bernoulli(p)) {
        adjacency[i].push_back(Source(j));
        adjacency[j].push_back(Source(i));
      }
    }
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());

  std::set<NodeId> aggregator_links;
  for (uint32_t i = 1; i <= n_sources; ++i) {
    if (rng.Bernoulli(p)) aggregator_links.insert(Source(i));
  }

  std::set<NodeId> augmented;
  for (uint32_t i = 1; i <= n_sources; ++i) {
    if (adjacency[i].empty() && !aggregator_links.contains(Source(i))) {
      aggregator_links.insert(Source(i));
      augmented.insert(Source(i));
    }
  }
  // Components still cut off from the aggregator, ascending by lowest id.
  std::set<NodeId> reachable =
      ReachableFromAggregator(adjacency, aggregator_links);
  for (uint32_t i = 1; i <= n_sources; ++i) {
    if (reachable.contains(Source(i))) continue;
    aggregator_links.insert(Source(i));
    augmented.insert(Source(i));
    reachable = ReachableFromAggregator(adjacency, aggregator_links);
  }
  return Topology(n_sources, std::move(adjacency), std::move(aggregator_links),
                  std::move(augmented));
}

std::vector<NodeId> Topology::sources() const {
  std::vector<NodeId> out;
  out.reserve(n_sources_);
  for (uint32_t i = 1; i <= n_sources_; ++i) out.push_back(Source(i));
  return out;
}

const std::vector<NodeId>& Topology::neighbors(NodeId id) const {
  static const std::vector<NodeId> kNone;
  if (!IsSource(id, n_sources_)) return kNone;
  return adjacency_[id.value];
}

size_t Topology::source_edge_count() const {
  size_t degree_sum = 0;
  for (const auto& list : adjacency_) degree_sum += list.size();
  return degree_sum / 2;
}

bool Topology::HasLink(NodeId a, NodeId b) const {
  if (a == b) return false;
  if (a.is_aggregator()) return aggregator_links_.contains(b);
  if (b.is_aggregator()) return aggregator_links_.contains(a);
  if (!IsSource(a, n_sources_) || !IsSource(b, n_sources_)) return false;
  return std::binary_search(adjacency_[a.value].begin(),
                            adjacency_[a.value].end(), b);
}

std::vector<NodeId> Topology::LinksOf(NodeId id) const {
  if (id.is_aggregator()) {
    return {aggregator_links_.begin(), aggregator_links_.end()};
  }
  std::vector<NodeId> out;
  if (aggregator_links_.contains(id)) out.push_back(kAggregator);
  const auto& list = neighbors(id);
  out.insert(out.end(), list.begin(), list.end());
  return out;
}

std::optional<std::vector<NodeId>> Topology::Route(
    NodeId from, NodeId to, const std::set<NodeId>& avoid) const {
  if (from == to) return std::vector<NodeId>{from};
  std::map<NodeId, NodeId> parent;
  parent.emplace(from, from);
  std::deque<NodeId> queue{from};
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    // LinksOf is ascending, so the first discovery is the lowest id.
    for (NodeId v : LinksOf(u)) {
      if (parent.contains(v)) continue;
      if (v != to && avoid.contains(v)) continue;
      parent.emplace(v, u);
      if (v == to) {
        std::vector<NodeId> path{to};
        while (path.back() != from) path.push_back(parent.at(path.back()));
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

}  // namespace ringsum
