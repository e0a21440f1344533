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

#include "ringsum/scenario.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "ringsum/keying.h"
#include "ringsum/network.h"
#include "ringsum/protocol.h"
#include "ringsum/random.h"
#include "ringsum/secure_sum.h"

namespace ringsum {

namespace {

// Independent generator streams derived from the scenario seed. Server
// choices never share a stream with key establishment, so direct and
// strict-relay runs of one seed visit sources in the same order.
constexpr uint64_t kTopologyStream = 1;
constexpr uint64_t kBankStream = 2;
constexpr uint64_t kServerStream = 3;
constexpr uint64_t kValueStream = 4;
constexpr uint64_t kHandshakeStream = 5;
constexpr uint64_t kProvisionStreamBase = 1ULL << 32;
constexpr uint64_t kNodeStreamBase = 2ULL << 32;
constexpr uint64_t kNodeKeyStreamBase = 3ULL << 32;

absl::Status FieldError(absl::string_view field, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", message));
}

class Simulator {
 public:
  Simulator(const ScenarioConfig& config, Topology topology,
            std::vector<uint64_t> inputs, Modulus modulus, KeyDeployment keys)
      : config_(config),
        topology_(std::move(topology)),
        inputs_(std::move(inputs)),
        modulus_(modulus),
        keys_(std::move(keys)),
        network_(topology_, registry_, transcript_),
        aggregator_(topology_.sources(), config.mode),
        server_rng_(Rng::Derive(config.seed, kServerStream)),
        handshake_rng_(Rng::Derive(config.seed, kHandshakeStream)) {
    transcript_.seed = config.seed;
    transcript_.n_sources = topology_.n_sources();
    transcript_.modulus = modulus.value();
    transcript_.mode = config.mode;
    const bool defense = config.adversary.defense_enabled;
    for (NodeId s : topology_.sources()) {
      nodes_.emplace(s, SourceNode(s, PrivateValue{inputs_[s.value - 1]},
                                   modulus_, defense));
      node_rngs_.emplace(s,
                         Rng::Derive(config.seed, kNodeStreamBase + s.value));
      node_key_rngs_.emplace(
          s, Rng::Derive(config.seed, kNodeKeyStreamBase + s.value));
    }
  }

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  void RunRounds() {
    for (uint32_t r = 0; r < config_.rounds; ++r) {
      RoundRecord record;
      record.index = r;
      network_.set_round(r);
      absl::StatusOr<RoundResult> result = RoundBody(record);
      record.result =
          result.ok()
              ? *result
              : RoundResult::Aborted(std::string(result.status().message()));
      for (const auto& [id, node] : nodes_) {
        if (node.contributions() > 0) {
          record.contributions[id] = node.contributions();
        }
      }
      keys_.EndRound();
      transcript_.rounds.push_back(std::move(record));
      if (transcript_.rounds.back().result.outcome !=
          RoundResult::Outcome::kRefused) {
        break;
      }
    }
  }

  ScenarioRun Finish() && {
    return ScenarioRun{std::move(transcript_), std::move(topology_),
                       std::move(inputs_)};
  }

 private:
  SourceNode& node(NodeId id) { return nodes_.at(id); }

  absl::Status SendToAggregator(ProtocolMessage message) {
    return network_.Route(message, aggregator_keys_.at(message.origin));
  }

  absl::Status SendFromAggregator(ProtocolMessage message) {
    return network_.Route(message, aggregator_keys_.at(message.destination));
  }

  absl::Status OpenAggregatorSessions() {
    aggregator_keys_.clear();
    for (NodeId s : topology_.sources()) {
      auto selected = keys_.SelectAggregatorKey(s, node_key_rngs_.at(s));
      if (!selected.ok()) return selected.status();
      const auto& [index, key] = *selected;
      absl::StatusOr<SessionKey> resolved =
          keys_.ResolveAggregatorKey(s, index);
      if (!resolved.ok()) return resolved.status();
      if (resolved->material != key.material) {
        return absl::InternalError(
            absl::StrCat("server resolved a different key for ", s.ToString()));
      }
      ProtocolMessage announce{
          MessageType::kKeyIndexAnnounce, s, kAggregator,
          KeyIndexPayload{index, KeyScope::kSourceAggregator, {}, {}}};
      if (auto st = network_.Route(announce, std::nullopt); !st.ok()) {
        return st;
      }
      aggregator_keys_[s] = registry_.Register({s, kAggregator});
    }
    return absl::OkStatus();
  }

  absl::Status EstablishPairwise(NodeId a, NodeId b) {
    auto relay = [&](const PairwiseRelayMessage& m) -> absl::Status {
      ProtocolMessage up{MessageType::kPermutationExchange, m.from, kAggregator,
                         std::monostate{}};
      ProtocolMessage down{MessageType::kPermutationExchange, kAggregator, m.to,
                           std::monostate{}};
      if (m.kind == PairwiseRelayMessage::Kind::kPermutation) {
        up.payload = down.payload = *m.permutation;
        if (auto s = SendToAggregator(up); !s.ok()) return s;
        return SendFromAggregator(down);
      }
      up.type = down.type = MessageType::kKeyIndexAnnounce;
      up.payload = down.payload =
          KeyIndexPayload{m.index, KeyScope::kSourceSource, a, b};
      if (auto s = network_.Route(up, std::nullopt); !s.ok()) return s;
      return network_.Route(down, std::nullopt);
    };
    auto established = keys_.EstablishPairwiseKey(a, b, handshake_rng_, relay);
    if (!established.ok()) return established.status();
    pairwise_keys_[std::minmax(a, b)] = registry_.Register({a, b});
    return absl::OkStatus();
  }

  // Hands the current holder's value to `next` through the aggregator.
  absl::StatusOr<MaskedValue> RelayThroughAggregator(NodeId from, NodeId next) {
    absl::StatusOr<MaskedValue> value = node(from).ReleaseMasked();
    if (!value.ok()) return value.status();
    if (auto s = SendToAggregator(
            {MessageType::kRelayUp, from, kAggregator, *value});
        !s.ok()) {
      return s;
    }
    if (auto s = SendFromAggregator(
            {MessageType::kRelayDown, kAggregator, next, *value});
        !s.ok()) {
      return s;
    }
    return *value;
  }

  absl::StatusOr<MaskedValue> ForwardDirect(NodeId from, NodeId next) {
    if (auto s = EstablishPairwise(from, next); !s.ok()) return s;
    absl::StatusOr<ProtocolMessage> message =
        ForwardMasked(node(from), next, *keys_.source(from));
    if (!message.ok()) return message.status();
    absl::StatusOr<TraceEvent> delivered =
        network_.Deliver(*message, pairwise_keys_.at(std::minmax(from, next)));
    if (!delivered.ok()) return delivered.status();
    return std::get<MaskedValue>(message->payload);
  }

  absl::StatusOr<RoundResult> RoundBody(RoundRecord& record) {
    for (auto& [id, n] : nodes_) n.ResetRound();
    pairwise_keys_.clear();
    if (auto s = OpenAggregatorSessions(); !s.ok()) return s;

    NodeId initiator;
    if (record.index == 0 && config_.forced_initiator.has_value()) {
      initiator = *config_.forced_initiator;
      if (auto s = aggregator_.StartRoundWith(initiator); !s.ok()) return s;
    } else {
      absl::StatusOr<NodeId> chosen = aggregator_.StartRound(server_rng_);
      if (!chosen.ok()) return chosen.status();
      initiator = *chosen;
    }
    record.initiator = initiator;
    if (auto s = SendFromAggregator({MessageType::kInitiateRound, kAggregator,
                                     initiator, std::monostate{}});
        !s.ok()) {
      return s;
    }
    for (NodeId off : config_.offline_after_start) network_.SetOffline(off);

    if (auto r = node(initiator).BeginAsInitiator(node_rngs_.at(initiator));
        !r.ok()) {
      return r.status();
    }
    record.visitation.push_back(initiator);

    const bool probing = config_.adversary.kind == AdversaryKind::kServerProbe;
    NodeId current = initiator;
    while (true) {
      const auto& reported = topology_.neighbors(current);
      if (auto s = SendToAggregator(
              {MessageType::kNeighborReport, current, kAggregator, reported});
          !s.ok()) {
        return s;
      }
      // A probing server pretends the initiator's neighbourhood is used up.
      if (probing || aggregator_.AllParticipated()) break;

      NextHopDecision decision = aggregator_.SelectNext(reported, server_rng_);
      NodeId next;
      bool jumped = false;
      if (const NodeId* chosen = std::get_if<NodeId>(&decision)) {
        next = *chosen;
      } else {
        absl::StatusOr<NodeId> jump = aggregator_.RelayJump(server_rng_);
        if (!jump.ok()) return jump.status();
        next = *jump;
        jumped = true;
      }
      const NodeId directive_target = jumped ? kAggregator : next;
      if (auto s = SendFromAggregator({MessageType::kNextHopDirective,
                                       kAggregator, current, directive_target});
          !s.ok()) {
        return s;
      }

      absl::StatusOr<MaskedValue> handed =
          (jumped || config_.mode == RelayMode::kStrictRelay)
              ? RelayThroughAggregator(current, next)
              : ForwardDirect(current, next);
      if (!handed.ok()) return handed.status();
      if (jumped || config_.mode == RelayMode::kStrictRelay) {
        record.relayed_arrivals.insert(next);
      }
      if (auto r = node(next).AcceptMasked(*handed); !r.ok()) {
        return r.status();
      }
      record.visitation.push_back(next);
      current = next;
    }

    if (auto s = SendFromAggregator({MessageType::kRequestFinal, kAggregator,
                                     current, std::monostate{}});
        !s.ok()) {
      return s;
    }
    absl::StatusOr<MaskedValue> last = node(current).ReleaseMasked();
    if (!last.ok()) return last.status();
    if (auto s = SendToAggregator(
            {MessageType::kFinalMaskedValue, current, kAggregator, *last});
        !s.ok()) {
      return s;
    }
    if (auto s = SendFromAggregator(
            {MessageType::kComputeSumDirective, kAggregator, initiator, *last});
        !s.ok()) {
      return s;
    }
    absl::StatusOr<ProtocolMessage> reply = node(initiator).ComputeSum(*last);
    if (!reply.ok()) return reply.status();
    if (auto s = SendToAggregator(*reply); !s.ok()) return s;
    if (reply->type == MessageType::kOperationRefused) {
      return RoundResult::Refused();
    }
    return RoundResult::Sum(std::get<AggregateSum>(reply->payload));
  }

  const ScenarioConfig& config_;
  Topology topology_;
  std::vector<uint64_t> inputs_;
  Modulus modulus_;
  KeyDeployment keys_;
  KeyRegistry registry_;
  Transcript transcript_;
  Network network_;
  AggregatorNode aggregator_;
  std::map<NodeId, SourceNode> nodes_;
  std::map<NodeId, Rng> node_rngs_;
  std::map<NodeId, Rng> node_key_rngs_;
  Rng server_rng_;
  Rng handshake_rng_;
  std::map<NodeId, KeyId> aggregator_keys_;
  std::map<std::pair<NodeId, NodeId>, KeyId> pairwise_keys_;
};

}  // namespace

absl::Status ScenarioConfig::Validate() const {
  if (n_sources == 0) return FieldError("n_sources", "must be at least 1");
  if (modulus < 2) return FieldError("modulus", "must be at least 2");
  if (values.empty() == !value_range.has_value()) {
    return FieldError("values",
                      "exactly one of values and value_range must be set");
  }
  if (!values.empty()) {
    if (values.size() != n_sources) {
      return FieldError("values",
                        absl::StrCat("expected ", n_sources, " entries, got ",
                                     values.size()));
    }
    unsigned __int128 total = 0;
    for (uint64_t v : values) total += v;
    if (total >= modulus) {
      return FieldError("values", "sum must be below modulus");
    }
  } else {
    if (*value_range == 0) return FieldError("value_range", "must be positive");
    const unsigned __int128 worst =
        static_cast<unsigned __int128>(*value_range - 1) * n_sources;
    if (worst >= modulus) {
      return FieldError("value_range",
                        "n_sources * (value_range - 1) must be below modulus");
    }
  }
  if (source_keys == 0) return FieldError("source_keys", "must be positive");
  if (source_keys >= total_keys) {
    return FieldError("total_keys", "must exceed source_keys");
  }
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    return FieldError("edge_probability", "must lie in [0, 1]");
  }
  if (rounds == 0) return FieldError("rounds", "must be at least 1");
  const double b = adversary.link_break_probability;
  if (!(b >= 0.0 && b <= 1.0)) {
    return FieldError("adversary", "link break probability must lie in [0, 1]");
  }
  if (!adversary.defense_enabled &&
      adversary.kind != AdversaryKind::kServerProbe) {
    return FieldError("adversary",
                      "the defense can only be disabled for a server probe");
  }
  if (adversary.target.has_value() &&
      (adversary.target->value < 1 || adversary.target->value > n_sources)) {
    return FieldError("adversary", "target is not a source");
  }
  if (topology.has_value() && topology->n_sources() != n_sources) {
    return FieldError("topology", "source count differs from n_sources");
  }
  if (forced_initiator.has_value() &&
      (forced_initiator->value < 1 || forced_initiator->value > n_sources)) {
    return FieldError("forced_initiator", "not a source");
  }
  return absl::OkStatus();
}

absl::StatusOr<ScenarioRun> RunScenario(const ScenarioConfig& config) {
  if (auto s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<Modulus> modulus = Modulus::Create(config.modulus);
  if (!modulus.ok()) return modulus.status();

  std::vector<uint64_t> inputs = config.values;
  if (inputs.empty()) {
    Rng value_rng = Rng::Derive(config.seed, kValueStream);
    for (uint32_t i = 0; i < config.n_sources; ++i) {
      inputs.push_back(value_rng.UniformBelow(*config.value_range));
    }
  }

  Topology topology = [&] {
    if (config.topology.has_value()) return *config.topology;
    Rng rng = Rng::Derive(config.seed, kTopologyStream);
    return Topology::Generate(config.n_sources, config.edge_probability, rng);
  }();

  Rng bank_rng = Rng::Derive(config.seed, kBankStream);
  absl::StatusOr<KeyDeployment> keys =
      KeyDeployment::Create({config.total_keys, config.source_keys}, bank_rng);
  if (!keys.ok()) return keys.status();
  for (NodeId s : topology.sources()) {
    Rng rng = Rng::Derive(config.seed, kProvisionStreamBase + s.value);
    if (auto st = keys->Provision(s, rng); !st.ok()) return st;
  }

  Simulator sim(config, std::move(topology), std::move(inputs), *modulus,
                *std::move(keys));
  sim.RunRounds();
  return std::move(sim).Finish();
}

}  // namespace ringsum
