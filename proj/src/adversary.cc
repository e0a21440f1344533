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

#include "ringsum/adversary.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ringsum/secure_sum.h"

namespace ringsum {

namespace {

absl::StatusOr<const RoundRecord*> FindRound(const Transcript& transcript,
                                             std::optional<uint32_t> round) {
  if (transcript.rounds.empty()) {
    return absl::InvalidArgumentError("transcript has no rounds");
  }
  if (!round.has_value()) return &transcript.rounds.back();
  for (const RoundRecord& r : transcript.rounds) {
    if (r.index == *round) return &r;
  }
  return absl::NotFoundError(absl::StrCat("no round ", *round));
}

// All hops of one chain transfer.
struct ChainMessage {
  const TraceEvent* first = nullptr;
  std::vector<std::pair<NodeId, NodeId>> hops;
};

bool IsIncomingChain(MessageType t) {
  return t == MessageType::kMaskedForward || t == MessageType::kRelayDown;
}

bool IsOutgoingChain(MessageType t) {
  return t == MessageType::kMaskedForward || t == MessageType::kRelayUp ||
         t == MessageType::kFinalMaskedValue;
}

std::map<uint64_t, ChainMessage> ChainMessages(const Transcript& transcript,
                                               uint32_t round) {
  std::map<uint64_t, ChainMessage> out;
  for (const TraceEvent& e : transcript.events) {
    if (e.round != round || !IsChainTransfer(e.message.type)) continue;
    ChainMessage& m = out[e.message_id];
    if (m.first == nullptr) m.first = &e;
    m.hops.emplace_back(std::minmax(e.hop_sender, e.hop_receiver));
  }
  return out;
}

const ChainMessage* FindIncoming(const std::map<uint64_t, ChainMessage>& all,
                                 NodeId v) {
  for (const auto& [id, m] : all) {
    if (IsIncomingChain(m.first->message.type) &&
        m.first->message.destination == v) {
      return &m;
    }
  }
  return nullptr;
}

const ChainMessage* FindOutgoing(const std::map<uint64_t, ChainMessage>& all,
                                 NodeId v) {
  for (const auto& [id, m] : all) {
    if (IsOutgoingChain(m.first->message.type) &&
        m.first->message.origin == v) {
      return &m;
    }
  }
  return nullptr;
}

uint64_t ChainValue(const ChainMessage& m) {
  return std::get<MaskedValue>(m.first->message.payload).value;
}

}  // namespace

std::vector<Observation> SemiHonestView(const Transcript& transcript,
                                        const std::set<NodeId>& nodes,
                                        std::optional<uint32_t> round) {
  std::vector<Observation> out;
  std::set<uint64_t> seen;
  for (const TraceEvent& e : transcript.events) {
    if (round.has_value() && e.round != *round) continue;
    if (seen.contains(e.message_id)) continue;
    const bool readable = std::any_of(
        nodes.begin(), nodes.end(), [&](NodeId n) { return e.ReadableBy(n); });
    if (!readable) continue;
    seen.insert(e.message_id);
    out.push_back({e.step, e.round, e.message.type, e.message.origin,
                   e.message.destination, e.message.payload});
  }
  return out;
}

std::vector<MaskedValue> ObservedMaskedValues(
    const std::vector<Observation>& view) {
  std::vector<MaskedValue> out;
  for (const Observation& o : view) {
    if (!IsChainTransfer(o.type) &&
        o.type != MessageType::kComputeSumDirective) {
      continue;
    }
    if (const auto* v = std::get_if<MaskedValue>(&o.payload)) {
      out.push_back(*v);
    }
  }
  return out;
}

std::vector<NodeId> CollusionTargets(const RoundRecord& round) {
  if (round.visitation.size() < 3) return {};
  return {round.visitation.begin() + 1, round.visitation.end() - 1};
}

absl::StatusOr<AttackOutcome> RunCollusionAttack(
    const Transcript& transcript, NodeId target,
    std::optional<uint32_t> round) {
  absl::StatusOr<const RoundRecord*> record = FindRound(transcript, round);
  if (!record.ok()) return record.status();
  const std::vector<NodeId>& order = (*record)->visitation;
  auto pos = std::find(order.begin(), order.end(), target);
  if (pos == order.end()) {
    return absl::FailedPreconditionError(
        absl::StrCat(target.ToString(), " did not take part in the round"));
  }
  if (pos == order.begin() || pos + 1 == order.end()) {
    return absl::FailedPreconditionError(absl::StrCat(
        target.ToString(), " lacks a predecessor or successor in the ring"));
  }
  const NodeId predecessor = *(pos - 1);
  const NodeId successor = *(pos + 1);
  auto coalition_reads = [&](const ChainMessage* m) {
    return m != nullptr && (m->first->ReadableBy(predecessor) ||
                            m->first->ReadableBy(successor));
  };

  const auto chain = ChainMessages(transcript, (*record)->index);
  const ChainMessage* incoming = FindIncoming(chain, target);
  const ChainMessage* outgoing = FindOutgoing(chain, target);
  AttackOutcome outcome;
  if (coalition_reads(incoming) && coalition_reads(outgoing)) {
    absl::StatusOr<Modulus> m = Modulus::Create(transcript.modulus);
    if (!m.ok()) return m.status();
    absl::StatusOr<PrivateValue> x =
        CollusionRecover(MaskedValue{ChainValue(*outgoing)},
                         MaskedValue{ChainValue(*incoming)}, *m);
    if (!x.ok()) return x.status();
    outcome.disclosed[target] = x->value;
    outcome.success = true;
  }
  return outcome;
}

absl::StatusOr<AttackOutcome> RunServerProbe(const ScenarioConfig& scenario,
                                             std::optional<NodeId> initiator) {
  std::vector<NodeId> initiators;
  if (initiator.has_value()) {
    initiators.push_back(*initiator);
  } else {
    for (uint32_t i = 1; i <= scenario.n_sources; ++i) {
      initiators.push_back(Source(i));
    }
  }
  AttackOutcome outcome;
  for (NodeId c1 : initiators) {
    ScenarioConfig probe = scenario;
    probe.adversary.kind = AdversaryKind::kServerProbe;
    probe.rounds = 1;
    probe.forced_initiator = c1;
    absl::StatusOr<ScenarioRun> run = RunScenario(probe);
    if (!run.ok()) return run.status();
    const RoundResult& result = run->transcript.final_result();
    switch (result.outcome) {
      case RoundResult::Outcome::kSum:
        // What the initiator reported is its own input.
        outcome.disclosed[c1] = result.sum.total;
        outcome.success = true;
        break;
      case RoundResult::Outcome::kRefused:
        outcome.defense_triggered = true;
        break;
      case RoundResult::Outcome::kAborted:
        return absl::InternalError(
            absl::StrCat("probe round aborted: ", result.reason));
    }
  }
  return outcome;
}

absl::StatusOr<LinkCompromiseModel> LinkCompromiseModel::Create(
    const Transcript& transcript, std::optional<uint32_t> round) {
  absl::StatusOr<const RoundRecord*> record = FindRound(transcript, round);
  if (!record.ok()) return record.status();
  const uint32_t index = (*record)->index;

  std::map<std::pair<NodeId, NodeId>, size_t> link_index;
  for (const TraceEvent& e : transcript.events) {
    if (e.round != index) continue;
    link_index.emplace(std::minmax(e.hop_sender, e.hop_receiver), 0);
  }
  size_t next = 0;
  for (auto& [link, i] : link_index) i = next++;

  const auto chain = ChainMessages(transcript, index);
  auto to_transfer = [&](const ChainMessage& m) {
    Transfer t;
    t.value = ChainValue(m);
    for (const auto& hop : m.hops) t.links.push_back(link_index.at(hop));
    return t;
  };
  std::vector<Victim> victims;
  for (NodeId v : (*record)->visitation) {
    const ChainMessage* in = FindIncoming(chain, v);
    const ChainMessage* out = FindOutgoing(chain, v);
    if (in == nullptr || out == nullptr) continue;
    victims.push_back({v, to_transfer(*in), to_transfer(*out)});
  }
  return LinkCompromiseModel(transcript.modulus, link_index.size(),
                             std::move(victims));
}

AttackOutcome LinkCompromiseModel::Sample(double b, Rng& rng) const {
  std::vector<bool> broken(link_count_);
  for (size_t i = 0; i < link_count_; ++i) broken[i] = rng.Bernoulli(b);
  auto exposed = [&](const Transfer& t) {
    return std::any_of(t.links.begin(), t.links.end(),
                       [&](size_t l) { return broken[l]; });
  };
  AttackOutcome outcome;
  for (const Victim& v : victims_) {
    if (exposed(v.incoming) && exposed(v.outgoing)) {
      outcome.disclosed[v.id] =
          SubMod(v.outgoing.value, v.incoming.value, modulus_);
    }
  }
  outcome.success = !outcome.disclosed.empty();
  return outcome;
}

std::vector<NodeId> LinkCompromiseModel::exposable_sources() const {
  std::vector<NodeId> out;
  for (const Victim& v : victims_) out.push_back(v.id);
  return out;
}

absl::StatusOr<AttackOutcome> RunLinkCompromise(const Transcript& transcript,
                                                double b, Rng& rng,
                                                std::optional<uint32_t> round) {
  if (!(b >= 0.0 && b <= 1.0)) {
    return absl::InvalidArgumentError("b must lie in [0, 1]");
  }
  absl::StatusOr<LinkCompromiseModel> model =
      LinkCompromiseModel::Create(transcript, round);
  if (!model.ok()) return model.status();
  return model->Sample(b, rng);
}

}  // namespace ringsum
