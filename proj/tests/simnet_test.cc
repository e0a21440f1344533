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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "ringsum/network.h"
#include "ringsum/node_id.h"
#include "ringsum/protocol.h"
#include "ringsum/random.h"
#include "ringsum/scenario.h"
#include "ringsum/topology.h"
#include "ringsum/transcript.h"
#include "tests/status_testing.h"

namespace ringsum {
namespace {

ScenarioConfig ReferenceConfig() {
  ScenarioConfig config;
  config.n_sources = 3;
  config.values = {3, 9, 14};
  config.modulus = 32;
  config.seed = 7;
  return config;
}

// Path s1 - s2; s3 reachable only through the aggregator.
Topology PathWithIsolatedThird() {
  return *Topology::Create(3, {{Source(1), Source(2)}},
                           {Source(1), Source(2), Source(3)});
}

TEST(TopologyTest, CompleteGraphAtPOne) {
  Rng rng(1);
  const Topology t = Topology::Generate(5, 1.0, rng);
  for (NodeId s : t.sources()) EXPECT_EQ(t.neighbors(s).size(), 4u);
  EXPECT_EQ(t.source_edge_count(), 10u);
  EXPECT_TRUE(t.augmented_links().empty());
}

TEST(TopologyTest, EmptyGraphIsAugmentedAtPZero) {
  Rng rng(2);
  const Topology t = Topology::Generate(4, 0.0, rng);
  EXPECT_EQ(t.source_edge_count(), 0u);
  EXPECT_EQ(t.aggregator_links().size(), 4u);
  EXPECT_EQ(t.augmented_links().size(), 4u);
  for (NodeId s : t.sources()) EXPECT_TRUE(t.neighbors(s).empty());
}

TEST(TopologyTest, SameSeedSameTopology) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed);
    Rng b(seed);
    const Topology x = Topology::Generate(12, 0.3, a);
    const Topology y = Topology::Generate(12, 0.3, b);
    for (NodeId s : x.sources()) EXPECT_EQ(x.neighbors(s), y.neighbors(s));
    EXPECT_EQ(x.aggregator_links(), y.aggregator_links());
  }
}

TEST(TopologyTest, GeneratedGraphsReachAggregator) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Topology t = Topology::Generate(15, 0.1, rng);
    for (NodeId s : t.sources()) {
      EXPECT_TRUE(t.Route(s, kAggregator).has_value()) << s.ToString();
    }
  }
}

TEST(TopologyTest, CreateRejectsUnreachableSource) {
  EXPECT_FALSE(Topology::Create(2, {}, {Source(1)}).ok());
  EXPECT_OK(Topology::Create(2, {{Source(1), Source(2)}}, {Source(1)}));
}

TEST(TopologyTest, RouteTakesShortestLowestIdPath) {
  ASSERT_OK_AND_ASSIGN(Topology t, Topology::Create(4,
                                                    {{Source(1), Source(2)},
                                                     {Source(1), Source(3)},
                                                     {Source(2), Source(4)},
                                                     {Source(3), Source(4)}},
                                                    {Source(1)}));
  auto path = t.Route(Source(4), kAggregator);
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(*path, (std::vector<NodeId>{Source(4), Source(2), Source(1),
                                        kAggregator}));
  auto detour = t.Route(Source(4), kAggregator, {Source(2)});
  ASSERT_TRUE(detour.has_value());
  EXPECT_EQ(*detour, (std::vector<NodeId>{Source(4), Source(3), Source(1),
                                          kAggregator}));
}

class NetworkTest : public ::testing::Test {
 protected:
  NetworkTest()
      : topology_(PathWithIsolatedThird()),
        network_(topology_, registry_, transcript_) {}

  Topology topology_;
  KeyRegistry registry_;
  Transcript transcript_;
  Network network_;
};

TEST_F(NetworkTest, PlaintextIsReadableByEveryone) {
  ProtocolMessage m{MessageType::kKeyIndexAnnounce, Source(1), kAggregator,
                    KeyIndexPayload{{5}, KeyScope::kSourceAggregator, {}, {}}};
  ASSERT_OK_AND_ASSIGN(TraceEvent e, network_.Deliver(m, std::nullopt));
  EXPECT_EQ(e.readable_by, (std::vector<NodeId>{kAggregator, Source(1),
                                                Source(2), Source(3)}));
}

TEST_F(NetworkTest, PairwiseKeyRestrictsReaders) {
  const KeyId key = registry_.Register({Source(1), Source(2)});
  ProtocolMessage m{MessageType::kMaskedForward, Source(1), Source(2),
                    MaskedValue{14}};
  ASSERT_OK_AND_ASSIGN(TraceEvent e, network_.Deliver(m, key));
  EXPECT_EQ(e.readable_by, (std::vector<NodeId>{Source(1), Source(2)}));
  EXPECT_TRUE(e.ReadableBy(Source(2)));
  EXPECT_FALSE(e.ReadableBy(kAggregator));
}

TEST_F(NetworkTest, NonAdjacentDeliveryFails) {
  const KeyId key = registry_.Register({Source(1), Source(3)});
  ProtocolMessage m{MessageType::kMaskedForward, Source(1), Source(3),
                    MaskedValue{14}};
  EXPECT_EQ(network_.Deliver(m, key).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_TRUE(transcript_.events.empty());
}

TEST_F(NetworkTest, EndpointWithoutKeyFails) {
  const KeyId key = registry_.Register({Source(1), kAggregator});
  ProtocolMessage m{MessageType::kMaskedForward, Source(1), Source(2),
                    MaskedValue{14}};
  EXPECT_EQ(network_.Deliver(m, key).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST_F(NetworkTest, RouteRecordsEveryHopUnderOneMessageId) {
  ASSERT_OK_AND_ASSIGN(
      Topology line,
      Topology::Create(2, {{Source(1), Source(2)}}, {Source(1)}));
  Transcript transcript;
  Network network(line, registry_, transcript);
  const KeyId key = registry_.Register({Source(2), kAggregator});
  ProtocolMessage m{MessageType::kNeighborReport, Source(2), kAggregator,
                    std::vector<NodeId>{Source(1)}};
  ASSERT_OK(network.Route(m, key));
  ASSERT_EQ(transcript.events.size(), 2u);
  EXPECT_EQ(transcript.events[0].hop_sender, Source(2));
  EXPECT_EQ(transcript.events[0].hop_receiver, Source(1));
  EXPECT_EQ(transcript.events[1].hop_receiver, kAggregator);
  EXPECT_EQ(transcript.events[0].message_id, transcript.events[1].message_id);
  EXPECT_FALSE(transcript.events[0].ReadableBy(Source(1)));
}

TEST(ScenarioTest, ReferenceScenarioSums) {
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(ReferenceConfig()));
  const RoundResult& result = run.transcript.final_result();
  EXPECT_EQ(result.outcome, RoundResult::Outcome::kSum);
  EXPECT_EQ(result.sum.total, 26u);
  EXPECT_EQ(run.inputs, (std::vector<uint64_t>{3, 9, 14}));
}

TEST(ScenarioTest, SingleSourceIsRefused) {
  ScenarioConfig config;
  config.n_sources = 1;
  config.values = {5};
  config.modulus = 32;
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
  EXPECT_EQ(run.transcript.final_result().outcome,
            RoundResult::Outcome::kRefused);
}

TEST(ScenarioTest, FalseAlarmIsRefused) {
  ScenarioConfig config = ReferenceConfig();
  config.values = {7, 0, 0};
  config.forced_initiator = Source(1);
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
  EXPECT_EQ(run.transcript.final_result().outcome,
            RoundResult::Outcome::kRefused);
}

TEST(ScenarioTest, RefusedRoundIsRetriedWithinBudget) {
  ScenarioConfig config = ReferenceConfig();
  config.values = {7, 0, 0};
  config.forced_initiator = Source(1);
  config.rounds = 20;
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
  ASSERT_GE(run.transcript.rounds.size(), 2u);
  EXPECT_EQ(run.transcript.final_result().outcome, RoundResult::Outcome::kSum);
  EXPECT_EQ(run.transcript.final_result().sum.total, 7u);
  for (size_t i = 0; i + 1 < run.transcript.rounds.size(); ++i) {
    EXPECT_EQ(run.transcript.rounds[i].result.outcome,
              RoundResult::Outcome::kRefused);
  }
}

TEST(ScenarioTest, IdenticalConfigGivesIdenticalTranscript) {
  ASSERT_OK_AND_ASSIGN(ScenarioRun a, RunScenario(ReferenceConfig()));
  ASSERT_OK_AND_ASSIGN(ScenarioRun b, RunScenario(ReferenceConfig()));
  EXPECT_EQ(a.transcript.Serialize(), b.transcript.Serialize());
}

TEST(ScenarioTest, EveryoneContributesExactlyOnce) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    ScenarioConfig config;
    config.n_sources = 8;
    config.value_range = 100;
    config.modulus = 1 << 16;
    config.edge_probability = 0.3;
    config.seed = seed;
    ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
    const RoundRecord& round = run.transcript.rounds.back();
    if (round.result.outcome != RoundResult::Outcome::kSum) continue;
    EXPECT_EQ(round.visitation.size(), 8u);
    for (NodeId s : run.topology.sources()) {
      EXPECT_EQ(round.contributions.at(s), 1);
    }
  }
}

TEST(ScenarioTest, InitialMaskNeverTransmitted) {
  // With M = 2^32 a coincidental match is negligible, so any payload equal
  // to r_1 would mean the mask leaked.
  ScenarioConfig config;
  config.n_sources = 6;
  config.value_range = 1000;
  config.modulus = uint64_t{1} << 32;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    config.seed = seed;
    ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
    const Transcript& t = run.transcript;
    ASSERT_EQ(t.final_result().outcome, RoundResult::Outcome::kSum);
    // Recover r_1 from the first masked value the initiator sent.
    const NodeId c1 = t.rounds[0].initiator;
    std::optional<uint64_t> r1;
    for (const TraceEvent& e : t.events) {
      if (IsChainTransfer(e.message.type) && e.message.origin == c1) {
        r1 = SubMod(*e.message.ScalarValue(), run.inputs[c1.value - 1],
                    config.modulus);
        break;
      }
    }
    ASSERT_TRUE(r1.has_value());
    for (const TraceEvent& e : t.events) {
      const auto v = e.message.ScalarValue();
      if (v.has_value()) {
        EXPECT_NE(*v, *r1) << e.step;
      }
    }
  }
}

TEST(ScenarioTest, NeighbourReportMatchesAdjacency) {
  ScenarioConfig config = ReferenceConfig();
  config.n_sources = 6;
  config.values = {};
  config.value_range = 10;
  config.modulus = 1024;
  config.edge_probability = 0.5;
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
  int reports = 0;
  for (const TraceEvent& e : run.transcript.events) {
    if (e.message.type != MessageType::kNeighborReport) continue;
    if (e.hop_receiver != kAggregator) continue;
    ++reports;
    EXPECT_EQ(std::get<std::vector<NodeId>>(e.message.payload),
              run.topology.neighbors(e.message.origin));
  }
  EXPECT_GT(reports, 0);
}

TEST(ScenarioTest, StrictRelayHasNoSourceToSourceDelivery) {
  ScenarioConfig direct = ReferenceConfig();
  ScenarioConfig relay = ReferenceConfig();
  relay.mode = RelayMode::kStrictRelay;
  ASSERT_OK_AND_ASSIGN(ScenarioRun a, RunScenario(direct));
  ASSERT_OK_AND_ASSIGN(ScenarioRun b, RunScenario(relay));
  EXPECT_EQ(a.transcript.rounds[0].visitation,
            b.transcript.rounds[0].visitation);
  EXPECT_EQ(b.transcript.final_result().sum.total, 26u);
  for (const TraceEvent& e : b.transcript.events) {
    EXPECT_NE(e.message.type, MessageType::kMaskedForward);
    EXPECT_NE(e.message.type, MessageType::kPermutationExchange);
    EXPECT_FALSE(!e.message.origin.is_aggregator() &&
                 !e.message.destination.is_aggregator());
  }
  // Final masked value is identical in both modes.
  auto final_value = [](const Transcript& t) {
    for (const TraceEvent& e : t.events) {
      if (e.message.type == MessageType::kFinalMaskedValue) {
        return *e.message.ScalarValue();
      }
    }
    return uint64_t{0};
  };
  EXPECT_EQ(final_value(a.transcript), final_value(b.transcript));
}

TEST(ScenarioTest, IsolatedSourceIsReachedByRelay) {
  ScenarioConfig config = ReferenceConfig();
  config.topology = PathWithIsolatedThird();
  for (uint32_t start = 1; start <= 3; ++start) {
    config.forced_initiator = Source(start);
    ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
    const RoundRecord& round = run.transcript.rounds[0];
    EXPECT_EQ(round.result.outcome, RoundResult::Outcome::kSum);
    EXPECT_EQ(round.result.sum.total, 26u);
    EXPECT_FALSE(round.relayed_arrivals.empty());
    bool saw_relay = false;
    for (const TraceEvent& e : run.transcript.events) {
      if (e.message.type == MessageType::kRelayUp ||
          e.message.type == MessageType::kRelayDown) {
        saw_relay = true;
        EXPECT_TRUE(e.key.has_value());
        EXPECT_TRUE(e.ReadableBy(kAggregator));
      }
    }
    EXPECT_TRUE(saw_relay);
  }
}

TEST(ScenarioTest, OfflineInitiatorAbortsRound) {
  ScenarioConfig config = ReferenceConfig();
  config.forced_initiator = Source(1);
  config.offline_after_start = {Source(1)};
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(config));
  EXPECT_EQ(run.transcript.final_result().outcome,
            RoundResult::Outcome::kAborted);
  EXPECT_FALSE(run.transcript.final_result().reason.empty());
}

TEST(ScenarioTest, KeyIndexAnnouncementsArePlaintext) {
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(ReferenceConfig()));
  int announcements = 0;
  for (const TraceEvent& e : run.transcript.events) {
    if (e.message.type == MessageType::kKeyIndexAnnounce) {
      ++announcements;
      EXPECT_FALSE(e.key.has_value());
    }
  }
  EXPECT_GE(announcements, 3);
}

TEST(ScenarioTest, ValidateNamesBadField) {
  ScenarioConfig config = ReferenceConfig();
  config.values = {1, 2};
  absl::Status s = config.Validate();
  EXPECT_EQ(s.code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(s.message().find("values"), absl::string_view::npos);

  config = ReferenceConfig();
  config.modulus = 1;
  s = config.Validate();
  EXPECT_NE(s.message().find("modulus"), absl::string_view::npos);
}

TEST(TranscriptTest, SerializedFormat) {
  ASSERT_OK_AND_ASSIGN(ScenarioRun run, RunScenario(ReferenceConfig()));
  const std::string log = run.transcript.Serialize();
  EXPECT_EQ(log.rfind("# seed=7 sources=3 modulus=32 mode=direct\n", 0), 0u);
  EXPECT_NE(log.find("\tKeyIndexAnnounce\tPLAIN\t"), std::string::npos);
  EXPECT_NE(log.find("\tSumReport\t"), std::string::npos);
  EXPECT_NE(log.find("X=26"), std::string::npos);
}

}  // namespace
}  // namespace ringsum
