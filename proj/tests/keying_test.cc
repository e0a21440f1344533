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

#include "ringsum/keying.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "ringsum/node_id.h"
#include "ringsum/random.h"
#include "tests/status_testing.h"

namespace ringsum {
namespace {

constexpr KeyBankConfig kDefaultConfig{100, 30};

KeyDeployment ProvisionedDeployment(const KeyBankConfig& config,
                                    uint32_t n_sources, uint64_t seed) {
  Rng rng(seed);
  KeyDeployment deployment = *KeyDeployment::Create(config, rng);
  for (uint32_t i = 1; i <= n_sources; ++i) {
    EXPECT_OK(deployment.Provision(Source(i), rng));
  }
  return deployment;
}

TEST(KeyBankConfigTest, Validates) {
  EXPECT_OK(kDefaultConfig.Validate());
  EXPECT_FALSE((KeyBankConfig{10, 0}).Validate().ok());
  EXPECT_FALSE((KeyBankConfig{10, 10}).Validate().ok());
  EXPECT_FALSE((KeyBankConfig{10, 11}).Validate().ok());
}

TEST(KeyBankTest, GeneratesDistinctKeys) {
  Rng rng(1);
  ASSERT_OK_AND_ASSIGN(KeyBank bank, KeyBank::Generate(kDefaultConfig, rng));
  EXPECT_EQ(bank.aggregator_keys().size(), 70u);
  EXPECT_EQ(bank.source_keys().size(), 30u);
  std::set<KeyMaterial> all(bank.aggregator_keys().begin(),
                            bank.aggregator_keys().end());
  all.insert(bank.source_keys().begin(), bank.source_keys().end());
  EXPECT_EQ(all.size(), 100u);
}

TEST(PermutationTest, RandomIsBijection) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Permutation p = Permutation::Random(70, rng);
    std::vector<uint32_t> sorted = p.image();
    std::sort(sorted.begin(), sorted.end());
    std::vector<uint32_t> identity(70);
    std::iota(identity.begin(), identity.end(), 1u);
    EXPECT_EQ(sorted, identity);
    EXPECT_TRUE(p.IsBijection());
  }
}

TEST(PermutationTest, FromImageRejectsNonBijection) {
  EXPECT_OK(Permutation::FromImage({2, 3, 1}));
  EXPECT_FALSE(Permutation::FromImage({1, 1, 3}).ok());
  EXPECT_FALSE(Permutation::FromImage({0, 1, 2}).ok());
  EXPECT_FALSE(Permutation::FromImage({1, 2, 4}).ok());
}

TEST(PermutationTest, ComposeAppliesInnerFirst) {
  ASSERT_OK_AND_ASSIGN(Permutation outer, Permutation::FromImage({2, 3, 1}));
  ASSERT_OK_AND_ASSIGN(Permutation inner, Permutation::FromImage({3, 1, 2}));
  const Permutation composed = Permutation::Compose(outer, inner);
  for (uint32_t i = 1; i <= 3; ++i) {
    EXPECT_EQ(composed.Map(i), outer.Map(inner.Map(i)));
  }
}

TEST(ProvisionTest, BankSizeAndDeterminism) {
  Rng bank_rng(3);
  ASSERT_OK_AND_ASSIGN(KeyBank bank,
                       KeyBank::Generate(kDefaultConfig, bank_rng));
  Rng a(99);
  Rng b(99);
  ASSERT_OK_AND_ASSIGN(Provisioning first,
                       ProvisionSource(kDefaultConfig, bank, a));
  ASSERT_OK_AND_ASSIGN(Provisioning second,
                       ProvisionSource(kDefaultConfig, bank, b));
  EXPECT_EQ(first.permuted_bank.size(), 70u);
  EXPECT_EQ(first.permutation.size(), 70u);
  EXPECT_EQ(first.permutation, second.permutation);
  EXPECT_EQ(first.permuted_bank, second.permuted_bank);
  for (uint32_t i = 1; i <= 70; ++i) {
    EXPECT_EQ(first.permuted_bank[i - 1],
              bank.aggregator_keys()[first.permutation.Map(i) - 1]);
  }
}

TEST(ProvisionTest, DistinctSeedsGiveDistinctPermutations) {
  Rng bank_rng(4);
  ASSERT_OK_AND_ASSIGN(KeyBank bank,
                       KeyBank::Generate(kDefaultConfig, bank_rng));
  std::set<std::vector<uint32_t>> seen;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng = Rng::Derive(seed, 1);
    ASSERT_OK_AND_ASSIGN(Provisioning p,
                         ProvisionSource(kDefaultConfig, bank, rng));
    EXPECT_TRUE(seen.insert(p.permutation.image()).second);
  }
}

TEST(ServerKeyDirectoryTest, RejectsDuplicateRegistration) {
  Rng rng(5);
  ASSERT_OK_AND_ASSIGN(KeyBank bank, KeyBank::Generate(kDefaultConfig, rng));
  ServerKeyDirectory directory(bank);
  EXPECT_OK(directory.Register(Source(1), Permutation::Identity(70)));
  EXPECT_EQ(directory.Register(Source(1), Permutation::Identity(70)).code(),
            absl::StatusCode::kAlreadyExists);
}

TEST(AggregatorKeyTest, IndexRangeAndRoundTrip) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 4, 6);
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const NodeId s = Source(1 + i % 4);
    ASSERT_OK_AND_ASSIGN(auto selected, deployment.SelectAggregatorKey(s, rng));
    EXPECT_GE(selected.first.value, 1u);
    EXPECT_LE(selected.first.value, 70u);
    ASSERT_OK_AND_ASSIGN(SessionKey resolved,
                         deployment.ResolveAggregatorKey(s, selected.first));
    EXPECT_EQ(resolved, selected.second);
    EXPECT_EQ(resolved.scope, KeyScope::kSourceAggregator);
  }
}

TEST(AggregatorKeyTest, ExhaustiveRoundTripOnSmallBank) {
  const KeyBankConfig config{8, 3};
  KeyDeployment deployment = ProvisionedDeployment(config, 3, 8);
  for (uint32_t s = 1; s <= 3; ++s) {
    const SourceKeyStore* store = deployment.source(Source(s));
    ASSERT_NE(store, nullptr);
    std::set<uint32_t> covered;
    Rng rng(s);
    while (covered.size() < config.aggregator_bank_size()) {
      ASSERT_OK_AND_ASSIGN(auto selected,
                           deployment.SelectAggregatorKey(Source(s), rng));
      covered.insert(selected.first.value);
      ASSERT_OK_AND_ASSIGN(SessionKey resolved, deployment.ResolveAggregatorKey(
                                                    Source(s), selected.first));
      EXPECT_EQ(resolved.material, selected.second.material);
    }
  }
}

TEST(AggregatorKeyTest, SameIndexDiffersAcrossSources) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 2, 9);
  int differing = 0;
  for (uint32_t i = 1; i <= 70; ++i) {
    ASSERT_OK_AND_ASSIGN(SessionKey a,
                         deployment.ResolveAggregatorKey(Source(1), {i}));
    ASSERT_OK_AND_ASSIGN(SessionKey b,
                         deployment.ResolveAggregatorKey(Source(2), {i}));
    differing += a.material != b.material;
  }
  EXPECT_GT(differing, 60);
}

TEST(AggregatorKeyTest, ResolveErrors) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 1, 10);
  EXPECT_EQ(deployment.ResolveAggregatorKey(Source(9), {1}).status().code(),
            absl::StatusCode::kNotFound);
  EXPECT_EQ(deployment.ResolveAggregatorKey(Source(1), {0}).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(deployment.ResolveAggregatorKey(Source(1), {71}).status().code(),
            absl::StatusCode::kOutOfRange);
  Rng rng(1);
  EXPECT_EQ(deployment.SelectAggregatorKey(Source(9), rng).status().code(),
            absl::StatusCode::kNotFound);
}

// Under a uniformly drawn permutation, knowing the index but not the
// permutation picks the right key for exactly 1/5 of all 5! orderings.
TEST(AggregatorKeyTest, IndexAloneIdentifiesKeyWithProbabilityOneFifth) {
  const KeyBankConfig config{6, 1};
  std::vector<KeyMaterial> keys;
  for (uint64_t i = 1; i <= 5; ++i) keys.push_back({0, i});
  ASSERT_OK_AND_ASSIGN(KeyBank bank, KeyBank::FromKeys(config, keys, {{1, 0}}));
  for (uint32_t index = 1; index <= 5; ++index) {
    for (uint32_t guess = 1; guess <= 5; ++guess) {
      int hits = 0;
      int total = 0;
      std::vector<uint32_t> image = {1, 2, 3, 4, 5};
      do {
        ServerKeyDirectory directory(bank);
        ASSERT_OK_AND_ASSIGN(Permutation p, Permutation::FromImage(image));
        ASSERT_OK(directory.Register(Source(1), p));
        ASSERT_OK_AND_ASSIGN(
            SessionKey key, directory.ResolveAggregatorKey(Source(1), {index}));
        ++total;
        hits += key.material == keys[guess - 1];
      } while (std::next_permutation(image.begin(), image.end()));
      EXPECT_EQ(total, 120);
      EXPECT_EQ(hits * 5, total);
    }
  }
}

TEST(PairwiseKeyTest, BothEndpointsAgree) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 10, 11);
  Rng rng(12);
  for (uint32_t s = 1; s <= 10; ++s) {
    ASSERT_OK(deployment.SelectAggregatorKey(Source(s), rng));
  }
  for (int i = 0; i < 1000; ++i) {
    const uint32_t a = 1 + rng.UniformBelow(10);
    uint32_t b = 1 + rng.UniformBelow(9);
    if (b >= a) ++b;
    ASSERT_OK_AND_ASSIGN(
        PairwiseEstablishment e,
        deployment.EstablishPairwiseKey(Source(a), Source(b), rng));
    EXPECT_EQ(e.key_at_first, e.key_at_second);
    EXPECT_GE(e.index.value, 1u);
    EXPECT_LE(e.index.value, 30u);
    EXPECT_EQ(e.key_at_first.scope, KeyScope::kSourceSource);
    const SessionKey* at_a =
        deployment.source(Source(a))->pairwise_key(Source(b));
    const SessionKey* at_b =
        deployment.source(Source(b))->pairwise_key(Source(a));
    ASSERT_NE(at_a, nullptr);
    ASSERT_NE(at_b, nullptr);
    EXPECT_EQ(*at_a, *at_b);
  }
}

TEST(PairwiseKeyTest, RelaysPermutationsThenIndexThroughServer) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 2, 13);
  Rng rng(14);
  ASSERT_OK(deployment.SelectAggregatorKey(Source(1), rng));
  ASSERT_OK(deployment.SelectAggregatorKey(Source(2), rng));
  std::vector<PairwiseRelayMessage::Kind> kinds;
  std::vector<NodeId> senders;
  auto relay = [&](const PairwiseRelayMessage& m) {
    kinds.push_back(m.kind);
    senders.push_back(m.from);
    return absl::OkStatus();
  };
  ASSERT_OK(deployment.EstablishPairwiseKey(Source(1), Source(2), rng, relay));
  using Kind = PairwiseRelayMessage::Kind;
  EXPECT_EQ(kinds, (std::vector<Kind>{Kind::kPermutation, Kind::kPermutation,
                                      Kind::kIndex}));
  EXPECT_EQ(senders, (std::vector<NodeId>{Source(1), Source(2), Source(1)}));
}

TEST(PairwiseKeyTest, RelayFailureInstallsNothing) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 2, 15);
  Rng rng(16);
  ASSERT_OK(deployment.SelectAggregatorKey(Source(1), rng));
  ASSERT_OK(deployment.SelectAggregatorKey(Source(2), rng));
  auto relay = [](const PairwiseRelayMessage&) {
    return absl::UnavailableError("link down");
  };
  EXPECT_EQ(deployment.EstablishPairwiseKey(Source(1), Source(2), rng, relay)
                .status()
                .code(),
            absl::StatusCode::kUnavailable);
  EXPECT_EQ(deployment.source(Source(1))->pairwise_key(Source(2)), nullptr);
}

TEST(PairwiseKeyTest, RequiresAggregatorSessions) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 2, 17);
  Rng rng(18);
  EXPECT_EQ(deployment.EstablishPairwiseKey(Source(1), Source(2), rng)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  ASSERT_OK(deployment.SelectAggregatorKey(Source(1), rng));
  EXPECT_EQ(deployment.EstablishPairwiseKey(Source(1), Source(2), rng)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(deployment.EstablishPairwiseKey(Source(1), Source(1), rng)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(PairwiseKeyTest, SessionsEndWithRound) {
  KeyDeployment deployment = ProvisionedDeployment(kDefaultConfig, 2, 19);
  Rng rng(20);
  ASSERT_OK(deployment.SelectAggregatorKey(Source(1), rng));
  ASSERT_OK(deployment.SelectAggregatorKey(Source(2), rng));
  ASSERT_OK(deployment.EstablishPairwiseKey(Source(1), Source(2), rng));
  deployment.EndRound();
  EXPECT_FALSE(deployment.source(Source(1))->aggregator_session().has_value());
  EXPECT_EQ(deployment.source(Source(1))->pairwise_key(Source(2)), nullptr);
}

// A bystander holds the raw source bank and sees the plaintext index but not
// the two permutations. Its best strategy is to read the index against some
// fixed ordering of its own; that hits the key with probability 1/k.
TEST(PairwiseKeyTest,
     BystanderWithoutPermutationsMissesWithRateKMinusOneOverK) {
  const KeyBankConfig config{40, 10};
  KeyDeployment deployment = ProvisionedDeployment(config, 3, 21);
  const auto bank = deployment.source(Source(3))->source_bank();
  Rng rng(22);
  constexpr int kTrials = 20000;
  int misses = 0;
  for (int t = 0; t < kTrials; ++t) {
    ASSERT_OK(deployment.SelectAggregatorKey(Source(1), rng));
    ASSERT_OK(deployment.SelectAggregatorKey(Source(2), rng));
    ASSERT_OK_AND_ASSIGN(
        PairwiseEstablishment e,
        deployment.EstablishPairwiseKey(Source(1), Source(2), rng));
    const KeyMaterial guess = bank[e.index.value - 1];
    misses += guess != e.key_at_first.material;
    deployment.EndRound();
  }
  const double p = 0.9;
  const double sigma = std::sqrt(p * (1 - p) / kTrials);
  EXPECT_NEAR(static_cast<double>(misses) / kTrials, p, 4 * sigma);
}

TEST(DerivePairwiseKeyTest, UsesComposedPermutation) {
  std::vector<KeyMaterial> bank = {{0, 10}, {0, 20}, {0, 30}};
  ASSERT_OK_AND_ASSIGN(Permutation first, Permutation::FromImage({2, 3, 1}));
  ASSERT_OK_AND_ASSIGN(Permutation second, Permutation::FromImage({3, 1, 2}));
  // index 1 -> first 2 -> second 1 -> key 10.
  ASSERT_OK_AND_ASSIGN(KeyMaterial key,
                       DerivePairwiseKey(bank, first, second, {1}));
  EXPECT_EQ(key.lo, 10u);
  EXPECT_EQ(DerivePairwiseKey(bank, first, second, {4}).status().code(),
            absl::StatusCode::kOutOfRange);
}

}  // namespace
}  // namespace ringsum
