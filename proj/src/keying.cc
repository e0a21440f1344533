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
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace ringsum {

std::string KeyMaterial::ToHex() const {
  return absl::StrFormat("%016x%016x", hi, lo);
}

absl::Status KeyBankConfig::Validate() const {
  if (source_source_keys == 0) {
    return absl::InvalidArgumentError("source_keys (k) must be positive");
  }
  if (source_source_keys >= total_keys) {
    return absl::InvalidArgumentError(absl::StrCat(
        "source_keys (k = ", source_source_keys,
        ") must be smaller than total_keys (K = ", total_keys, ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<KeyBank> KeyBank::Generate(const KeyBankConfig& config,
                                          Rng& rng) {
  if (auto s = config.Validate(); !s.ok()) return s;
  std::set<KeyMaterial> seen;
  std::vector<KeyMaterial> keys;
  keys.reserve(config.total_keys);
  while (keys.size() < config.total_keys) {
    KeyMaterial key{rng.Next(), rng.Next()};
    if (seen.insert(key).second) keys.push_back(key);
  }
  std::vector<KeyMaterial> source_keys(
      keys.begin() + config.aggregator_bank_size(), keys.end());
  keys.resize(config.aggregator_bank_size());
  return KeyBank(config, std::move(keys), std::move(source_keys));
}

absl::StatusOr<KeyBank> KeyBank::FromKeys(
    const KeyBankConfig& config, std::vector<KeyMaterial> aggregator_keys,
    std::vector<KeyMaterial> source_keys) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (aggregator_keys.size() != config.aggregator_bank_size() ||
      source_keys.size() != config.source_source_keys) {
    return absl::InvalidArgumentError("key bank does not match its config");
  }
  std::set<KeyMaterial> distinct(aggregator_keys.begin(),
                                 aggregator_keys.end());
  distinct.insert(source_keys.begin(), source_keys.end());
  if (distinct.size() != config.total_keys) {
    return absl::InvalidArgumentError("key bank values are not distinct");
  }
  return KeyBank(config, std::move(aggregator_keys), std::move(source_keys));
}

Permutation Permutation::Identity(uint32_t n) {
  std::vector<uint32_t> image(n);
  std::iota(image.begin(), image.end(), 1u);
  return Permutation(std::move(image));
}

Permutation Permutation::Random(uint32_t n, Rng& rng) {
  std::vector<uint32_t> image = Identity(n).image_;
  for (uint32_t i = n; i > 1; --i) {
    std::swap(image[i - 1], image[rng.UniformBelow(i)]);
  }
  return Permutation(std::move(image));
}

absl::StatusOr<Permutation> Permutation::FromImage(
    std::vector<uint32_t> image) {
  Permutation p(std::move(image));
  if (!p.IsBijection()) {
    return absl::InvalidArgumentError("permutation image is not a bijection");
  }
  return p;
}

Permutation Permutation::Compose(const Permutation& outer,
                                 const Permutation& inner) {
  std::vector<uint32_t> image(inner.size());
  for (uint32_t i = 1; i <= inner.size(); ++i) {
    image[i - 1] = outer.Map(inner.Map(i));
  }
  return Permutation(std::move(image));
}

bool Permutation::IsBijection() const {
  std::vector<uint32_t> sorted = image_;
  std::sort(sorted.begin(), sorted.end());
  for (uint32_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i + 1) return false;
  }
  return true;
}

absl::StatusOr<Provisioning> ProvisionSource(const KeyBankConfig& config,
                                             const KeyBank& bank, Rng& rng) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (!(bank.config().total_keys == config.total_keys &&
        bank.config().source_source_keys == config.source_source_keys)) {
    return absl::InvalidArgumentError(
        "key bank was generated for a different configuration");
  }
  Permutation permutation =
      Permutation::Random(config.aggregator_bank_size(), rng);
  std::vector<KeyMaterial> permuted;
  permuted.reserve(permutation.size());
  for (uint32_t i = 1; i <= permutation.size(); ++i) {
    permuted.push_back(bank.aggregator_keys()[permutation.Map(i) - 1]);
  }
  return Provisioning{std::move(permuted), std::move(permutation)};
}

absl::Status ServerKeyDirectory::Register(NodeId source,
                                          Permutation permutation) {
  if (source.is_aggregator()) {
    return absl::InvalidArgumentError("the aggregator is not a source");
  }
  if (permutation.size() != bank_.config().aggregator_bank_size() ||
      !permutation.IsBijection()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "permutation for ", source.ToString(), " does not fit the bank"));
  }
  if (!permutations_.emplace(source, std::move(permutation)).second) {
    return absl::AlreadyExistsError(
        absl::StrCat(source.ToString(), " is already provisioned"));
  }
  return absl::OkStatus();
}

bool ServerKeyDirectory::IsProvisioned(NodeId source) const {
  return permutations_.contains(source);
}

absl::StatusOr<SessionKey> ServerKeyDirectory::ResolveAggregatorKey(
    NodeId source, KeyIndex index) const {
  auto it = permutations_.find(source);
  if (it == permutations_.end()) {
    return absl::NotFoundError(
        absl::StrCat("unknown source ", source.ToString()));
  }
  const Permutation& permutation = it->second;
  if (index.value < 1 || index.value > permutation.size()) {
    return absl::OutOfRangeError(absl::StrCat(
        "key index ", index.value, " outside [1, ", permutation.size(), "]"));
  }
  return SessionKey{bank_.aggregator_keys()[permutation.Map(index.value) - 1],
                    KeyScope::kSourceAggregator, source, kAggregator};
}

void ServerKeyDirectory::RecordRelayedPair(NodeId a, NodeId b) {
  ++relayed_pairs_[std::minmax(a, b)];
}

bool ServerKeyDirectory::HasRelayedPair(NodeId a, NodeId b) const {
  return relayed_pairs_.contains(std::minmax(a, b));
}

std::pair<KeyIndex, SessionKey> SourceKeyStore::SelectAggregatorKey(Rng& rng) {
  KeyIndex index{
      static_cast<uint32_t>(rng.UniformInclusive(1, aggregator_bank_size()))};
  SessionKey key{permuted_bank_[index.value - 1], KeyScope::kSourceAggregator,
                 id_, kAggregator};
  aggregator_session_ = key;
  return {index, key};
}

const SessionKey* SourceKeyStore::pairwise_key(NodeId peer) const {
  auto it = pairwise_.find(peer);
  return it == pairwise_.end() ? nullptr : &it->second;
}

void SourceKeyStore::InstallPairwiseKey(NodeId peer, SessionKey key) {
  pairwise_.insert_or_assign(peer, std::move(key));
}

void SourceKeyStore::EndRound() {
  aggregator_session_.reset();
  pairwise_.clear();
}

absl::StatusOr<KeyMaterial> DerivePairwiseKey(
    std::span<const KeyMaterial> source_bank, const Permutation& first,
    const Permutation& second, KeyIndex index) {
  if (first.size() != source_bank.size() ||
      second.size() != source_bank.size()) {
    return absl::InvalidArgumentError(
        "pairwise permutations do not fit the source bank");
  }
  if (index.value < 1 || index.value > source_bank.size()) {
    return absl::OutOfRangeError(absl::StrCat("pairwise key index ",
                                              index.value, " outside [1, ",
                                              source_bank.size(), "]"));
  }
  return source_bank[second.Map(first.Map(index.value)) - 1];
}

absl::StatusOr<KeyDeployment> KeyDeployment::Create(const KeyBankConfig& config,
                                                    Rng& rng) {
  absl::StatusOr<KeyBank> bank = KeyBank::Generate(config, rng);
  if (!bank.ok()) return bank.status();
  return KeyDeployment(*std::move(bank));
}

absl::Status KeyDeployment::Provision(NodeId source, Rng& rng) {
  absl::StatusOr<Provisioning> provisioning =
      ProvisionSource(config(), directory_.bank(), rng);
  if (!provisioning.ok()) return provisioning.status();
  if (auto s = directory_.Register(source, provisioning->permutation);
      !s.ok()) {
    return s;
  }
  const auto source_keys = directory_.bank().source_keys();
  sources_.emplace(
      source, SourceKeyStore(source, std::move(provisioning->permuted_bank),
                             std::vector<KeyMaterial>(source_keys.begin(),
                                                      source_keys.end())));
  return absl::OkStatus();
}

absl::StatusOr<std::pair<KeyIndex, SessionKey>>
KeyDeployment::SelectAggregatorKey(NodeId source, Rng& rng) {
  auto it = sources_.find(source);
  if (it == sources_.end()) {
    return absl::NotFoundError(
        absl::StrCat(source.ToString(), " is not provisioned"));
  }
  return it->second.SelectAggregatorKey(rng);
}

absl::StatusOr<PairwiseEstablishment> KeyDeployment::EstablishPairwiseKey(
    NodeId first, NodeId second, Rng& rng) {
  return EstablishPairwiseKey(
      first, second, rng,
      [](const PairwiseRelayMessage&) { return absl::OkStatus(); });
}

absl::StatusOr<PairwiseEstablishment> KeyDeployment::EstablishPairwiseKey(
    NodeId first, NodeId second, Rng& rng, PairwiseRelayFn relay) {
  if (first == second) {
    return absl::InvalidArgumentError("a source cannot pair with itself");
  }
  auto a = sources_.find(first);
  auto b = sources_.find(second);
  if (a == sources_.end() || b == sources_.end()) {
    return absl::NotFoundError("pairwise establishment with unknown source");
  }
  for (const SourceKeyStore* store : {&a->second, &b->second}) {
    if (!store->aggregator_session().has_value()) {
      return absl::FailedPreconditionError(
          absl::StrCat(store->id().ToString(),
                       " has no aggregator session key to relay through"));
    }
  }

  const uint32_t k = config().source_source_keys;
  const Permutation perm_first = Permutation::Random(k, rng);
  const Permutation perm_second = Permutation::Random(k, rng);
  const KeyIndex index{static_cast<uint32_t>(rng.UniformInclusive(1, k))};

  using Kind = PairwiseRelayMessage::Kind;
  if (auto s = relay({Kind::kPermutation, first, second, &perm_first, {}});
      !s.ok()) {
    return s;
  }
  if (auto s = relay({Kind::kPermutation, second, first, &perm_second, {}});
      !s.ok()) {
    return s;
  }
  if (auto s = relay({Kind::kIndex, first, second, nullptr, index}); !s.ok()) {
    return s;
  }
  directory_.RecordRelayedPair(first, second);

  // Each side derives the key from its own bank copy and what it received.
  absl::StatusOr<KeyMaterial> at_first = DerivePairwiseKey(
      a->second.source_bank(), perm_first, perm_second, index);
  absl::StatusOr<KeyMaterial> at_second = DerivePairwiseKey(
      b->second.source_bank(), perm_first, perm_second, index);
  if (!at_first.ok()) return at_first.status();
  if (!at_second.ok()) return at_second.status();

  PairwiseEstablishment result{
      index, SessionKey{*at_first, KeyScope::kSourceSource, first, second},
      SessionKey{*at_second, KeyScope::kSourceSource, first, second}};
  a->second.InstallPairwiseKey(second, result.key_at_first);
  b->second.InstallPairwiseKey(first, result.key_at_second);
  return result;
}

const SourceKeyStore* KeyDeployment::source(NodeId id) const {
  auto it = sources_.find(id);
  return it == sources_.end() ? nullptr : &it->second;
}

void KeyDeployment::EndRound() {
  for (auto& [id, store] : sources_) store.EndRound();
  directory_.EndRound();
}

}  // namespace ringsum
