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

#ifndef RINGSUM_KEYING_H_
#define RINGSUM_KEYING_H_

// Random key pre-distribution.
//
// Every source is loaded with the same bank of K keys. K - k of them are the
// aggregator bank, shared with the server; k are reserved for source-to-source
// links. Because the raw banks are common to all sources, a key is never named
// by its canonical position:
//
//  * Each source receives its own secret permutation of the aggregator bank
//    and the server stores that permutation. A session starts with a
//    plaintext index; the key is the index-th entry of that source's
//    permuted bank, so the index means nothing to other sources.
//  * Two sources agree on a pairwise key by each drawing a permutation of the
//    k-key bank, exchanging the permutations through the server under their
//    aggregator session keys, and then announcing one index in [1, k]. The
//    index addresses the composed ordering second(first(index)).
//
// Keys are opaque 128-bit identifiers; no cipher is modelled.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/functional/function_ref.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ringsum/node_id.h"
#include "ringsum/random.h"

namespace ringsum {

struct KeyMaterial {
  uint64_t hi = 0;
  uint64_t lo = 0;

  std::string ToHex() const;
  friend auto operator<=>(const KeyMaterial&, const KeyMaterial&) = default;
};

struct KeyBankConfig {
  uint32_t total_keys = 0;          // K
  uint32_t source_source_keys = 0;  // k

  absl::Status Validate() const;
  uint32_t aggregator_bank_size() const {
    return total_keys - source_source_keys;
  }
};

class KeyBank {
 public:
  // Draws K pairwise-distinct keys.
  static absl::StatusOr<KeyBank> Generate(const KeyBankConfig& config,
                                          Rng& rng);
  static absl::StatusOr<KeyBank> FromKeys(
      const KeyBankConfig& config, std::vector<KeyMaterial> aggregator_keys,
      std::vector<KeyMaterial> source_keys);

  const KeyBankConfig& config() const { return config_; }
  std::span<const KeyMaterial> aggregator_keys() const {
    return aggregator_keys_;
  }
  std::span<const KeyMaterial> source_keys() const { return source_keys_; }

 private:
  KeyBank(KeyBankConfig config, std::vector<KeyMaterial> aggregator_keys,
          std::vector<KeyMaterial> source_keys)
      : config_(config),
        aggregator_keys_(std::move(aggregator_keys)),
        source_keys_(std::move(source_keys)) {}

  KeyBankConfig config_;
  std::vector<KeyMaterial> aggregator_keys_;
  std::vector<KeyMaterial> source_keys_;
};

// Bijection on {1, ..., n}. Map(i) is the canonical bank position found at
// position i of the reordered bank.
class Permutation {
 public:
  static Permutation Identity(uint32_t n);
  // Uniform over all n! orderings (Fisher-Yates).
  static Permutation Random(uint32_t n, Rng& rng);
  // `image` holds 1-based canonical positions; rejects non-bijections.
  static absl::StatusOr<Permutation> FromImage(std::vector<uint32_t> image);

  uint32_t size() const { return static_cast<uint32_t>(image_.size()); }
  uint32_t Map(uint32_t position) const { return image_.at(position - 1); }
  // (outer ∘ inner)(i) = outer.Map(inner.Map(i)).
  static Permutation Compose(const Permutation& outer,
                             const Permutation& inner);
  bool IsBijection() const;
  const std::vector<uint32_t>& image() const { return image_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<uint32_t> image)
      : image_(std::move(image)) {}
  std::vector<uint32_t> image_;
};

// 1-based position in a bank; travels in plaintext.
struct KeyIndex {
  uint32_t value = 0;
  friend auto operator<=>(KeyIndex, KeyIndex) = default;
};

enum class KeyScope { kSourceAggregator, kSourceSource };

// A key valid for one aggregation round between `first` and `second`.
struct SessionKey {
  KeyMaterial material;
  KeyScope scope = KeyScope::kSourceAggregator;
  NodeId first;
  NodeId second;

  friend bool operator==(const SessionKey&, const SessionKey&) = default;
};

// Output of provisioning a single source.
struct Provisioning {
  std::vector<KeyMaterial> permuted_bank;  // loaded into the source
  Permutation permutation;                 // stored by the server
};

absl::StatusOr<Provisioning> ProvisionSource(const KeyBankConfig& config,
                                             const KeyBank& bank, Rng& rng);

// Server-side view: the canonical bank plus one permutation per source.
class ServerKeyDirectory {
 public:
  explicit ServerKeyDirectory(KeyBank bank) : bank_(std::move(bank)) {}

  // Sources may be added at any time; re-registering an id is an error.
  absl::Status Register(NodeId source, Permutation permutation);
  bool IsProvisioned(NodeId source) const;
  size_t provisioned_count() const { return permutations_.size(); }

  absl::StatusOr<SessionKey> ResolveAggregatorKey(NodeId source,
                                                  KeyIndex index) const;

  // Pairs whose establishment messages this server relayed in the current
  // round.
  void RecordRelayedPair(NodeId a, NodeId b);
  bool HasRelayedPair(NodeId a, NodeId b) const;
  void EndRound() { relayed_pairs_.clear(); }

  const KeyBank& bank() const { return bank_; }

 private:
  KeyBank bank_;
  std::map<NodeId, Permutation> permutations_;
  std::map<std::pair<NodeId, NodeId>, int> relayed_pairs_;
};

// Source-side key material.
class SourceKeyStore {
 public:
  SourceKeyStore(NodeId id, std::vector<KeyMaterial> permuted_aggregator_bank,
                 std::vector<KeyMaterial> source_bank)
      : id_(id),
        permuted_bank_(std::move(permuted_aggregator_bank)),
        source_bank_(std::move(source_bank)) {}

  NodeId id() const { return id_; }
  uint32_t aggregator_bank_size() const {
    return static_cast<uint32_t>(permuted_bank_.size());
  }
  std::span<const KeyMaterial> source_bank() const { return source_bank_; }

  // Draws a fresh index in [1, K - k] and opens a session with the server
  // under the key at that position of this source's permuted bank.
  std::pair<KeyIndex, SessionKey> SelectAggregatorKey(Rng& rng);

  const std::optional<SessionKey>& aggregator_session() const {
    return aggregator_session_;
  }
  const SessionKey* pairwise_key(NodeId peer) const;
  void InstallPairwiseKey(NodeId peer, SessionKey key);

  // Session and pairwise keys live for one round only.
  void EndRound();

 private:
  NodeId id_;
  std::vector<KeyMaterial> permuted_bank_;
  std::vector<KeyMaterial> source_bank_;
  std::optional<SessionKey> aggregator_session_;
  std::map<NodeId, SessionKey> pairwise_;
};

// One source-to-source message of the pairwise handshake. The transport
// carries it through the server.
struct PairwiseRelayMessage {
  enum class Kind { kPermutation, kIndex };
  Kind kind;
  NodeId from;
  NodeId to;
  const Permutation* permutation = nullptr;  // kPermutation only
  KeyIndex index;                            // kIndex only
};

using PairwiseRelayFn =
    absl::FunctionRef<absl::Status(const PairwiseRelayMessage&)>;

struct PairwiseEstablishment {
  KeyIndex index;
  SessionKey key_at_first;
  SessionKey key_at_second;
};

// Key selected by `index` under the composed ordering second(first(index)).
absl::StatusOr<KeyMaterial> DerivePairwiseKey(
    std::span<const KeyMaterial> source_bank, const Permutation& first,
    const Permutation& second, KeyIndex index);

// The whole deployment: canonical bank, server directory, and every
// provisioned source.
class KeyDeployment {
 public:
  explicit KeyDeployment(KeyBank bank) : directory_(std::move(bank)) {}
  static absl::StatusOr<KeyDeployment> Create(const KeyBankConfig& config,
                                              Rng& rng);

  absl::Status Provision(NodeId source, Rng& rng);

  absl::StatusOr<std::pair<KeyIndex, SessionKey>> SelectAggregatorKey(
      NodeId source, Rng& rng);
  absl::StatusOr<SessionKey> ResolveAggregatorKey(NodeId source,
                                                  KeyIndex index) const {
    return directory_.ResolveAggregatorKey(source, index);
  }

  // Runs the handshake between `first` and `second`. Both must already hold
  // an aggregator session. Every relayed message goes through `relay`; a
  // relay failure aborts the handshake and installs nothing.
  absl::StatusOr<PairwiseEstablishment> EstablishPairwiseKey(
      NodeId first, NodeId second, Rng& rng, PairwiseRelayFn relay);
  absl::StatusOr<PairwiseEstablishment> EstablishPairwiseKey(NodeId first,
                                                             NodeId second,
                                                             Rng& rng);

  const SourceKeyStore* source(NodeId id) const;
  const ServerKeyDirectory& directory() const { return directory_; }
  const KeyBankConfig& config() const { return directory_.bank().config(); }

  void EndRound();

 private:
  ServerKeyDirectory directory_;
  std::map<NodeId, SourceKeyStore> sources_;
};

}  // namespace ringsum

#endif  // RINGSUM_KEYING_H_
