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

#ifndef RINGSUM_CPDA_BASELINE_H_
#define RINGSUM_CPDA_BASELINE_H_

// Computational kernel of cluster-based private data aggregation, rebuilt
// from its standard polynomial-share construction for timing comparisons.
//
// Member i of an m-member cluster hides x_i in the polynomial
//   p_i(s) = x_i + r_{i,1} s + ... + r_{i,m-1} s^{m-1}  (mod q)
// and hands p_i(s_j) to member j. Member j sums what it received into
// F_j = sum_i p_i(s_j). The F_j are m evaluations of the polynomial whose
// constant term is sum_i x_i, so solving the Vandermonde system recovers the
// cluster sum. Cluster formation and messaging are not modelled.

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ringsum/random.h"

namespace ringsum::cpda {

// Counts modular multiplications and additions (subtractions included).
struct OpCounter {
  uint64_t multiplications = 0;
  uint64_t additions = 0;
  uint64_t total() const { return multiplications + additions; }
};

bool IsPrime(uint64_t n);
// Smallest prime strictly greater than `bound`.
absl::StatusOr<uint64_t> SmallestPrimeAbove(uint64_t bound);

class Cluster {
 public:
  // Seeds must be pairwise distinct, nonzero, and below q; at least three
  // members.
  static absl::StatusOr<Cluster> Create(std::vector<uint64_t> values,
                                        std::vector<uint64_t> seeds,
                                        uint64_t q);
  // Seeds 1..m and q = smallest prime above `sum_bound`.
  static absl::StatusOr<Cluster> WithDefaults(std::vector<uint64_t> values,
                                              uint64_t sum_bound);

  size_t size() const { return values_.size(); }
  const std::vector<uint64_t>& values() const { return values_; }
  const std::vector<uint64_t>& seeds() const { return seeds_; }
  uint64_t q() const { return q_; }

 private:
  Cluster(std::vector<uint64_t> values, std::vector<uint64_t> seeds, uint64_t q)
      : values_(std::move(values)), seeds_(std::move(seeds)), q_(q) {}

  std::vector<uint64_t> values_;
  std::vector<uint64_t> seeds_;
  uint64_t q_;
};

// m x m; entry (i, j) is what member i sends to member j.
class ShareMatrix {
 public:
  explicit ShareMatrix(size_t m) : m_(m), v_(m * m) {}
  size_t size() const { return m_; }
  uint64_t& at(size_t i, size_t j) { return v_[i * m_ + j]; }
  uint64_t at(size_t i, size_t j) const { return v_[i * m_ + j]; }

 private:
  size_t m_;
  std::vector<uint64_t> v_;
};

// Row of member i: p_i(s_j) for every seed, with m - 1 coefficients drawn
// uniformly from [0, q).
absl::StatusOr<std::vector<uint64_t>> ComputeShares(
    uint64_t x, std::span<const uint64_t> seeds, Rng& rng, uint64_t q,
    OpCounter* ops = nullptr);
// Same with caller-chosen coefficients r_1..r_{m-1}.
absl::StatusOr<std::vector<uint64_t>> ComputeSharesWithCoefficients(
    uint64_t x, std::span<const uint64_t> coefficients,
    std::span<const uint64_t> seeds, uint64_t q, OpCounter* ops = nullptr);

// Column sums followed by a Vandermonde solve; returns sum_i x_i mod q.
absl::StatusOr<uint64_t> AssembleClusterSum(const ShareMatrix& shares,
                                            std::span<const uint64_t> seeds,
                                            uint64_t q,
                                            OpCounter* ops = nullptr);

// Full kernel on a cluster: every member's shares, then assembly.
absl::StatusOr<uint64_t> RunClusterKernel(const Cluster& cluster, Rng& rng,
                                          OpCounter* ops = nullptr);

enum class Scheme { kOurs, kCpda };

absl::string_view SchemeName(Scheme scheme);

struct BenchResult {
  Scheme scheme = Scheme::kOurs;
  uint32_t n_nodes = 0;
  uint64_t op_count = 0;
  double wall_ns_median = 0.0;
  uint32_t repetitions = 0;
};

// op_count is exact and machine-independent. wall_ns_median is the median
// over `repetitions` timed runs of the bare kernel on the calling thread:
// mask/chain/unmask for the ring, shares plus assembly for one cluster of
// n_nodes members. n_nodes must be >= 1 for the ring and in [3, 5] for the
// cluster kernel.
absl::StatusOr<BenchResult> BenchmarkKernel(Scheme scheme, uint32_t n_nodes,
                                            uint32_t repetitions,
                                            uint64_t seed = 0);

}  // namespace ringsum::cpda

#endif  // RINGSUM_CPDA_BASELINE_H_
