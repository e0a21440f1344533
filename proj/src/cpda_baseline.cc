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

#include "ringsum/cpda_baseline.h"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "ringsum/secure_sum.h"

namespace ringsum::cpda {

namespace {

uint64_t MulModRaw(uint64_t a, uint64_t b, uint64_t q) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

uint64_t PowModRaw(uint64_t base, uint64_t exp, uint64_t q) {
  uint64_t result = 1 % q;
  while (exp > 0) {
    if (exp & 1) result = MulModRaw(result, base, q);
    base = MulModRaw(base, base, q);
    exp >>= 1;
  }
  return result;
}

// Field arithmetic with operation accounting.
class Field {
 public:
  Field(uint64_t q, OpCounter* ops) : q_(q), ops_(ops) {}

  uint64_t Add(uint64_t a, uint64_t b) const {
    if (ops_ != nullptr) ++ops_->additions;
    return AddMod(a, b, q_);
  }
  uint64_t Sub(uint64_t a, uint64_t b) const {
    if (ops_ != nullptr) ++ops_->additions;
    return SubMod(a, b, q_);
  }
  uint64_t Mul(uint64_t a, uint64_t b) const {
    if (ops_ != nullptr) ++ops_->multiplications;
    return MulModRaw(a, b, q_);
  }
  // Fermat inverse; q is prime.
  uint64_t Inverse(uint64_t a) const {
    uint64_t result = 1;
    uint64_t base = a;
    for (uint64_t exp = q_ - 2; exp > 0; exp >>= 1) {
      if (exp & 1) result = Mul(result, base);
      base = Mul(base, base);
    }
    return result;
  }

 private:
  uint64_t q_;
  OpCounter* ops_;
};

absl::Status CheckSeeds(std::span<const uint64_t> seeds, uint64_t q) {
  std::set<uint64_t> distinct;
  for (uint64_t s : seeds) {
    if (s == 0 || s >= q) {
      return absl::InvalidArgumentError(
          absl::StrCat("seed ", s, " must be nonzero and below q = ", q));
    }
    if (!distinct.insert(s).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("seed ", s, " is repeated"));
    }
  }
  return absl::OkStatus();
}

double Median(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  return n % 2 == 1 ? samples[n / 2]
                    : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

}  // namespace

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // These witnesses are deterministic for every 64-bit n.
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = PowModRaw(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = MulModRaw(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

absl::StatusOr<uint64_t> SmallestPrimeAbove(uint64_t bound) {
  // Largest prime below 2^64.
  constexpr uint64_t kLargestPrime = 18446744073709551557ULL;
  if (bound >= kLargestPrime) {
    return absl::OutOfRangeError("no 64-bit prime above the bound");
  }
  for (uint64_t n = bound + 1;; ++n) {
    if (IsPrime(n)) return n;
  }
}

absl::StatusOr<Cluster> Cluster::Create(std::vector<uint64_t> values,
                                        std::vector<uint64_t> seeds,
                                        uint64_t q) {
  if (values.size() < 3) {
    return absl::InvalidArgumentError(absl::StrCat(
        "a cluster needs at least 3 members, got ", values.size()));
  }
  if (seeds.size() != values.size()) {
    return absl::InvalidArgumentError("one seed per member is required");
  }
  if (!IsPrime(q)) {
    return absl::InvalidArgumentError(absl::StrCat("q = ", q, " is not prime"));
  }
  if (auto s = CheckSeeds(seeds, q); !s.ok()) return s;
  unsigned __int128 total = 0;
  for (uint64_t x : values) {
    if (x >= q) {
      return absl::InvalidArgumentError(
          absl::StrCat("value ", x, " is not below q = ", q));
    }
    total += x;
  }
  if (total >= q) {
    return absl::InvalidArgumentError("cluster sum is not below q");
  }
  return Cluster(std::move(values), std::move(seeds), q);
}

absl::StatusOr<Cluster> Cluster::WithDefaults(std::vector<uint64_t> values,
                                              uint64_t sum_bound) {
  absl::StatusOr<uint64_t> q = SmallestPrimeAbove(sum_bound);
  if (!q.ok()) return q.status();
  std::vector<uint64_t> seeds(values.size());
  for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  return Create(std::move(values), std::move(seeds), *q);
}

absl::StatusOr<std::vector<uint64_t>> ComputeSharesWithCoefficients(
    uint64_t x, std::span<const uint64_t> coefficients,
    std::span<const uint64_t> seeds, uint64_t q, OpCounter* ops) {
  if (auto s = CheckSeeds(seeds, q); !s.ok()) return s;
  if (x >= q) {
    return absl::InvalidArgumentError(
        absl::StrCat("value ", x, " is not below q = ", q));
  }
  if (coefficients.size() + 1 != seeds.size()) {
    return absl::InvalidArgumentError(
        "a member needs one coefficient per other member");
  }
  for (uint64_t c : coefficients) {
    if (c >= q) return absl::InvalidArgumentError("coefficient not below q");
  }
  const Field f(q, ops);
  std::vector<uint64_t> row;
  row.reserve(seeds.size());
  for (uint64_t s : seeds) {
    // Horner from the top coefficient down to the constant x.
    uint64_t acc = coefficients.empty() ? x : coefficients.back();
    if (!coefficients.empty()) {
      for (size_t l = coefficients.size() - 1; l > 0; --l) {
        acc = f.Add(f.Mul(acc, s), coefficients[l - 1]);
      }
      acc = f.Add(f.Mul(acc, s), x);
    }
    row.push_back(acc);
  }
  return row;
}

absl::StatusOr<std::vector<uint64_t>> ComputeShares(
    uint64_t x, std::span<const uint64_t> seeds, Rng& rng, uint64_t q,
    OpCounter* ops) {
  std::vector<uint64_t> coefficients(seeds.empty() ? 0 : seeds.size() - 1);
  for (uint64_t& c : coefficients) c = rng.UniformBelow(q);
  return ComputeSharesWithCoefficients(x, coefficients, seeds, q, ops);
}

absl::StatusOr<uint64_t> AssembleClusterSum(const ShareMatrix& shares,
                                            std::span<const uint64_t> seeds,
                                            uint64_t q, OpCounter* ops) {
  const size_t m = shares.size();
  if (seeds.size() != m || m == 0) {
    return absl::InvalidArgumentError("share matrix and seeds disagree");
  }
  if (auto s = CheckSeeds(seeds, q); !s.ok()) return s;
  const Field f(q, ops);

  // Augmented system [s_j^0 .. s_j^{m-1} | F_j].
  std::vector<std::vector<uint64_t>> a(m, std::vector<uint64_t>(m + 1));
  for (size_t j = 0; j < m; ++j) {
    uint64_t column_sum = shares.at(0, j);
    for (size_t i = 1; i < m; ++i)
      column_sum = f.Add(column_sum, shares.at(i, j));
    a[j][m] = column_sum;
    a[j][0] = 1;
    for (size_t l = 1; l < m; ++l) a[j][l] = f.Mul(a[j][l - 1], seeds[j]);
  }

  // Gauss-Jordan elimination.
  for (size_t col = 0; col < m; ++col) {
    size_t pivot = col;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) {
      return absl::InternalError("singular Vandermonde system");
    }
    std::swap(a[pivot], a[col]);
    const uint64_t inv = f.Inverse(a[col][col]);
    for (size_t l = col; l <= m; ++l) a[col][l] = f.Mul(a[col][l], inv);
    for (size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const uint64_t factor = a[r][col];
      for (size_t l = col; l <= m; ++l) {
        a[r][l] = f.Sub(a[r][l], f.Mul(factor, a[col][l]));
      }
    }
  }
  return a[0][m];
}

absl::StatusOr<uint64_t> RunClusterKernel(const Cluster& cluster, Rng& rng,
                                          OpCounter* ops) {
  const size_t m = cluster.size();
  ShareMatrix shares(m);
  for (size_t i = 0; i < m; ++i) {
    absl::StatusOr<std::vector<uint64_t>> row = ComputeShares(
        cluster.values()[i], cluster.seeds(), rng, cluster.q(), ops);
    if (!row.ok()) return row.status();
    for (size_t j = 0; j < m; ++j) shares.at(i, j) = (*row)[j];
  }
  return AssembleClusterSum(shares, cluster.seeds(), cluster.q(), ops);
}

absl::string_view SchemeName(Scheme scheme) {
  return scheme == Scheme::kOurs ? "ours" : "cpda";
}

namespace {

// Returns the unmasked sum; counts one addition per mask/chain/unmask step.
absl::StatusOr<uint64_t> RingKernel(std::span<const uint64_t> values, Modulus m,
                                    Rng& rng, OpCounter* ops) {
  const InitialMask mask{rng.UniformBelow(m.value())};
  absl::StatusOr<MaskedValue> running =
      MaskInitial(PrivateValue{values[0]}, mask, m);
  if (!running.ok()) return running.status();
  if (ops != nullptr) ++ops->additions;
  for (size_t i = 1; i < values.size(); ++i) {
    running = ChainAdd(*running, PrivateValue{values[i]}, m);
    if (!running.ok()) return running.status();
    if (ops != nullptr) ++ops->additions;
  }
  absl::StatusOr<AggregateSum> sum = Unmask(*running, mask, m);
  if (!sum.ok()) return sum.status();
  if (ops != nullptr) ++ops->additions;
  return sum->total;
}

}  // namespace

absl::StatusOr<BenchResult> BenchmarkKernel(Scheme scheme, uint32_t n_nodes,
                                            uint32_t repetitions,
                                            uint64_t seed) {
  if (repetitions == 0) {
    return absl::InvalidArgumentError("repetitions must be positive");
  }
  if (scheme == Scheme::kOurs && n_nodes < 1) {
    return absl::OutOfRangeError("the ring needs at least one node");
  }
  if (scheme == Scheme::kCpda && (n_nodes < 3 || n_nodes > 5)) {
    return absl::OutOfRangeError(
        absl::StrCat("cluster kernel supports 3 to 5 members, got ", n_nodes));
  }
  constexpr uint64_t kSumBound = 1ULL << 32;
  std::vector<uint64_t> values(n_nodes);
  for (uint32_t i = 0; i < n_nodes; ++i) values[i] = 1000 + 17 * i;

  absl::StatusOr<Modulus> modulus = Modulus::Create(kSumBound);
  if (!modulus.ok()) return modulus.status();
  absl::StatusOr<Cluster> cluster =
      scheme == Scheme::kCpda
          ? Cluster::WithDefaults(values, kSumBound)
          : absl::StatusOr<Cluster>(absl::UnknownError("unused"));
  if (scheme == Scheme::kCpda && !cluster.ok()) return cluster.status();

  Rng rng = Rng::Derive(seed, n_nodes);
  auto kernel = [&](OpCounter* ops) -> absl::StatusOr<uint64_t> {
    if (scheme == Scheme::kOurs) return RingKernel(values, *modulus, rng, ops);
    return RunClusterKernel(*cluster, rng, ops);
  };

  BenchResult result;
  result.scheme = scheme;
  result.n_nodes = n_nodes;
  result.repetitions = repetitions;
  OpCounter ops;
  absl::StatusOr<uint64_t> check = kernel(&ops);
  if (!check.ok()) return check.status();
  uint64_t expected = 0;
  for (uint64_t v : values) expected += v;
  if (*check != expected) {
    return absl::InternalError("benchmark kernel returned a wrong sum");
  }
  result.op_count = ops.total();

  std::vector<double> samples;
  samples.reserve(repetitions);
  volatile uint64_t sink = 0;
  for (uint32_t r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    absl::StatusOr<uint64_t> out = kernel(nullptr);
    const auto stop = std::chrono::steady_clock::now();
    if (!out.ok()) return out.status();
    sink = sink + *out;
    samples.push_back(
        std::chrono::duration<double, std::nano>(stop - start).count());
  }
  result.wall_ns_median = Median(std::move(samples));
  return result;
}

}  // namespace ringsum::cpda
