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

#include <cstdint>
#include <set>
#include <vector>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "ringsum/random.h"
#include "tests/status_testing.h"

namespace ringsum::cpda {
namespace {

// Independent evaluation of x + sum_l c_l * s^l mod q, one term at a time.
uint64_t EvaluatePolynomial(uint64_t x, const std::vector<uint64_t>& coeffs,
                            uint64_t s, uint64_t q) {
  unsigned __int128 total = x;
  unsigned __int128 power = 1;
  for (uint64_t c : coeffs) {
    power = power * s % q;
    total += power * c % q;
  }
  return static_cast<uint64_t>(total % q);
}

TEST(PrimeTest, SmallestPrimeAbove) {
  EXPECT_TRUE(IsPrime(2));
  EXPECT_TRUE(IsPrime(7));
  EXPECT_FALSE(IsPrime(1));
  EXPECT_FALSE(IsPrime(561));
  EXPECT_EQ(*SmallestPrimeAbove(6), 7u);
  EXPECT_EQ(*SmallestPrimeAbove(7), 11u);
  EXPECT_EQ(*SmallestPrimeAbove(uint64_t{1} << 32), 4294967311u);
}

TEST(ClusterTest, Validates) {
  EXPECT_OK(Cluster::Create({1, 2, 3}, {1, 2, 3}, 7));
  EXPECT_FALSE(Cluster::Create({1, 2}, {1, 2}, 7).ok());
  EXPECT_FALSE(Cluster::Create({1, 2, 3}, {1, 1, 3}, 7).ok());
  EXPECT_FALSE(Cluster::Create({1, 2, 3}, {0, 1, 3}, 7).ok());
  EXPECT_FALSE(Cluster::Create({1, 2, 3}, {1, 2, 7}, 7).ok());
  EXPECT_FALSE(Cluster::Create({1, 2, 3}, {1, 2, 3}, 8).ok());
  EXPECT_FALSE(Cluster::Create({3, 3, 3}, {1, 2, 3}, 7).ok());
}

TEST(ComputeSharesTest, ConstantPolynomial) {
  const std::vector<uint64_t> seeds = {1, 2, 3};
  ASSERT_OK_AND_ASSIGN(
      std::vector<uint64_t> shares,
      ComputeSharesWithCoefficients(5, std::vector<uint64_t>{0, 0}, seeds, 11));
  EXPECT_EQ(shares, (std::vector<uint64_t>{5, 5, 5}));
}

TEST(ComputeSharesTest, LinearPolynomial) {
  const std::vector<uint64_t> seeds = {1, 2, 3};
  ASSERT_OK_AND_ASSIGN(
      std::vector<uint64_t> shares,
      ComputeSharesWithCoefficients(0, std::vector<uint64_t>{1, 0}, seeds, 11));
  EXPECT_EQ(shares, (std::vector<uint64_t>{1, 2, 3}));
}

TEST(ComputeSharesTest, RandomMatchesIndependentEvaluation) {
  Rng rng(1);
  const uint64_t q = 1000003;
  const std::vector<uint64_t> seeds = {3, 17, 101, 999, 4242};
  for (int t = 0; t < 500; ++t) {
    std::vector<uint64_t> coeffs(seeds.size() - 1);
    for (auto& c : coeffs) c = rng.UniformBelow(q);
    const uint64_t x = rng.UniformBelow(q);
    ASSERT_OK_AND_ASSIGN(std::vector<uint64_t> shares,
                         ComputeSharesWithCoefficients(x, coeffs, seeds, q));
    for (size_t j = 0; j < seeds.size(); ++j) {
      EXPECT_EQ(shares[j], EvaluatePolynomial(x, coeffs, seeds[j], q));
    }
  }
}

TEST(AssembleTest, ReferenceCluster) {
  const std::vector<uint64_t> seeds = {1, 2, 3};
  const std::vector<uint64_t> x = {4, 5, 6};
  const uint64_t q = 101;
  const std::vector<std::vector<uint64_t>> coeffs = {
      {17, 88}, {3, 59}, {71, 42}};
  ShareMatrix shares(3);
  for (size_t i = 0; i < 3; ++i) {
    ASSERT_OK_AND_ASSIGN(
        std::vector<uint64_t> row,
        ComputeSharesWithCoefficients(x[i], coeffs[i], seeds, q));
    for (size_t j = 0; j < 3; ++j) shares.at(i, j) = row[j];
  }
  ASSERT_OK_AND_ASSIGN(uint64_t sum, AssembleClusterSum(shares, seeds, q));
  EXPECT_EQ(sum, 15u);
}

TEST(AssembleTest, ZeroInputsAndZeroCoefficients) {
  const std::vector<uint64_t> seeds = {1, 2, 3, 4};
  Rng rng(2);
  ASSERT_OK_AND_ASSIGN(Cluster zeros,
                       Cluster::Create({0, 0, 0, 0}, seeds, 101));
  EXPECT_EQ(*RunClusterKernel(zeros, rng), 0u);

  ShareMatrix constant(4);
  const std::vector<uint64_t> x = {7, 8, 9, 10};
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = 0; j < 4; ++j) constant.at(i, j) = x[i];
  }
  EXPECT_EQ(*AssembleClusterSum(constant, seeds, 101), 34u);
}

TEST(AssembleTest, RandomClustersMatchDirectSum) {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const size_t m = 3 + t % 3;
    std::vector<uint64_t> x(m);
    uint64_t oracle = 0;
    for (auto& v : x) {
      v = rng.UniformBelow(1 << 20);
      oracle += v;
    }
    ASSERT_OK_AND_ASSIGN(Cluster cluster,
                         Cluster::WithDefaults(x, uint64_t{1} << 32));
    ASSERT_OK_AND_ASSIGN(uint64_t sum, RunClusterKernel(cluster, rng));
    EXPECT_EQ(sum, oracle);
  }
}

// Any single observed share is consistent with every private value: for each
// (seed, share) there is a coefficient pair explaining every x in Z_7.
TEST(PrivacyTest, SingleShareRevealsNothingAtTinyPrime) {
  const uint64_t q = 7;
  const std::vector<uint64_t> seeds = {1, 2, 3};
  for (size_t j = 0; j < seeds.size(); ++j) {
    std::vector<std::set<uint64_t>> explained(q);
    for (uint64_t x = 0; x < q; ++x) {
      for (uint64_t c1 = 0; c1 < q; ++c1) {
        for (uint64_t c2 = 0; c2 < q; ++c2) {
          ASSERT_OK_AND_ASSIGN(std::vector<uint64_t> row,
                               ComputeSharesWithCoefficients(
                                   x, std::vector<uint64_t>{c1, c2}, seeds, q));
          explained[row[j]].insert(x);
        }
      }
    }
    for (uint64_t share = 0; share < q; ++share) {
      EXPECT_EQ(explained[share].size(), q);
    }
  }
}

TEST(BenchmarkTest, RingOpCountIsNPlusOne) {
  for (uint32_t n = 2; n <= 50; ++n) {
    ASSERT_OK_AND_ASSIGN(BenchResult r, BenchmarkKernel(Scheme::kOurs, n, 3));
    EXPECT_EQ(r.op_count, n + 1);
  }
}

TEST(BenchmarkTest, ClusterOpCountGrowsSuperlinearly) {
  std::vector<uint64_t> counts;
  for (uint32_t m = 3; m <= 5; ++m) {
    ASSERT_OK_AND_ASSIGN(BenchResult r, BenchmarkKernel(Scheme::kCpda, m, 3));
    counts.push_back(r.op_count);
  }
  EXPECT_LT(counts[0], counts[1]);
  EXPECT_LT(counts[1], counts[2]);
  EXPECT_LT(counts[1] - counts[0], counts[2] - counts[1]);
}

TEST(BenchmarkTest, OpCountIsDeterministic) {
  for (uint64_t seed : {0, 1, 99}) {
    EXPECT_EQ(BenchmarkKernel(Scheme::kCpda, 4, 1, seed)->op_count,
              BenchmarkKernel(Scheme::kCpda, 4, 1, 0)->op_count);
  }
}

TEST(BenchmarkTest, RangeErrors) {
  EXPECT_EQ(BenchmarkKernel(Scheme::kOurs, 3, 0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(BenchmarkKernel(Scheme::kCpda, 6, 1).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(BenchmarkKernel(Scheme::kCpda, 2, 1).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(BenchmarkKernel(Scheme::kOurs, 0, 1).status().code(),
            absl::StatusCode::kOutOfRange);
}

}  // namespace
}  // namespace ringsum::cpda
