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

#ifndef RINGSUM_RANDOM_H_
#define RINGSUM_RANDOM_H_

#include <cstdint>
#include <random>

namespace ringsum {

// Seeded pseudo-random source used by every simulated principal.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Range reduction is done here rather than through
// std::uniform_int_distribution, whose algorithm is implementation-defined,
// so that transcripts are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, stream). Used to hand each principal and
  // each experiment worker its own generator.
  static Rng Derive(uint64_t seed, uint64_t stream);

  uint64_t Next() { return engine_(); }

  // Uniform on [0, bound). bound must be positive.
  uint64_t UniformBelow(uint64_t bound);

  // Uniform on [lo, hi], inclusive.
  uint64_t UniformInclusive(uint64_t lo, uint64_t hi);

  // Uniform double on [0, 1) with 53 bits of precision.
  double UniformUnit();

  bool Bernoulli(double p) { return UniformUnit() < p; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
uint64_t MixBits(uint64_t x);

}  // namespace ringsum

#endif  // RINGSUM_RANDOM_H_
