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

#include "ringsum/random.h"

#include <cassert>
#include <cstdint>
#include <limits>

namespace ringsum {

uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::Derive(uint64_t seed, uint64_t stream) {
  return Rng(MixBits(MixBits(seed) ^ MixBits(stream + 0x632be59bd9b4e019ULL)));
}

uint64_t Rng::UniformBelow(uint64_t bound) {
  assert(bound > 0);
  // Lemire's multiply-shift with rejection of the biased low region.
  unsigned __int128 product = static_cast<unsigned __int128>(Next()) * bound;
  uint64_t low = static_cast<uint64_t>(product);
  if (low < bound) {
    const uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(Next()) * bound;
      low = static_cast<uint64_t>(product);
    }
  }
  return static_cast<uint64_t>(product >> 64);
}

uint64_t Rng::UniformInclusive(uint64_t lo, uint64_t hi) {
  assert(lo <= hi);
  if (lo == 0 && hi == std::numeric_limits<uint64_t>::max()) return Next();
  return lo + UniformBelow(hi - lo + 1);
}

double Rng::UniformUnit() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

}  // namespace ringsum
