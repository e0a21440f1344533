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

#ifndef RINGSUM_SECURE_SUM_H_
#define RINGSUM_SECURE_SUM_H_

// Modular-arithmetic primitives of the ring secure-sum.
//
// A round computes X = x_1 + ... + x_N mod M. The initiator hides its input
// under a uniform mask r, every later node adds its own input to the running
// value, and the initiator removes r at the end:
//
//   R_1 = (r + x_1) mod M
//   R_i = (R_{i-1} + x_i) mod M
//   X   = (R_N - r) mod M
//
// The caller guarantees that the true sum is below M; the result is then the
// exact integer sum. Every operation rejects operands that are not canonical
// residues with kInvalidArgument. All functions are pure and thread-safe.

#include <compare>
#include <cstdint>

#include "absl/status/statusor.h"

namespace ringsum {

// Ring size. Supports the full uint64_t range without overflow.
class Modulus {
 public:
  static absl::StatusOr<Modulus> Create(uint64_t m);

  uint64_t value() const { return m_; }
  bool Contains(uint64_t v) const { return v < m_; }

  friend bool operator==(Modulus, Modulus) = default;

 private:
  explicit Modulus(uint64_t m) : m_(m) {}
  uint64_t m_;
};

// A source's private reading.
struct PrivateValue {
  uint64_t value = 0;
  friend auto operator<=>(PrivateValue, PrivateValue) = default;
};

// The initiator's secret mask r.
struct InitialMask {
  uint64_t value = 0;
  friend auto operator<=>(InitialMask, InitialMask) = default;
};

// The running masked partial sum R_i.
struct MaskedValue {
  uint64_t value = 0;
  friend auto operator<=>(MaskedValue, MaskedValue) = default;
};

// The unmasked result X.
struct AggregateSum {
  uint64_t total = 0;
  friend auto operator<=>(AggregateSum, AggregateSum) = default;
};

// (a + b) mod m and (a - b) mod m for a, b < m.
uint64_t AddMod(uint64_t a, uint64_t b, uint64_t m);
uint64_t SubMod(uint64_t a, uint64_t b, uint64_t m);

// R_1 = (r + x) mod m.
absl::StatusOr<MaskedValue> MaskInitial(PrivateValue x, InitialMask r,
                                        Modulus m);

// R_i = (R_{i-1} + x_i) mod m.
absl::StatusOr<MaskedValue> ChainAdd(MaskedValue prev, PrivateValue x,
                                     Modulus m);

// X = (R_N - r) mod m.
absl::StatusOr<AggregateSum> Unmask(MaskedValue final_value, InitialMask r,
                                    Modulus m);

// x_i = (R_i - R_{i-1}) mod m. This is what two ring neighbours of node i
// learn when they pool the value entering and the value leaving node i.
absl::StatusOr<PrivateValue> CollusionRecover(MaskedValue current,
                                              MaskedValue previous, Modulus m);

}  // namespace ringsum

#endif  // RINGSUM_SECURE_SUM_H_
