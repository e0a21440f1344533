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

#include "ringsum/secure_sum.h"

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ringsum {

namespace {

absl::Status CheckResidue(const char* name, uint64_t v, Modulus m) {
  if (!m.Contains(v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " = ", v, " is outside [0, ", m.value(), ")"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Modulus> Modulus::Create(uint64_t m) {
  if (m < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("modulus must be at least 2, got ", m));
  }
  return Modulus(m);
}

uint64_t AddMod(uint64_t a, uint64_t b, uint64_t m) {
  // a + b may exceed 2^64; compare against the headroom instead.
  return a >= m - b ? a - (m - b) : a + b;
}

uint64_t SubMod(uint64_t a, uint64_t b, uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

absl::StatusOr<MaskedValue> MaskInitial(PrivateValue x, InitialMask r,
                                        Modulus m) {
  if (auto s = CheckResidue("x", x.value, m); !s.ok()) return s;
  if (auto s = CheckResidue("r", r.value, m); !s.ok()) return s;
  return MaskedValue{AddMod(r.value, x.value, m.value())};
}

absl::StatusOr<MaskedValue> ChainAdd(MaskedValue prev, PrivateValue x,
                                     Modulus m) {
  if (auto s = CheckResidue("prev", prev.value, m); !s.ok()) return s;
  if (auto s = CheckResidue("x", x.value, m); !s.ok()) return s;
  return MaskedValue{AddMod(prev.value, x.value, m.value())};
}

absl::StatusOr<AggregateSum> Unmask(MaskedValue final_value, InitialMask r,
                                    Modulus m) {
  if (auto s = CheckResidue("final", final_value.value, m); !s.ok()) return s;
  if (auto s = CheckResidue("r", r.value, m); !s.ok()) return s;
  return AggregateSum{SubMod(final_value.value, r.value, m.value())};
}

absl::StatusOr<PrivateValue> CollusionRecover(MaskedValue current,
                                              MaskedValue previous, Modulus m) {
  if (auto s = CheckResidue("current", current.value, m); !s.ok()) return s;
  if (auto s = CheckResidue("previous", previous.value, m); !s.ok()) return s;
  return PrivateValue{SubMod(current.value, previous.value, m.value())};
}

}  // namespace ringsum
