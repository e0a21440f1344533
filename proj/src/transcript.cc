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

#include "ringsum/transcript.h"

#include <algorithm>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace ringsum {

std::string KeyId::ToString() const { return absl::StrCat("k", value); }

bool TraceEvent::ReadableBy(NodeId id) const {
  return std::binary_search(readable_by.begin(), readable_by.end(), id);
}

std::string Transcript::Serialize() const {
  auto join_ids = [](const auto& ids) {
    return absl::StrJoin(ids, ",", [](std::string* out, NodeId id) {
      out->append(id.ToString());
    });
  };
  std::string out =
      absl::StrCat("# seed=", seed, " sources=", n_sources,
                   " modulus=", modulus, " mode=", RelayModeName(mode), "\n");
  size_t next_round = 0;
  auto flush_rounds_before = [&](uint32_t round) {
    while (next_round < rounds.size() && rounds[next_round].index < round) {
      const RoundRecord& r = rounds[next_round++];
      absl::StrAppend(&out, "# round=", r.index,
                      " initiator=", r.initiator.ToString(),
                      " order=", join_ids(r.visitation),
                      " outcome=", OutcomeName(r.result.outcome));
      if (r.result.outcome == RoundResult::Outcome::kSum) {
        absl::StrAppend(&out, " sum=", r.result.sum.total);
      }
      if (!r.result.reason.empty()) {
        absl::StrAppend(&out, " reason=\"", r.result.reason, "\"");
      }
      out.push_back('\n');
    }
  };
  for (const TraceEvent& e : events) {
    flush_rounds_before(e.round);
    std::string payload = e.message.PayloadSummary();
    if (e.hop_sender != e.message.origin ||
        e.hop_receiver != e.message.destination) {
      absl::StrAppend(&payload, " [", e.message.origin.ToString(), "->",
                      e.message.destination.ToString(), "]");
    }
    absl::StrAppend(&out, e.step, "\t", e.hop_sender.ToString(), "\t",
                    e.hop_receiver.ToString(), "\t",
                    MessageTypeName(e.message.type), "\t",
                    e.key ? e.key->ToString() : "PLAIN", "\t", payload, "\n");
  }
  flush_rounds_before(UINT32_MAX);
  return out;
}

}  // namespace ringsum
