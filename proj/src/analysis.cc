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

#include "ringsum/analysis.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "ringsum/adversary.h"
#include "ringsum/random.h"
#include "ringsum/scenario.h"

namespace ringsum {

namespace {

absl::Status CheckProbability(double b) {
  if (!(b >= 0.0 && b <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("b = ", b, " is outside [0, 1]"));
  }
  return absl::OkStatus();
}

// Reference ring used for the empirical column: three sources, complete
// graph, direct forwarding.
absl::StatusOr<LinkCompromiseModel> ReferenceRing(uint64_t seed,
                                                  NodeId* middle) {
  ScenarioConfig config;
  config.n_sources = 3;
  config.values = {3, 9, 14};
  config.modulus = 32;
  config.edge_probability = 1.0;
  config.seed = seed;
  absl::StatusOr<ScenarioRun> run = RunScenario(config);
  if (!run.ok()) return run.status();
  const RoundRecord& round = run->transcript.rounds.back();
  if (round.result.outcome != RoundResult::Outcome::kSum) {
    return absl::InternalError("reference ring did not complete");
  }
  *middle = round.visitation[1];
  return LinkCompromiseModel::Create(run->transcript);
}

std::string FormatProbability(double p) { return absl::StrFormat("%.15g", p); }

}  // namespace

absl::StatusOr<DisclosureModel> DisclosureModel::Create(
    double b, uint32_t min_cluster, uint32_t max_cluster,
    std::vector<double> cluster_mass) {
  if (auto s = CheckProbability(b); !s.ok()) return s;
  if (min_cluster < 2) {
    return absl::InvalidArgumentError("minimum cluster size must be >= 2");
  }
  if (max_cluster < min_cluster) {
    return absl::InvalidArgumentError(
        "maximum cluster size is below the minimum");
  }
  if (cluster_mass.size() != max_cluster - min_cluster + 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", max_cluster - min_cluster + 1,
                     " cluster-size probabilities, got ", cluster_mass.size()));
  }
  for (double p : cluster_mass) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(
          "cluster-size probabilities must lie in [0, 1]");
    }
  }
  const double total =
      std::accumulate(cluster_mass.begin(), cluster_mass.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrCat("cluster-size probabilities sum to ", total, ", not 1"));
  }
  return DisclosureModel(b, min_cluster, max_cluster, std::move(cluster_mass));
}

absl::StatusOr<DisclosureModel> DisclosureModel::Uniform(double b,
                                                         uint32_t min_cluster,
                                                         uint32_t max_cluster) {
  if (max_cluster < min_cluster) {
    return absl::InvalidArgumentError(
        "maximum cluster size is below the minimum");
  }
  const uint32_t count = max_cluster - min_cluster + 1;
  return Create(b, min_cluster, max_cluster,
                std::vector<double>(count, 1.0 / count));
}

absl::StatusOr<DisclosureModel> DisclosureModel::FixedSize(double b,
                                                           uint32_t m) {
  return Create(b, m, m, {1.0});
}

absl::StatusOr<DisclosureModel> DisclosureModel::WithB(double b) const {
  return Create(b, min_cluster_, max_cluster_, mass_);
}

double DisclosureProbability(const DisclosureModel& model) {
  double p = 0.0;
  for (uint32_t m = model.min_cluster(); m <= model.max_cluster(); ++m) {
    const double link_chain = std::pow(model.b(), m - 1);
    const double none_broken = std::pow(1.0 - link_chain, m);
    p += model.cluster_mass()[m - model.min_cluster()] * (1.0 - none_broken);
  }
  return p;
}

absl::StatusOr<double> DisclosureProbabilityOurs(double b) {
  if (auto s = CheckProbability(b); !s.ok()) return s;
  return 1.0 - (1.0 - b) * (1.0 - b);
}

absl::StatusOr<std::vector<CurvePoint>> SweepCurve(const DisclosureModel& model,
                                                   bool ours,
                                                   std::span<const double> grid,
                                                   uint64_t trials,
                                                   uint64_t seed) {
  std::optional<LinkCompromiseModel> ring;
  NodeId middle;
  if (ours && trials > 0) {
    absl::StatusOr<LinkCompromiseModel> built = ReferenceRing(seed, &middle);
    if (!built.ok()) return built.status();
    ring = *std::move(built);
  }
  std::vector<CurvePoint> points;
  points.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const double b = grid[i];
    CurvePoint point;
    point.b = b;
    if (ours) {
      absl::StatusOr<double> p = DisclosureProbabilityOurs(b);
      if (!p.ok()) return p.status();
      point.p_formula = *p;
    } else {
      absl::StatusOr<DisclosureModel> at_b = model.WithB(b);
      if (!at_b.ok()) return at_b.status();
      point.p_formula = DisclosureProbability(*at_b);
    }
    if (ring.has_value()) {
      Rng rng = Rng::Derive(seed, i);
      uint64_t hits = 0;
      for (uint64_t t = 0; t < trials; ++t) {
        if (ring->Sample(b, rng).disclosed.contains(middle)) ++hits;
      }
      point.p_empirical = static_cast<double>(hits) / trials;
      point.trials = trials;
    }
    points.push_back(point);
  }
  return points;
}

absl::StatusOr<std::vector<double>> MakeGrid(double start, double stop,
                                             double step) {
  if (!(step > 0.0) || !(start <= stop) || !(start >= 0.0) || !(stop <= 1.0)) {
    return absl::InvalidArgumentError(
        "grid needs 0 <= start <= stop <= 1 and a positive step");
  }
  const auto count =
      static_cast<uint64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    grid.push_back(std::min(stop, start + static_cast<double>(i) * step));
  }
  return grid;
}

absl::Status WriteCurveCsv(std::ostream& out, std::span<const CurvePoint> cpda,
                           std::span<const CurvePoint> ours) {
  if (cpda.size() != ours.size()) {
    return absl::InvalidArgumentError("curves use different grids");
  }
  out << "b,p_cpda_formula,p_ours_formula,p_ours_empirical,trials\n";
  for (size_t i = 0; i < cpda.size(); ++i) {
    if (cpda[i].b != ours[i].b) {
      return absl::InvalidArgumentError("curves use different grids");
    }
    out << FormatProbability(ours[i].b) << ','
        << FormatProbability(cpda[i].p_formula) << ','
        << FormatProbability(ours[i].p_formula) << ',';
    if (ours[i].p_empirical.has_value()) {
      out << FormatProbability(*ours[i].p_empirical);
    }
    out << ',' << ours[i].trials << '\n';
  }
  return absl::OkStatus();
}

}  // namespace ringsum
