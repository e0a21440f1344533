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

#ifndef RINGSUM_ANALYSIS_H_
#define RINGSUM_ANALYSIS_H_

// Disclosure probability of cluster-based aggregation,
//
//   P(b) = sum_{m = pc}^{Dmax} P(k = m) * (1 - (1 - b^(m-1))^m),
//
// where b is the probability that a single link's confidentiality is broken
// and P(k = m) is the cluster-size distribution. The ring scheme is the
// degenerate case pc = Dmax = 2 with P(k = 2) = 1, i.e. 1 - (1 - b)^2.
//
// The cluster-size distribution for the cluster-based baseline is not known;
// callers pass one, and Uniform() is the default. Note that with this formula
// the m = 2 curve lies above the m = 3 curve for small b; both are reported
// as computed.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace ringsum {

class DisclosureModel {
 public:
  // `cluster_mass[i]` is P(k = pc + i); it must sum to 1 within 1e-12.
  static absl::StatusOr<DisclosureModel> Create(
      double b, uint32_t min_cluster, uint32_t max_cluster,
      std::vector<double> cluster_mass);
  static absl::StatusOr<DisclosureModel> Uniform(double b, uint32_t min_cluster,
                                                 uint32_t max_cluster);
  // All clusters have size m.
  static absl::StatusOr<DisclosureModel> FixedSize(double b, uint32_t m);

  double b() const { return b_; }
  uint32_t min_cluster() const { return min_cluster_; }
  uint32_t max_cluster() const { return max_cluster_; }
  const std::vector<double>& cluster_mass() const { return mass_; }

  absl::StatusOr<DisclosureModel> WithB(double b) const;

 private:
  DisclosureModel(double b, uint32_t min_cluster, uint32_t max_cluster,
                  std::vector<double> mass)
      : b_(b),
        min_cluster_(min_cluster),
        max_cluster_(max_cluster),
        mass_(std::move(mass)) {}

  double b_;
  uint32_t min_cluster_;
  uint32_t max_cluster_;
  std::vector<double> mass_;
};

double DisclosureProbability(const DisclosureModel& model);

// 1 - (1 - b)^2.
absl::StatusOr<double> DisclosureProbabilityOurs(double b);

struct CurvePoint {
  double b = 0.0;
  double p_formula = 0.0;
  std::optional<double> p_empirical;
  uint64_t trials = 0;
};

// Evaluates the formula at every grid point: the ring scheme when `ours`,
// otherwise `model` with b replaced. When `ours` and trials > 0, also
// estimates how often the middle source of a three-source ring is disclosed
// by link compromise (both links incident to it broken). Grid point i uses
// the generator Rng::Derive(seed, i), so points are independent of
// evaluation order.
absl::StatusOr<std::vector<CurvePoint>> SweepCurve(const DisclosureModel& model,
                                                   bool ours,
                                                   std::span<const double> grid,
                                                   uint64_t trials = 0,
                                                   uint64_t seed = 0);

// start, start + step, ..., stop (inclusive, within rounding).
absl::StatusOr<std::vector<double>> MakeGrid(double start, double stop,
                                             double step);

// Header: b,p_cpda_formula,p_ours_formula,p_ours_empirical,trials
absl::Status WriteCurveCsv(std::ostream& out, std::span<const CurvePoint> cpda,
                           std::span<const CurvePoint> ours);

}  // namespace ringsum

#endif  // RINGSUM_ANALYSIS_H_
