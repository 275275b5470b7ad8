// Copyright 2026 The gaugesim Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gaugesim/system.hpp"

namespace gaugesim {

// An ignition index has n*K bits; bit gamma is the outcome the index assigns
// to configuration gamma.
using IgnitionIndex = std::uint64_t;

// Enumerating every index is only allowed up to this many bits.
inline constexpr int kMaxFullIndexBits = 24;

inline int projection(int gamma, IgnitionIndex index) { return static_cast<int>((index >> gamma) & 1U); }

// Outcome vector produced by `index` under setting vector `settings`.
OutcomeMask project_outcome(IgnitionIndex index, std::span<const int> settings, int setting_count);

// Restricted set of ignition indices, kept sorted and unique.
class WorkingSet {
 public:
  WorkingSet(int regions, int setting_count, std::vector<IgnitionIndex> indices);
  // All 2^(nK) indices; throws RangeError above kMaxFullIndexBits.
  static WorkingSet full(int regions, int setting_count);

  int regions() const { return regions_; }
  int setting_count() const { return setting_count_; }
  const std::vector<IgnitionIndex>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }

 private:
  int regions_;
  int setting_count_;
  std::vector<IgnitionIndex> indices_;
};

// Indices in `support` that reproduce outcome `x` under `settings`.
std::vector<IgnitionIndex> target_index_set(const WorkingSet& support, OutcomeMask x, std::span<const int> settings);

// The 2K K-bit words with at most one jump between 0 and 1, in trigonometric
// order starting from the word whose lowest ceil(K/2) bits are set.
std::vector<IgnitionIndex> double_plateau(int setting_count);

// Two-region index whose regions both read the K-bit word `word`.
inline IgnitionIndex lift_bipartite(IgnitionIndex word, int setting_count) {
  return word | (word << setting_count);
}
// Lifted double-plateau working set for two regions.
WorkingSet double_plateau_support(int setting_count);

class GaugeDistribution {
 public:
  GaugeDistribution(int gamma, std::vector<IgnitionIndex> support, std::vector<Scalar> weights);

  int gamma() const { return gamma_; }
  const std::vector<IgnitionIndex>& support() const { return support_; }
  const std::vector<Scalar>& weights() const { return weights_; }
  // Zero outside the support.
  Scalar weight(IgnitionIndex index) const;
  Scalar total() const;

  // Draws the entry whose cumulative weight first exceeds `uniform01`.
  IgnitionIndex sample(double uniform01) const;

 private:
  int gamma_;
  std::vector<IgnitionIndex> support_;
  std::vector<Scalar> weights_;
  std::vector<double> cumulative_;
};

// One distribution per configuration, indexed by gamma.
class GaugeSet {
 public:
  GaugeSet(int regions, int setting_count, std::vector<GaugeDistribution> gauges);

  int regions() const { return regions_; }
  int setting_count() const { return setting_count_; }
  const GaugeDistribution& at(int gamma) const { return gauges_.at(static_cast<std::size_t>(gamma)); }
  const std::vector<GaugeDistribution>& gauges() const { return gauges_; }

 private:
  int regions_;
  int setting_count_;
  std::vector<GaugeDistribution> gauges_;
};

struct GaugeConsistency {
  double max_deviation = 0.0;
  bool exact = true;          // every sum matched exactly (exact data only)
  bool normalized = true;     // every distribution sums to one and is non-negative
  bool within_tolerance = true;
};

// Compares sum_{j in J(x,u)} g_gamma(j) with P(x|u) for every target and every
// configuration whose setting appears in u.
GaugeConsistency verify_consistency(const ProbabilitySystem& system, const GaugeSet& gauges,
                                    double tolerance = kNumericTolerance);

enum class SolveStatus { Feasible, Infeasible, SupportTooSmall };

struct GaugeSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<GaugeDistribution> gauge;
};

// Exact phase-one simplex on the linear system of configuration `gamma`.
// `support` defaults to the full index space.
GaugeSolution solve_gauge(const ProbabilitySystem& system, int gamma, const WorkingSet* support = nullptr);

struct GaugeSetSolution {
  std::optional<GaugeSet> gauges;
  std::vector<int> failed;  // configurations without a solution
  bool feasible() const { return gauges.has_value(); }
};

// Configurations are solved independently; the parallel build spreads them
// over OpenMP threads and yields the same result as the serial loop.
GaugeSetSolution solve_all_gauges(const ProbabilitySystem& system, const WorkingSet* support = nullptr);
GaugeSetSolution solve_all_gauges_serial(const ProbabilitySystem& system, const WorkingSet* support = nullptr);

// Smallest working set (lexicographically first among equal sizes) on which
// every configuration has a gauge. Only index spaces of at most
// kMaxSharedSearchBits bits are searched; gives up after `budget` candidate
// sets. Returns nullopt when nothing was found within the limits.
inline constexpr int kMaxSharedSearchBits = 8;
std::optional<WorkingSet> find_shared_support(const ProbabilitySystem& system, std::size_t max_size = 8,
                                              std::uint64_t budget = 2'000'000);

// Number of linearly independent equations of one configuration's system.
std::size_t gauge_system_rank(const ProbabilitySystem& system, int gamma, const WorkingSet* support = nullptr);

}  // namespace gaugesim
