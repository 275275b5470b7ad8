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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaugesim/gauge.hpp"
#include "gaugesim/rng.hpp"

namespace gaugesim {

// Leading regions collapse one at a time from their marginals; the residual
// system then collapses in a single gauge step. An empty list is a one-step plan.
struct CollapsePlan {
  std::vector<int> leading_regions;

  int steps() const { return static_cast<int>(leading_regions.size()) + 1; }
  // "2,final" or "final".
  static CollapsePlan parse(std::string_view text);
  std::string to_string() const;
};

struct RunTrace {
  std::vector<ConditioningStep> leading;  // leading-region collapses, in order
  int ignition_gamma = -1;                // gamma in the original numbering
  IgnitionIndex ignition_index = 0;       // index in the residual system
  OutcomeMask outcome = 0;
};

// One collapse of the gauge model: the ignition configuration is drawn
// uniformly from {u_i + iK} unless forced, then j ~ g_gamma and every region
// reads its bit of j.
RunTrace one_step_run(const GaugeSet& gauges, std::span<const int> settings, CounterRng& rng,
                      std::optional<int> forced_gamma = std::nullopt);

// Counts of outcome vectors.
class EmpiricalTable {
 public:
  explicit EmpiricalTable(int regions = 0) : regions_(regions), counts_(std::size_t{1} << regions, 0) {}

  void add(OutcomeMask x) { ++counts_[x]; }
  // Element-wise sum: associative and commutative.
  EmpiricalTable& merge(const EmpiricalTable& other);

  int regions() const { return regions_; }
  std::uint64_t total() const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  double frequency(OutcomeMask x) const;
  // Half the L1 distance to `expected` (indexed by outcome mask).
  double tv_distance(std::span<const double> expected) const;

  friend bool operator==(const EmpiricalTable&, const EmpiricalTable&) = default;

 private:
  int regions_;
  std::vector<std::uint64_t> counts_;
};

// A plan prepared for one setting vector: every reachable branch already
// carries its solved gauge set. Throws Error(InfeasibleBranch) if a branch
// has no one-step collapse.
class PreparedCollapse {
 public:
  PreparedCollapse(const ProbabilitySystem& system, const CollapsePlan& plan, std::span<const int> settings,
                   const WorkingSet* final_support = nullptr);
  PreparedCollapse(PreparedCollapse&&) noexcept;
  PreparedCollapse& operator=(PreparedCollapse&&) noexcept;
  ~PreparedCollapse();

  RunTrace run(CounterRng& rng, std::optional<int> forced_gamma = std::nullopt) const;
  const SettingVector& settings() const { return settings_; }
  int regions() const { return regions_; }

 private:
  struct Node;
  int regions_;
  int setting_count_;
  SettingVector settings_;
  std::unique_ptr<Node> root_;
};

RunTrace multi_step_run(const ProbabilitySystem& system, const CollapsePlan& plan, std::span<const int> settings,
                        CounterRng& rng);

struct SimulationResult {
  EmpiricalTable counts;
  double tv_distance = 0.0;
  std::vector<RunTrace> trace_sample;  // the first few runs
};

struct SimulationOptions {
  std::uint64_t runs = 10000;
  std::uint64_t seed = 1;
  std::size_t trace_sample = 5;
  std::optional<int> forced_gamma;
};

// Run r always draws from stream (seed, r): the OpenMP kernel and the serial
// reference return identical tables for any thread count.
SimulationResult simulate(const ProbabilitySystem& system, const PreparedCollapse& prepared,
                          const SimulationOptions& options);
SimulationResult simulate_serial(const ProbabilitySystem& system, const PreparedCollapse& prepared,
                                 const SimulationOptions& options);

// Outcome counts of the continuous singlet model, same stream layout.
EmpiricalTable simulate_continuous(double angle0, double angle1, std::uint64_t runs, std::uint64_t seed);

// Branch of a multi-step collapse and the gauge set found for it.
struct BranchCertificate {
  ConditionedSystem branch;
  GaugeSet gauges;
};

struct MinStepsResult {
  int steps = 0;
  CollapsePlan plan;
  std::vector<BranchCertificate> branches;
};

// Smallest m admitting an m-step plan; searches leading-region orders
// depth first and caches one-step feasibility per canonical table.
MinStepsResult find_min_steps(const ProbabilitySystem& system);

// Every branch reachable by `plan` (all settings, non-zero outcomes) has a
// one-step collapse. Returns the certificates, or nullopt.
std::optional<std::vector<BranchCertificate>> certify_plan(const ProbabilitySystem& system,
                                                           const CollapsePlan& plan);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Homogeneity test on a table of counts (rows = samples, columns = categories).
ChiSquareResult chi_square_homogeneity(const std::vector<std::vector<std::uint64_t>>& counts);

}  // namespace gaugesim
