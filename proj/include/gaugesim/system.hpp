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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaugesim/scalar.hpp"

namespace gaugesim {

// Bit i holds the binary outcome of region i.
using OutcomeMask = std::uint32_t;

// Setting vectors are stored as mixed-radix indices: sum_i u_i * K^i.
using SettingIndex = std::uint64_t;
using SettingVector = std::vector<int>;

SettingIndex encode_settings(std::span<const int> settings, int setting_count);
SettingVector decode_settings(SettingIndex index, int regions, int setting_count);

inline int outcome_bit(OutcomeMask x, int region) { return static_cast<int>((x >> region) & 1U); }

// A configuration names one setting of one region; its flat index is
// gamma = setting + region * K.
struct Configuration {
  int region = 0;
  int setting = 0;

  int gamma(int setting_count) const { return setting + region * setting_count; }
  static Configuration from_gamma(int gamma, int setting_count) {
    return {gamma / setting_count, gamma % setting_count};
  }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Conditional probabilities P(x | u) of a system of n binary regions sharing
// K measurement settings. Every setting vector carries a normalized
// distribution over the 2^n outcome vectors; construction validates this.
class ProbabilitySystem {
 public:
  using Generator = std::function<Scalar(OutcomeMask, std::span<const int>)>;

  // `table[u * 2^n + x]`; throws Error on arity, sign or normalization problems.
  ProbabilitySystem(int regions, int setting_count, std::vector<std::string> labels, Backend backend,
                    std::vector<Scalar> table);

  static ProbabilitySystem from_generator(int regions, int setting_count, std::vector<std::string> labels,
                                          Backend backend, const Generator& probability);

  int regions() const { return regions_; }
  int setting_count() const { return setting_count_; }
  Backend backend() const { return backend_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int configuration_count() const { return regions_ * setting_count_; }
  std::uint32_t outcome_count() const { return 1U << regions_; }
  SettingIndex setting_vector_count() const { return setting_vectors_; }

  const Scalar& at(OutcomeMask x, SettingIndex u) const { return table_[u * outcome_count() + x]; }
  const Scalar& at(OutcomeMask x, std::span<const int> u) const {
    return at(x, encode_settings(u, setting_count_));
  }
  const std::vector<Scalar>& table() const { return table_; }

  // Settings given by label ("X") or by index ("0").
  int setting_from_label(std::string_view label) const;

  // Stable text key: equal keys mean equal tables.
  std::string canonical_key() const;

 private:
  int regions_;
  int setting_count_;
  SettingIndex setting_vectors_;
  std::vector<std::string> labels_;
  Backend backend_;
  std::vector<Scalar> table_;
};

// Marginal over a subset of regions; `kept` holds original region indices.
struct MarginalSystem {
  std::vector<int> kept;
  ProbabilitySystem system;
};

// Throws InconsistentMarginalError when a dropped region's setting changes the sum.
MarginalSystem marginal(const ProbabilitySystem& system, std::span<const int> kept);

// Pr(x_i = outcome | u_i = setting) for a locally consistent system.
Scalar region_probability(const ProbabilitySystem& system, int region, int setting, int outcome);

struct ConsistencyReport {
  bool consistent = true;
  int worst_region = -1;
  double worst_deviation = 0.0;
};

// Single-region drops checked at every level of the subset lattice.
ConsistencyReport check_local_consistency(const ProbabilitySystem& system);
inline bool is_locally_consistent(const ProbabilitySystem& system) {
  return check_local_consistency(system).consistent;
}

// Two regions only: equal settings always give equal outcomes.
bool is_totally_correlated(const ProbabilitySystem& system);

// P(x|u) equals the product of single-region marginals at every target.
bool is_separable(const ProbabilitySystem& system);

struct ConditioningStep {
  int region = 0;  // index in the original system
  int setting = 0;
  int outcome = 0;
  friend bool operator==(const ConditioningStep&, const ConditioningStep&) = default;
};

// Residual system after fixing one region's setting and outcome. Region
// `region` is removed; the remaining regions keep their relative order.
ProbabilitySystem condition(const ProbabilitySystem& system, int region, int setting, int outcome);

// A conditioned system together with the path that produced it.
struct ConditionedSystem {
  std::vector<ConditioningStep> path;
  std::vector<int> remaining;  // original indices of the residual regions
  ProbabilitySystem system;

  static ConditionedSystem root(const ProbabilitySystem& system);
  // `region` is an original index.
  ConditionedSystem then(int region, int setting, int outcome) const;
  std::string describe() const;
};

}  // namespace gaugesim
