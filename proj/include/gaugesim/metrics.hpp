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

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaugesim/system.hpp"

namespace gaugesim {

// Entropies are in bits. Every function taking a full setting vector reads the
// marginal it needs from that column, which is well defined for locally
// consistent systems.

inline constexpr double kEntanglementTolerance = 1e-9;
inline constexpr int kMaxAtomRegions = 12;

// Two regions: P(10) + P(01) at settings (setting0, setting1).
double hamming_distance(const ProbabilitySystem& system, int setting0, int setting1);

// d(k0,k1) + d(k1,k2) - d(k0,k2); negative values break the triangle inequality.
double bell_triangle_slack(const ProbabilitySystem& system, int k0, int k1, int k2);

// Uniform: s_i = 2 x_i - 1 for both regions. Mixed: region 1 uses 1 - 2 x_1.
enum class SpinConvention { Uniform, Mixed };

// E[s0 s1] at settings (a, b).
double correlation(const ProbabilitySystem& system, int a, int b, SpinConvention convention);

struct ChshTuple {
  int a = 0;        // region 0, first setting
  int a_prime = 0;  // region 0, second setting
  int b = 0;        // region 1, first setting
  int b_prime = 0;  // region 1, second setting
};

// E(A,B) + E(A',B) + E(A,B') - E(A',B'), before the absolute value.
double chsh_signed(const ProbabilitySystem& system, const ChshTuple& tuple, SpinConvention convention);
inline double chsh(const ProbabilitySystem& system, const ChshTuple& tuple, SpinConvention convention) {
  const double s = chsh_signed(system, tuple, convention);
  return s < 0 ? -s : s;
}

struct ChshOptimum {
  double value = 0.0;
  ChshTuple tuple;
};

// Largest |CHSH| over all tuples with A != A' and B != B'. Needs K >= 2.
ChshOptimum chsh_max(const ProbabilitySystem& system, SpinConvention convention = SpinConvention::Uniform);

// One region: sum of (2 Pr(0|k) - 1)^2 over the three settings is at most 1.
bool bloch_compatible(const ProbabilitySystem& system, const std::array<int, 3>& settings);

double shannon_entropy(std::span<const double> distribution);

// Joint entropy of the regions in `regions_mask` at setting vector `settings`.
double measurement_entropy(const ProbabilitySystem& system, std::uint32_t regions_mask,
                           std::span<const int> settings);

// Mutual information of regions i and j.
double pair_mutual_information(const ProbabilitySystem& system, int i, int j, std::span<const int> settings);

// Two regions: mutual information at settings (setting0, setting1).
double s2(const ProbabilitySystem& system, int setting0, int setting1);
// K x K matrix of s2 values, row = region 0 setting.
std::vector<std::vector<double>> s2_matrix(const ProbabilitySystem& system);

// Atom measures indexed by region mask (index 0 unused). Atom m is the part
// of the diagram inside exactly the regions of m. Throws RangeError above
// kMaxAtomRegions.
std::vector<double> atom_measures(const ProbabilitySystem& system, std::span<const int> settings);

// Multivariate mutual information of the regions in `regions_mask`, as the
// alternating sum of subset entropies.
double multivariate_information(const ProbabilitySystem& system, std::uint32_t regions_mask,
                                std::span<const int> settings);

// Sum of single-region entropies minus the joint entropy.
double total_entanglement(const ProbabilitySystem& system, std::span<const int> settings);

struct EntanglementScheme {
  // counts[m] = number of m-region subsets with non-zero m-variate information
  // for some setting vector; entries 0 and 1 are unused.
  std::vector<int> counts;
  int degree = 1;  // largest m with counts[m] > 0, or 1 if none
  bool maximally_entangled = false;
  double max_total_entanglement = 0.0;
};

EntanglementScheme entanglement_scheme(const ProbabilitySystem& system);

enum class Classification { Separable, EntangledQuantumCompatible, SuperQuantumDetected };

std::string_view classification_name(Classification c);

struct ClassificationResult {
  Classification kind = Classification::Separable;
  // For super-quantum systems: the conditioned two-region branch and its CHSH optimum.
  std::optional<ConditionedSystem> witness;
  std::optional<ChshOptimum> witness_chsh;
  double max_branch_chsh = 0.0;
};

// Walks every conditioned two-region branch reachable by collapsing the other
// regions; a branch above 2 sqrt(2) marks the system super-quantum.
ClassificationResult classify(const ProbabilitySystem& system);

// All two-region branches: every (n-2)-subset of regions, every setting and
// every outcome with non-zero probability.
std::vector<ConditionedSystem> two_region_branches(const ProbabilitySystem& system);

struct TsirelsonCrossing {
  double parameter = 0.0;
  double max_branch_chsh = 0.0;
  int iterations = 0;
};

// Bisects a one-parameter family on [lo, hi] for the point where the largest
// conditioned-branch CHSH value meets 2 sqrt(2). Returns nullopt when both
// ends lie on the same side.
std::optional<TsirelsonCrossing> bisect_tsirelson_crossing(
    const std::function<ProbabilitySystem(double)>& family, double lo, double hi, double tolerance = 1e-9);

}  // namespace gaugesim
