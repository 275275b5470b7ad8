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

#include "gaugesim/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>

#include "gaugesim/error.hpp"

namespace gaugesim {

namespace {

void require_pair(const ProbabilitySystem& system) {
  if (system.regions() != 2) throw Error(ErrorCode::WrongArity, "expected a two-region system");
}

// Joint entropies of every region subset, indexed by mask.
std::vector<double> subset_entropies(const ProbabilitySystem& system, std::span<const int> settings) {
  const std::uint32_t subsets = system.outcome_count();
  std::vector<double> h(subsets, 0.0);
  std::vector<double> column;
  for (OutcomeMask x = 0; x < subsets; ++x) column.push_back(system.at(x, settings).to_double());
  std::vector<double> grouped(subsets);
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    std::fill(grouped.begin(), grouped.end(), 0.0);
    for (OutcomeMask x = 0; x < subsets; ++x) grouped[x & mask] += column[x];
    h[mask] = shannon_entropy(grouped);
  }
  return h;
}

}  // namespace

double hamming_distance(const ProbabilitySystem& system, int setting0, int setting1) {
  require_pair(system);
  const int u[2] = {setting0, setting1};
  return system.at(0b01, u).to_double() + system.at(0b10, u).to_double();
}

double bell_triangle_slack(const ProbabilitySystem& system, int k0, int k1, int k2) {
  return hamming_distance(system, k0, k1) + hamming_distance(system, k1, k2) - hamming_distance(system, k0, k2);
}

double correlation(const ProbabilitySystem& system, int a, int b, SpinConvention convention) {
  require_pair(system);
  const int u[2] = {a, b};
  double e = 0.0;
  for (OutcomeMask x = 0; x < 4; ++x) {
    const int s0 = 2 * outcome_bit(x, 0) - 1;
    const int s1 = convention == SpinConvention::Uniform ? 2 * outcome_bit(x, 1) - 1 : 1 - 2 * outcome_bit(x, 1);
    e += s0 * s1 * system.at(x, u).to_double();
  }
  return e;
}

double chsh_signed(const ProbabilitySystem& system, const ChshTuple& t, SpinConvention convention) {
  return correlation(system, t.a, t.b, convention) + correlation(system, t.a_prime, t.b, convention) +
         correlation(system, t.a, t.b_prime, convention) - correlation(system, t.a_prime, t.b_prime, convention);
}

ChshOptimum chsh_max(const ProbabilitySystem& system, SpinConvention convention) {
  require_pair(system);
  const int k = system.setting_count();
  if (k < 2) throw Error(ErrorCode::RangeError, "CHSH needs at least two settings");
  // Correlations are cached; the search is over K^4 tuples.
  std::vector<double> e(static_cast<std::size_t>(k * k));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) e[a * k + b] = correlation(system, a, b, convention);
  }
  ChshOptimum best{-1.0, {}};
  for (int a = 0; a < k; ++a) {
    for (int ap = 0; ap < k; ++ap) {
      if (ap == a) continue;
      for (int b = 0; b < k; ++b) {
        for (int bp = 0; bp < k; ++bp) {
          if (bp == b) continue;
          const double v = std::fabs(e[a * k + b] + e[ap * k + b] + e[a * k + bp] - e[ap * k + bp]);
          if (v > best.value) best = {v, {a, ap, b, bp}};
        }
      }
    }
  }
  return best;
}

bool bloch_compatible(const ProbabilitySystem& system, const std::array<int, 3>& settings) {
  if (system.regions() != 1) throw Error(ErrorCode::WrongArity, "expected a one-region system");
  double sum = 0.0;
  for (int s : settings) {
    const int u[1] = {s};
    const double r = 2.0 * system.at(0, u).to_double() - 1.0;
    sum += r * r;
  }
  return sum <= 1.0 + kNumericTolerance;
}

double shannon_entropy(std::span<const double> distribution) {
  double h = 0.0;
  for (double p : distribution) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double measurement_entropy(const ProbabilitySystem& system, std::uint32_t regions_mask,
                           std::span<const int> settings) {
  if (regions_mask == 0) return 0.0;
  if (regions_mask >= system.outcome_count()) throw Error(ErrorCode::RangeError, "region mask out of range");
  std::vector<double> grouped(system.outcome_count(), 0.0);
  for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
    grouped[x & regions_mask] += system.at(x, settings).to_double();
  }
  return shannon_entropy(grouped);
}

double pair_mutual_information(const ProbabilitySystem& system, int i, int j, std::span<const int> settings) {
  const std::uint32_t a = 1U << i, b = 1U << j;
  return measurement_entropy(system, a, settings) + measurement_entropy(system, b, settings) -
         measurement_entropy(system, a | b, settings);
}

double s2(const ProbabilitySystem& system, int setting0, int setting1) {
  require_pair(system);
  const int u[2] = {setting0, setting1};
  return pair_mutual_information(system, 0, 1, u);
}

std::vector<std::vector<double>> s2_matrix(const ProbabilitySystem& system) {
  require_pair(system);
  const int k = system.setting_count();
  std::vector<std::vector<double>> m(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) m[a][b] = s2(system, a, b);
  }
  return m;
}

std::vector<double> atom_measures(const ProbabilitySystem& system, std::span<const int> settings) {
  if (system.regions() > kMaxAtomRegions) {
    throw Error(ErrorCode::RangeError, "atom decomposition limited to " + std::to_string(kMaxAtomRegions) +
                                           " regions");
  }
  const std::uint32_t full = system.outcome_count() - 1U;
  const std::vector<double> h = subset_entropies(system, settings);
  // Mass of the atoms lying inside `beta`: H(all) - H(complement of beta).
  std::vector<double> mu(full + 1U);
  for (std::uint32_t beta = 0; beta <= full; ++beta) mu[beta] = h[full] - h[full & ~beta];
  // Subset Moebius inversion.
  for (int i = 0; i < system.regions(); ++i) {
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
      if (mask & (1U << i)) mu[mask] -= mu[mask ^ (1U << i)];
    }
  }
  mu[0] = 0.0;
  return mu;
}

double multivariate_information(const ProbabilitySystem& system, std::uint32_t regions_mask,
                                std::span<const int> settings) {
  double s = 0.0;
  // Every non-empty subset alpha of the mask, signed by its size.
  for (std::uint32_t alpha = regions_mask; alpha != 0; alpha = (alpha - 1) & regions_mask) {
    const double h = measurement_entropy(system, alpha, settings);
    s += (std::popcount(alpha) % 2 == 1) ? h : -h;
  }
  return s;
}

double total_entanglement(const ProbabilitySystem& system, std::span<const int> settings) {
  double sum = 0.0;
  for (int i = 0; i < system.regions(); ++i) sum += measurement_entropy(system, 1U << i, settings);
  return sum - measurement_entropy(system, system.outcome_count() - 1U, settings);
}

EntanglementScheme entanglement_scheme(const ProbabilitySystem& system) {
  const int n = system.regions();
  EntanglementScheme scheme;
  scheme.counts.assign(static_cast<std::size_t>(n + 1), 0);
  std::vector<bool> nonzero(system.outcome_count(), false);
  for (SettingIndex u = 0; u < system.setting_vector_count(); ++u) {
    const SettingVector uv = decode_settings(u, n, system.setting_count());
    scheme.max_total_entanglement = std::max(scheme.max_total_entanglement, total_entanglement(system, uv));
    for (std::uint32_t beta = 1; beta < system.outcome_count(); ++beta) {
      if (nonzero[beta] || std::popcount(beta) < 2) continue;
      if (std::fabs(multivariate_information(system, beta, uv)) > kEntanglementTolerance) nonzero[beta] = true;
    }
  }
  for (std::uint32_t beta = 1; beta < system.outcome_count(); ++beta) {
    if (nonzero[beta]) ++scheme.counts[std::popcount(beta)];
  }
  for (int m = 2; m <= n; ++m) {
    if (scheme.counts[m] > 0) scheme.degree = m;
  }
  scheme.maximally_entangled = scheme.max_total_entanglement >= n - 1 - kEntanglementTolerance;
  return scheme;
}

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::Separable: return "separable";
    case Classification::EntangledQuantumCompatible: return "entangled-quantum-compatible";
    case Classification::SuperQuantumDetected: return "super-quantum-detected";
  }
  return "unknown";
}

std::vector<ConditionedSystem> two_region_branches(const ProbabilitySystem& system) {
  const int n = system.regions();
  if (n < 2) throw Error(ErrorCode::WrongArity, "need at least two regions");
  std::vector<ConditionedSystem> out;
  const std::function<void(const ConditionedSystem&, std::uint32_t)> expand = [&](const ConditionedSystem& branch,
                                                                                 std::uint32_t pending) {
    if (pending == 0) {
      out.push_back(branch);
      return;
    }
    const int region = std::countr_zero(pending);
    const int position = static_cast<int>(std::find(branch.remaining.begin(), branch.remaining.end(), region) -
                                          branch.remaining.begin());
    for (int setting = 0; setting < branch.system.setting_count(); ++setting) {
      for (int outcome = 0; outcome < 2; ++outcome) {
        if (region_probability(branch.system, position, setting, outcome).is_zero()) continue;
        expand(branch.then(region, setting, outcome), pending & (pending - 1));
      }
    }
  };
  const std::uint32_t all = system.outcome_count() - 1U;
  for (std::uint32_t kept = 0; kept <= all; ++kept) {
    if (std::popcount(kept) == 2) expand(ConditionedSystem::root(system), all & ~kept);
  }
  return out;
}

ClassificationResult classify(const ProbabilitySystem& system) {
  ClassificationResult result;
  if (is_separable(system)) return result;
  result.kind = Classification::EntangledQuantumCompatible;
  if (system.regions() < 2 || system.setting_count() < 2) return result;
  const double tsirelson = 2.0 * std::numbers::sqrt2;
  for (const ConditionedSystem& branch : two_region_branches(system)) {
    const ChshOptimum best = chsh_max(branch.system);
    if (best.value > result.max_branch_chsh) {
      result.max_branch_chsh = best.value;
      if (best.value > tsirelson + kNumericTolerance) {
        result.kind = Classification::SuperQuantumDetected;
        result.witness = branch;
        result.witness_chsh = best;
      }
    }
  }
  return result;
}

std::optional<TsirelsonCrossing> bisect_tsirelson_crossing(
    const std::function<ProbabilitySystem(double)>& family, double lo, double hi, double tolerance) {
  const double tsirelson = 2.0 * std::numbers::sqrt2;
  const auto excess = [&](double p) { return classify(family(p)).max_branch_chsh - tsirelson; };
  const bool lo_above = excess(lo) > 0;
  if (lo_above == (excess(hi) > 0)) return std::nullopt;
  TsirelsonCrossing result;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    ((excess(mid) > 0) == lo_above ? lo : hi) = mid;
    ++result.iterations;
  }
  result.parameter = 0.5 * (lo + hi);
  result.max_branch_chsh = classify(family(result.parameter)).max_branch_chsh;
  return result;
}

}  // namespace gaugesim
