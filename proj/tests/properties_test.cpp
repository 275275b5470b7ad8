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


// Randomized invariants. Every generator is seeded, so failures reproduce.

#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "oracle.hpp"

namespace gaugesim {
namespace {

constexpr int kInstances = 1000;

struct Shape {
  int regions;
  int settings;
};

Shape random_shape(std::mt19937_64& rng, int max_bits) {
  for (;;) {
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    if (n * k <= max_bits) return {n, k};
  }
}

// Both regions follow the same strategy word, so equal settings agree.
ProbabilitySystem random_totally_correlated(std::mt19937_64& rng, int k, int strategies) {
  const auto weights = oracle::random_simplex(rng, strategies);
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << k) - 1);
  std::vector<std::uint64_t> words(static_cast<std::size_t>(strategies));
  for (auto& w : words) w = pick(rng);
  return ProbabilitySystem::from_generator(2, k, {}, Backend::Exact, [&](OutcomeMask x, std::span<const int> u) {
    mpq_class v = 0;
    for (int c = 0; c < strategies; ++c) {
      if (oracle::bit(words[c], u[0]) == oracle::bit(x, 0) && oracle::bit(words[c], u[1]) == oracle::bit(x, 1)) {
        v += weights[c];
      }
    }
    return Scalar(v);
  });
}

ProbabilitySystem swap_regions(const ProbabilitySystem& s) {
  return ProbabilitySystem::from_generator(2, s.setting_count(), s.labels(), s.backend(),
                                           [&](OutcomeMask x, std::span<const int> u) {
                                             const OutcomeMask swapped = ((x & 1U) << 1) | (x >> 1);
                                             const int v[2] = {u[1], u[0]};
                                             return s.at(swapped, v);
                                           });
}

TEST(Property, SolvedGaugesReconstructExactly) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < kInstances; ++t) {
    const Shape shape = random_shape(rng, 6);
    const ProbabilitySystem s = oracle::random_local_mixture(rng, shape.regions, shape.settings, 3);
    const GaugeSetSolution solved = solve_all_gauges(s);
    ASSERT_TRUE(solved.feasible()) << "trial " << t;
    EXPECT_TRUE(oracle::check_gauges(s, *solved.gauges).exact) << "trial " << t;
  }
}

TEST(Property, SupportNeverExceedsRank) {
  std::mt19937_64 rng(102);
  for (int t = 0; t < kInstances; ++t) {
    const Shape shape = random_shape(rng, 6);
    const ProbabilitySystem s = oracle::random_local_mixture(rng, shape.regions, shape.settings, 4);
    const int gamma = std::uniform_int_distribution<int>(0, s.configuration_count() - 1)(rng);
    const GaugeSolution g = solve_gauge(s, gamma);
    ASSERT_EQ(g.status, SolveStatus::Feasible);
    std::size_t nonzero = 0;
    for (const Scalar& w : g.gauge->weights()) nonzero += w.is_zero() ? 0 : 1;
    EXPECT_LE(nonzero, gauge_system_rank(s, gamma)) << "trial " << t;
  }
}

TEST(Property, EntropyIsAPolymatroid) {
  std::mt19937_64 rng(103);
  for (int t = 0; t < kInstances; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 3)(rng);
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    const ProbabilitySystem s = oracle::random_local_mixture(rng, n, k, 4);
    const SettingVector u = decode_settings(
        std::uniform_int_distribution<SettingIndex>(0, s.setting_vector_count() - 1)(rng), n, k);
    const std::uint32_t masks = s.outcome_count();
    for (std::uint32_t a = 0; a < masks; ++a) {
      for (std::uint32_t b = 0; b < masks; ++b) {
        const double ha = measurement_entropy(s, a, u), hb = measurement_entropy(s, b, u);
        if ((a & b) == a) EXPECT_LE(ha, hb + 1e-12);
        EXPECT_GE(ha + hb + 1e-12, measurement_entropy(s, a | b, u) + measurement_entropy(s, a & b, u));
      }
    }
  }
}

TEST(Property, ProductsRespectChshAndMixedConvention) {
  std::mt19937_64 rng(104);
  for (int t = 0; t < kInstances; ++t) {
    const int k = std::uniform_int_distribution<int>(2, 3)(rng);
    const ProbabilitySystem s = oracle::random_product(rng, 2, k);
    EXPECT_LE(chsh_max(s).value, 2.0 + 1e-12);
    std::uniform_int_distribution<int> pick(0, k - 1);
    const ChshTuple tuple{pick(rng), pick(rng), pick(rng), pick(rng)};
    EXPECT_NEAR(chsh_signed(s, tuple, SpinConvention::Mixed), -chsh_signed(s, tuple, SpinConvention::Uniform),
                1e-12);
  }
}

TEST(Property, LocalMixturesRespectChsh) {
  std::mt19937_64 rng(105);
  for (int t = 0; t < kInstances; ++t) {
    const ProbabilitySystem s = oracle::random_local_mixture(rng, 2, 3, 5);
    EXPECT_LE(chsh_max(s).value, 2.0 + 1e-12);
    EXPECT_NEAR(chsh_max(s).value, oracle::chsh_max(s), 1e-12);
  }
}

TEST(Property, TotallyCorrelatedLocalSystemsRespectTriangle) {
  std::mt19937_64 rng(106);
  for (int t = 0; t < kInstances; ++t) {
    const ProbabilitySystem s = random_totally_correlated(rng, 3, 4);
    ASSERT_TRUE(is_totally_correlated(s));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) EXPECT_GE(bell_triangle_slack(s, a, b, c), -1e-12);
      }
    }
  }
}

TEST(Property, AtomsReconstructEntropies) {
  std::mt19937_64 rng(107);
  for (int t = 0; t < kInstances; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const ProbabilitySystem s = oracle::random_local_mixture(rng, n, 2, 4);
    const SettingVector u = decode_settings(
        std::uniform_int_distribution<SettingIndex>(0, s.setting_vector_count() - 1)(rng), n, 2);
    const auto mu = atom_measures(s, u);
    for (std::uint32_t alpha = 1; alpha < s.outcome_count(); ++alpha) {
      double sum = 0;
      for (std::uint32_t atom = 1; atom < s.outcome_count(); ++atom) {
        if ((atom & alpha) != 0) sum += mu[atom];
      }
      EXPECT_NEAR(sum, oracle::joint_entropy(s, alpha, u), 1e-9);
    }
  }
}

TEST(Property, PairInformationIdentities) {
  std::mt19937_64 rng(108);
  for (int t = 0; t < kInstances; ++t) {
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    const ProbabilitySystem s = t % 2 == 0 ? random_totally_correlated(rng, k, 3)
                                           : oracle::random_local_mixture(rng, 2, k, 3);
    const ProbabilitySystem swapped = swap_regions(s);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const std::vector<int> u{a, b};
        const double value = s2(s, a, b);
        EXPECT_NEAR(value, s2(swapped, b, a), 1e-12);
        EXPECT_GE(value, -1e-12);
        EXPECT_LE(value, std::min(measurement_entropy(s, 1, u), measurement_entropy(s, 2, u)) + 1e-12);
        EXPECT_NEAR(total_entanglement(s, u), value, 1e-12);
        EXPECT_NEAR(value, oracle::total_correlation(s, u), 1e-9);
      }
    }
  }
}

// P(x|u) = product of leading-region marginals times the residual gauge sum.
void expect_product_law(const ProbabilitySystem& system) {
  const MinStepsResult found = find_min_steps(system);
  ASSERT_GE(found.steps, 1);
  const int n = system.regions(), k = system.setting_count();
  for (SettingIndex ui = 0; ui < system.setting_vector_count(); ++ui) {
    const SettingVector u = decode_settings(ui, n, k);
    for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
      ConditionedSystem branch = ConditionedSystem::root(system);
      Scalar product(system.backend() == Backend::Exact ? Scalar(1) : Scalar(1.0));
      bool reachable = true;
      for (int region : found.plan.leading_regions) {
        const auto pos = std::find(branch.remaining.begin(), branch.remaining.end(), region) - branch.remaining.begin();
        const Scalar factor = region_probability(branch.system, static_cast<int>(pos), u[region], outcome_bit(x, region));
        if (factor.is_zero()) {
          reachable = false;
          break;
        }
        product *= factor;
        branch = branch.then(region, u[region], outcome_bit(x, region));
      }
      if (!reachable) {
        EXPECT_TRUE(system.at(x, u).is_zero());
        continue;
      }
      const auto cert = std::find_if(found.branches.begin(), found.branches.end(),
                                     [&](const BranchCertificate& c) { return c.branch.path == branch.path; });
      ASSERT_NE(cert, found.branches.end());
      std::vector<int> residual_u;
      OutcomeMask residual_x = 0;
      for (std::size_t i = 0; i < branch.remaining.size(); ++i) {
        residual_u.push_back(u[branch.remaining[i]]);
        residual_x |= static_cast<OutcomeMask>(outcome_bit(x, branch.remaining[i])) << i;
      }
      for (std::size_t i = 0; i < residual_u.size(); ++i) {
        const int gamma = residual_u[i] + static_cast<int>(i) * k;
        const Scalar value = product * oracle::reconstruct(cert->gauges.at(gamma), residual_x, residual_u, k);
        if (system.backend() == Backend::Exact) {
          EXPECT_EQ(value.exact(), system.at(x, u).exact()) << "u=" << ui << " x=" << x;
        } else {
          EXPECT_NEAR(value.to_double(), system.at(x, u).to_double(), 1e-9);
        }
      }
    }
  }
}

TEST(Property, ProductLawOnCatalog) {
  for (const CatalogEntry& entry : catalog_entries()) {
    SCOPED_TRACE(entry.name);
    expect_product_law(entry.build({}));
  }
  for (const char* eps : {"0", "1/64", "1/16", "3/16", "1/4"}) {
    SCOPED_TRACE(eps);
    expect_product_law(build_catalog_system("quasi-super-ghz", {{"eps", eps}}));
  }
}

TEST(Property, ProductLawOnRandomMixtures) {
  std::mt19937_64 rng(109);
  for (int t = 0; t < kInstances; ++t) {
    const Shape shape = random_shape(rng, 6);
    const ProbabilitySystem s = oracle::random_local_mixture(rng, shape.regions, shape.settings, 3);
    expect_product_law(s);
  }
}

TEST(Property, ParallelSimulationMatchesSerial) {
  std::mt19937_64 rng(110);
  const ProbabilitySystem systems[] = {pr_box(), w_xy(), super_ghz(), singlet()};
  for (int t = 0; t < kInstances; ++t) {
    const ProbabilitySystem& s = systems[t % 4];
    const MinStepsResult found = find_min_steps(s);
    const SettingVector u = decode_settings(
        std::uniform_int_distribution<SettingIndex>(0, s.setting_vector_count() - 1)(rng), s.regions(),
        s.setting_count());
    const PreparedCollapse prepared(s, found.plan, u);
    SimulationOptions options;
    options.runs = 64;
    options.seed = rng();
    EXPECT_EQ(simulate(s, prepared, options).counts, simulate_serial(s, prepared, options).counts);
  }
}

TEST(Property, EmpiricalMergeIsAssociativeAndCommutative) {
  std::mt19937_64 rng(111);
  for (int t = 0; t < kInstances; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    std::uniform_int_distribution<OutcomeMask> outcome(0, (1U << n) - 1);
    std::uniform_int_distribution<int> size(0, 20);
    EmpiricalTable a(n), b(n), c(n);
    for (EmpiricalTable* table : {&a, &b, &c}) {
      for (int i = size(rng); i > 0; --i) table->add(outcome(rng));
    }
    EmpiricalTable left = a, right = b, ab = a, ba = b;
    left.merge(b).merge(c);
    right.merge(c);
    EmpiricalTable a_then = a;
    a_then.merge(right);
    EXPECT_EQ(left, a_then);
    EXPECT_EQ(ab.merge(b), ba.merge(a));
    EXPECT_EQ(left.total(), a.total() + b.total() + c.total());
  }
}

TEST(Property, ConvexMixturesStayLocallyConsistent) {
  std::mt19937_64 rng(112);
  for (int t = 0; t < kInstances; ++t) {
    const ProbabilitySystem a = oracle::random_local_mixture(rng, 3, 2, 2);
    const ProbabilitySystem mixed = oracle::mix(a, t % 2 == 0 ? ghz_xy() : super_ghz(), oracle::random_rational(rng));
    EXPECT_TRUE(is_locally_consistent(mixed));
  }
}

}  // namespace
}  // namespace gaugesim
