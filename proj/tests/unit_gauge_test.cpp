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


#include <gtest/gtest.h>

#include <bit>
#include <numbers>
#include <random>

#include "oracle.hpp"

namespace gaugesim {
namespace {

using std::numbers::pi;

Scalar q(long num, long den) { return Scalar::ratio(num, den); }

// Reference three-setting gauge values at angles (0, pi/5, pi/2), rows for
// words 0, 1, 3, 4, 6, 7 and one column per setting.
GaugeSet three_setting_fixture() {
  const std::vector<IgnitionIndex> words{0, 1, 3, 4, 6, 7};
  const double table[3][6] = {{0.250, 0.048, 0.202, 0.202, 0.048, 0.250},
                              {0.349, 0.048, 0.103, 0.103, 0.048, 0.349},
                              {0.250, 0.147, 0.103, 0.103, 0.147, 0.250}};
  std::vector<GaugeDistribution> gauges;
  for (int gamma = 0; gamma < 6; ++gamma) {
    std::vector<IgnitionIndex> support;
    std::vector<Scalar> weights;
    for (int w = 0; w < 6; ++w) {
      support.push_back(lift_bipartite(words[w], 3));
      weights.emplace_back(table[gamma % 3][w]);
    }
    gauges.emplace_back(gamma, support, weights);
  }
  return GaugeSet(2, 3, std::move(gauges));
}

ProbabilitySystem three_setting_epr() {
  const double angles[] = {0.0, pi / 5, pi / 2};
  return epr_b(angles);
}

TEST(Projection, Bits) {
  EXPECT_EQ(projection(0, 3), 1);
  EXPECT_EQ(projection(2, 3), 0);
  const int expected[] = {1, 1, 1, 0, 0, 0};
  for (int gamma = 0; gamma < 6; ++gamma) EXPECT_EQ(projection(gamma, 7), expected[gamma]);
}

TEST(Projection, OutcomeOfIndex) {
  // n = 2, K = 3: region 1 reads bits 3..5.
  const int u[] = {2, 0};
  EXPECT_EQ(project_outcome(0b001100, u, 3), 0b11u);
  EXPECT_EQ(project_outcome(0b000100, u, 3), 0b01u);
}

TEST(TargetIndexSet, OneRegionHalfSpace) {
  const WorkingSet full = WorkingSet::full(1, 2);
  const int u[] = {0};
  const auto set = target_index_set(full, 0, u);
  EXPECT_EQ(set, (std::vector<IgnitionIndex>{0, 2}));
}

TEST(TargetIndexSet, TwoRegionsMatchesEnumeration) {
  const WorkingSet full = WorkingSet::full(2, 2);
  const int u[] = {0, 0};
  const auto set = target_index_set(full, 0b10, u);
  std::vector<IgnitionIndex> expected;
  for (IgnitionIndex j = 0; j < 16; ++j) {
    if (oracle::bit(j, 0) == 0 && oracle::bit(j, 2) == 1) expected.push_back(j);
  }
  EXPECT_EQ(set, expected);
  EXPECT_EQ(set.size(), 4u);
}

TEST(TargetIndexSet, BellTypeWordThree) {
  const WorkingSet full = WorkingSet::full(2, 2);
  const int u[] = {0, 1};
  const auto set = target_index_set(full, 0b11, u);
  EXPECT_NE(std::find(set.begin(), set.end(), lift_bipartite(3, 2)), set.end());
}

TEST(TargetIndexSet, PartitionsTheSpace) {
  const WorkingSet full = WorkingSet::full(2, 3);
  for (int gamma = 0; gamma < 6; ++gamma) {
    const Configuration c = Configuration::from_gamma(gamma, 3);
    int u[2] = {0, 0};
    u[c.region] = c.setting;
    std::size_t total = 0;
    for (OutcomeMask x = 0; x < 4; ++x) total += target_index_set(full, x, u).size();
    EXPECT_EQ(total, 64u);
  }
}

TEST(DoublePlateau, ReferenceLists) {
  EXPECT_EQ(double_plateau(3), (std::vector<IgnitionIndex>{3, 7, 6, 4, 0, 1}));
  EXPECT_EQ(double_plateau(4), (std::vector<IgnitionIndex>{3, 7, 15, 14, 12, 8, 0, 1}));
  EXPECT_EQ(double_plateau(4)[0], 3u);
  EXPECT_EQ(double_plateau(4)[6], 0u);
}

TEST(DoublePlateau, AtMostOneJump) {
  for (int k = 2; k <= 10; ++k) {
    const auto d = double_plateau(k);
    ASSERT_EQ(d.size(), static_cast<std::size_t>(2 * k));
    std::vector<IgnitionIndex> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    for (IgnitionIndex j : d) {
      int jumps = 0;
      for (int b = 1; b < k; ++b) jumps += oracle::bit(j, b) != oracle::bit(j, b - 1);
      EXPECT_LE(jumps, 1) << "K=" << k << " j=" << j;
    }
    // Consecutive entries differ in one bit (cyclically).
    for (int r = 0; r < 2 * k; ++r) EXPECT_EQ(std::popcount(d[r] ^ d[(r + 1) % (2 * k)]), 1);
  }
}

TEST(WorkingSet, SortsAndValidates) {
  const WorkingSet w(1, 2, {3, 0, 2});
  EXPECT_EQ(w.indices(), (std::vector<IgnitionIndex>{0, 2, 3}));
  EXPECT_EQ(WorkingSet(1, 2, {0, 0}).size(), 1u);
  EXPECT_THROW(WorkingSet(1, 2, {4}), Error);
  EXPECT_THROW(WorkingSet::full(5, 5), Error);
  EXPECT_EQ(WorkingSet::full(2, 2).size(), 16u);
}

TEST(GaugeDistribution, WeightsAndSampling) {
  const GaugeDistribution g(0, {5, 1}, {q(3, 4), q(1, 4)});
  EXPECT_EQ(g.support(), (std::vector<IgnitionIndex>{1, 5}));
  EXPECT_EQ(g.weight(5).exact(), Rational(3, 4));
  EXPECT_EQ(g.weight(2).exact(), 0);
  EXPECT_EQ(g.total().exact(), 1);
  EXPECT_EQ(g.sample(0.0), 1u);
  EXPECT_EQ(g.sample(0.2499), 1u);
  EXPECT_EQ(g.sample(0.25), 5u);
  EXPECT_EQ(g.sample(0.999999), 5u);
  EXPECT_THROW(GaugeDistribution(0, {1, 1}, {q(1, 2), q(1, 2)}), Error);
  EXPECT_THROW(GaugeDistribution(0, {1}, {q(1, 2), q(1, 2)}), Error);
}

TEST(SolveGauge, OneRegionOneSetting) {
  const ProbabilitySystem s(1, 1, {}, Backend::Exact, {q(2, 7), q(5, 7)});
  const GaugeSolution sol = solve_gauge(s, 0);
  ASSERT_EQ(sol.status, SolveStatus::Feasible);
  EXPECT_EQ(sol.gauge->support(), (std::vector<IgnitionIndex>{0, 1}));
  EXPECT_EQ(sol.gauge->weights()[0].exact(), Rational(2, 7));
  EXPECT_EQ(sol.gauge->weights()[1].exact(), Rational(5, 7));
}

TEST(SolveGauge, ThreeSettingEprOnDoublePlateau) {
  const ProbabilitySystem s = three_setting_epr();
  const WorkingSet support = double_plateau_support(3);
  const GaugeSolution sol = solve_gauge(s, 0, &support);
  ASSERT_EQ(sol.status, SolveStatus::Feasible);
  const double expected[] = {0.250, 0.048, 0.202, 0.202, 0.048, 0.250};
  const IgnitionIndex words[] = {0, 1, 3, 4, 6, 7};
  for (int w = 0; w < 6; ++w) {
    EXPECT_NEAR(sol.gauge->weight(lift_bipartite(words[w], 3)).to_double(), expected[w], 5e-4);
  }
}

TEST(SolveGauge, SuperGhzIsInfeasibleEverywhere) {
  const ProbabilitySystem s = super_ghz();
  for (int gamma = 0; gamma < 6; ++gamma) EXPECT_EQ(solve_gauge(s, gamma).status, SolveStatus::Infeasible);
}

TEST(SolveGauge, SupportTooSmall) {
  const ProbabilitySystem s = pr_box();
  const WorkingSet empty(2, 2, {});
  EXPECT_EQ(solve_gauge(s, 0, &empty).status, SolveStatus::SupportTooSmall);
  const WorkingSet zeros(2, 2, {0});
  EXPECT_EQ(solve_gauge(s, 0, &zeros).status, SolveStatus::SupportTooSmall);
}

TEST(SolveGauge, RestrictedSupportCanBeInfeasible) {
  // Index 11 lands on a zero-probability target, so only index 0 can carry weight.
  const ProbabilitySystem s = pr_box();
  const WorkingSet support(2, 2, {0, 13, 15});
  EXPECT_EQ(solve_gauge(s, 0, &support).status, SolveStatus::Feasible);
  const WorkingSet bad(2, 2, {0, 11});
  EXPECT_NE(solve_gauge(s, 0, &bad).status, SolveStatus::Feasible);
}

TEST(SolveGauge, RejectsMismatchedSupport) {
  const WorkingSet other(2, 3, {0});
  EXPECT_THROW(solve_gauge(pr_box(), 0, &other), Error);
  EXPECT_THROW(solve_gauge(pr_box(), 4), Error);
}

TEST(SolveAllGauges, PrBoxSharedSupportMatchesReference) {
  const auto support = find_shared_support(pr_box());
  ASSERT_TRUE(support);
  EXPECT_EQ(support->indices(), (std::vector<IgnitionIndex>{0, 6, 9, 15}));
  const GaugeSetSolution sol = solve_all_gauges(pr_box(), &*support);
  ASSERT_TRUE(sol.feasible());
  const GaugeSet reference = pr_box_reference_gauges();
  for (int gamma = 0; gamma < 4; ++gamma) {
    EXPECT_EQ(sol.gauges->at(gamma).support(), reference.at(gamma).support());
    for (std::size_t e = 0; e < reference.at(gamma).support().size(); ++e) {
      EXPECT_EQ(sol.gauges->at(gamma).weights()[e].exact(), Rational(1, 2));
    }
  }
}

TEST(SolveAllGauges, PrBoxDefaultVertexIsExact) {
  const GaugeSetSolution sol = solve_all_gauges(pr_box());
  ASSERT_TRUE(sol.feasible());
  const auto check = oracle::check_gauges(pr_box(), *sol.gauges);
  EXPECT_TRUE(check.exact);
}

TEST(SolveAllGauges, SingletSharedSupportIsIdentical) {
  const auto support = find_shared_support(singlet());
  ASSERT_TRUE(support);
  const GaugeSetSolution sol = solve_all_gauges(singlet(), &*support);
  ASSERT_TRUE(sol.feasible());
  for (const auto& g : sol.gauges->gauges()) {
    EXPECT_EQ(g.support(), (std::vector<IgnitionIndex>{7, 28, 42, 49}));
    for (const auto& w : g.weights()) EXPECT_EQ(w.exact(), Rational(1, 4));
  }
}

TEST(SolveAllGauges, SeparableIsFeasible) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const ProbabilitySystem s = oracle::random_product(rng, 2, 2);
    const GaugeSetSolution sol = solve_all_gauges(s);
    ASSERT_TRUE(sol.feasible());
    EXPECT_TRUE(oracle::check_gauges(s, *sol.gauges).exact);
  }
}

TEST(SolveAllGauges, SerialAndParallelAgree) {
  for (const ProbabilitySystem& s : {w_xy(), ghz_xy(), singlet()}) {
    const auto a = solve_all_gauges(s);
    const auto b = solve_all_gauges_serial(s);
    ASSERT_TRUE(a.feasible() && b.feasible());
    for (int g = 0; g < s.configuration_count(); ++g) {
      EXPECT_EQ(a.gauges->at(g).support(), b.gauges->at(g).support());
      for (std::size_t e = 0; e < a.gauges->at(g).support().size(); ++e) {
        EXPECT_EQ(a.gauges->at(g).weights()[e].exact(), b.gauges->at(g).weights()[e].exact());
      }
    }
  }
  const auto failed = solve_all_gauges(super_ghz());
  EXPECT_FALSE(failed.feasible());
  EXPECT_EQ(failed.failed, (std::vector<int>{0, 1, 2, 3, 4, 5}));
}

TEST(VerifyConsistency, ReferenceThreeSettingTable) {
  const GaugeConsistency r = verify_consistency(three_setting_epr(), three_setting_fixture(), 1e-3);
  EXPECT_LE(r.max_deviation, 1e-3);
  EXPECT_TRUE(r.within_tolerance);
  EXPECT_FALSE(r.exact);
}

TEST(VerifyConsistency, WReferenceIsExact) {
  const GaugeConsistency r = verify_consistency(w_xy(), w_xy_reference_gauges());
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.normalized);
  EXPECT_EQ(r.max_deviation, 0.0);
  EXPECT_TRUE(oracle::check_gauges(w_xy(), w_xy_reference_gauges()).exact);
}

TEST(VerifyConsistency, PerturbedWeightIsReported) {
  const GaugeSet reference = pr_box_reference_gauges();
  std::vector<GaugeDistribution> gauges = reference.gauges();
  gauges[0] = GaugeDistribution(0, {0, 15}, {Scalar(0.51), Scalar(0.49)});
  const GaugeConsistency r = verify_consistency(pr_box(), GaugeSet(2, 2, gauges));
  EXPECT_NEAR(r.max_deviation, 0.01, 1e-12);
  EXPECT_FALSE(r.within_tolerance);
  EXPECT_FALSE(r.exact);
}

TEST(VerifyConsistency, UnnormalizedGaugeIsFlagged) {
  std::vector<GaugeDistribution> gauges = pr_box_reference_gauges().gauges();
  gauges[1] = GaugeDistribution(1, {6, 9}, {q(1, 2), q(1, 3)});
  EXPECT_FALSE(verify_consistency(pr_box(), GaugeSet(2, 2, gauges)).normalized);
}

TEST(Rank, BoundedByFormula) {
  for (const ProbabilitySystem& s : {pr_box(), singlet(), ghz_xy(), w_xy()}) {
    const int n = s.regions(), k = s.setting_count();
    const std::size_t bound = 2 * oracle::power(k + 1, n - 1);
    for (int g = 0; g < s.configuration_count(); ++g) {
      EXPECT_LE(gauge_system_rank(s, g), bound);
      const auto sol = solve_gauge(s, g);
      ASSERT_EQ(sol.status, SolveStatus::Feasible);
      EXPECT_LE(sol.gauge->support().size(), gauge_system_rank(s, g));
    }
  }
  const WorkingSet d3 = double_plateau_support(3);
  EXPECT_EQ(gauge_system_rank(epr_b_regular(3), 0, &d3), 6u);
}

TEST(SharedSupport, NothingForSuperGhz) {
  EXPECT_FALSE(find_shared_support(super_ghz()));
}

}  // namespace
}  // namespace gaugesim
