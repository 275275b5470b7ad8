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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaugesim/gauge.hpp"
#include "gaugesim/rng.hpp"
#include "gaugesim/system.hpp"

namespace gaugesim {

// One region; entry k is Pr(0 | setting k).
ProbabilitySystem one_region(std::span<const Scalar> zero_probabilities);

// Totally correlated two-setting pair. Throws ConstraintViolation unless
// 0 <= q <= 1, q3,q4 >= q1,q2 and q1 + q2 >= q3,q4.
ProbabilitySystem general_bell2(const Scalar& q1, const Scalar& q2, const Scalar& q3, const Scalar& q4);

// Most general locally consistent two-setting pair, eight parameters.
ProbabilitySystem general_bipartite2(const std::array<Scalar, 8>& q);

// Singlet-type pair, P(same) = (1 + cos(a - b)) / 2.
ProbabilitySystem epr_b(std::span<const double> angles);
// K equally spaced angles k*pi/K.
ProbabilitySystem epr_b_regular(int setting_count);

ProbabilitySystem singlet();
ProbabilitySystem pr_box();
ProbabilitySystem ghz_xy();
ProbabilitySystem w_xy();
ProbabilitySystem ghz_zzz();
ProbabilitySystem w_zzz();
ProbabilitySystem super_ghz();
// Zeros of super_ghz become eps, quarters become 1/4 - eps; eps in [0, 1/4].
ProbabilitySystem quasi_super_ghz(const Scalar& eps);

// Continuous-angle singlet pair driven by the angle-indexed gauge.
class ContinuousEprB {
 public:
  static double probability(int x0, int x1, double angle0, double angle1);
  // One collapse: pick one of the two configurations, draw lambda, project.
  static OutcomeMask run(double angle0, double angle1, CounterRng& rng);
};

// Named constructors with string parameters, used by the command line.
using CatalogParams = std::map<std::string, std::string, std::less<>>;

struct CatalogParam {
  std::string name;
  std::string default_value;
  std::string help;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<CatalogParam> params;
  std::function<ProbabilitySystem(const CatalogParams&)> build;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& find_catalog_entry(std::string_view name);
ProbabilitySystem build_catalog_system(std::string_view name, const CatalogParams& params = {});

// "0, pi/5, 3*pi/4, 0.25"
std::vector<double> parse_angle_list(std::string_view text);

// Known gauge sets, checked against their systems by the tests.
GaugeSet pr_box_reference_gauges();
GaugeSet singlet_reference_gauges();
GaugeSet ghz_xy_reference_gauges();
GaugeSet w_xy_reference_gauges();
// Branch of super_ghz conditioned on region 2 reading setting `setting` with outcome 0.
GaugeSet super_ghz_branch_gauges(int setting);
GaugeSet one_region_gauges(const ProbabilitySystem& system);
GaugeSet bell2_gauges(const Scalar& q1, const Scalar& q2, const Scalar& q3, const Scalar& q4);

}  // namespace gaugesim
