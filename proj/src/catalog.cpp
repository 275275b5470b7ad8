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

#include "gaugesim/catalog.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "gaugesim/epr.hpp"
#include "gaugesim/error.hpp"

namespace gaugesim {

namespace {

using std::numbers::pi;

constexpr OutcomeMask pair(int x0, int x1) { return static_cast<OutcomeMask>(x0 | (x1 << 1)); }

Scalar frac(long num, long den) { return Scalar::ratio(num, den); }

int parity(OutcomeMask x) { return std::popcount(x) % 2; }

Backend backend_of(std::initializer_list<const Scalar*> values) {
  for (const Scalar* v : values) {
    if (!v->is_exact()) return Backend::Float;
  }
  return Backend::Exact;
}

void require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::ConstraintViolation, what);
}

bool geq(const Scalar& a, const Scalar& b) { return !(a - b).is_negative(); }

// Two-setting pair given column by column: (00), (11), (01), (10) setting
// pairs, each listing P(x0 x1) for x = 00, 01, 10, 11.
ProbabilitySystem two_setting_pair(const std::array<std::array<Scalar, 4>, 4>& columns, Backend backend) {
  const int column_of[2][2] = {{0, 2}, {3, 1}};
  return ProbabilitySystem::from_generator(
      2, 2, {"t0", "t1"}, backend, [&](OutcomeMask x, std::span<const int> u) {
        const int row = outcome_bit(x, 0) * 2 + outcome_bit(x, 1);
        return columns[column_of[u[0]][u[1]]][row];
      });
}

GaugeSet gauges_from_rows(int regions, int k, const std::vector<std::pair<IgnitionIndex, std::vector<Scalar>>>& rows) {
  std::vector<GaugeDistribution> gauges;
  for (int gamma = 0; gamma < regions * k; ++gamma) {
    std::vector<IgnitionIndex> support;
    std::vector<Scalar> weights;
    for (const auto& [index, row] : rows) {
      if (row[gamma].is_zero()) continue;
      support.push_back(index);
      weights.push_back(row[gamma]);
    }
    gauges.emplace_back(gamma, std::move(support), std::move(weights));
  }
  return GaugeSet(regions, k, std::move(gauges));
}

Scalar param_scalar(const CatalogParams& params, std::string_view name, std::string_view fallback) {
  auto it = params.find(name);
  return Scalar(parse_rational(it == params.end() ? fallback : std::string_view(it->second)));
}

std::string param_text(const CatalogParams& params, std::string_view name, std::string_view fallback) {
  auto it = params.find(name);
  return std::string(it == params.end() ? fallback : std::string_view(it->second));
}

std::vector<Scalar> parse_scalar_list(std::string_view text) {
  std::vector<Scalar> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    out.emplace_back(parse_rational(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

}  // namespace

ProbabilitySystem one_region(std::span<const Scalar> zero_probabilities) {
  if (zero_probabilities.empty()) throw Error(ErrorCode::WrongArity, "need at least one setting");
  std::vector<Scalar> table;
  Backend backend = Backend::Exact;
  for (const auto& p : zero_probabilities) {
    require(!p.is_negative() && geq(Scalar(1), p), "Pr(0|setting) must lie in [0, 1]");
    if (!p.is_exact()) backend = Backend::Float;
    table.push_back(p);
    table.push_back(Scalar(1) - p);
  }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < zero_probabilities.size(); ++k) labels.push_back("t" + std::to_string(k));
  return ProbabilitySystem(1, static_cast<int>(zero_probabilities.size()), labels, backend, std::move(table));
}

ProbabilitySystem general_bell2(const Scalar& q1, const Scalar& q2, const Scalar& q3, const Scalar& q4) {
  for (const Scalar* q : {&q1, &q2, &q3, &q4}) require(!q->is_negative() && geq(Scalar(1), *q), "q must lie in [0, 1]");
  require(geq(q3, q1) && geq(q3, q2) && geq(q4, q1) && geq(q4, q2), "need q3, q4 >= q1, q2");
  require(geq(q1 + q2, q3) && geq(q1 + q2, q4), "need q1 + q2 >= q3, q4");
  const Scalar one(1), zero(0);
  return two_setting_pair({{{one - q1, zero, zero, q1},
                            {one - q2, zero, zero, q2},
                            {one - q3, q3 - q1, q3 - q2, q1 + q2 - q3},
                            {one - q4, q4 - q2, q4 - q1, q1 + q2 - q4}}},
                          backend_of({&q1, &q2, &q3, &q4}));
}

ProbabilitySystem general_bipartite2(const std::array<Scalar, 8>& q) {
  const Scalar one(1);
  const std::array<std::array<Scalar, 4>, 4> columns{{
      {one - q[0], q[4], q[6], q[0] - q[4] - q[6]},
      {one - q[1], q[5], q[7], q[1] - q[5] - q[7]},
      {one - q[2], q[2] - q[0] + q[4], q[2] - q[1] + q[7], q[0] + q[1] - q[2] - q[4] - q[7]},
      {one - q[3], q[3] - q[1] + q[5], q[3] - q[0] + q[6], q[0] + q[1] - q[3] - q[5] - q[6]},
  }};
  for (const auto& column : columns) {
    for (const auto& p : column) require(!p.is_negative(), "parameters give a negative probability");
  }
  Backend backend = Backend::Exact;
  for (const auto& v : q) {
    if (!v.is_exact()) backend = Backend::Float;
  }
  return two_setting_pair(columns, backend);
}

ProbabilitySystem epr_b(std::span<const double> angles) {
  if (angles.empty()) throw Error(ErrorCode::WrongArity, "need at least one angle");
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < angles.size(); ++k) labels.push_back("t" + std::to_string(k));
  std::vector<double> a(angles.begin(), angles.end());
  return ProbabilitySystem::from_generator(2, static_cast<int>(a.size()), labels, Backend::Float,
                                           [&](OutcomeMask x, std::span<const int> u) {
                                             return Scalar(ContinuousEprB::probability(
                                                 outcome_bit(x, 0), outcome_bit(x, 1), a[u[0]], a[u[1]]));
                                           });
}

ProbabilitySystem epr_b_regular(int setting_count) {
  if (setting_count < 1) throw Error(ErrorCode::RangeError, "setting count must be positive");
  std::vector<double> angles;
  for (int k = 0; k < setting_count; ++k) angles.push_back(k * pi / setting_count);
  return epr_b(angles);
}

ProbabilitySystem singlet() {
  return ProbabilitySystem::from_generator(2, 3, {"X", "Y", "Z"}, Backend::Exact,
                                           [](OutcomeMask x, std::span<const int> u) {
                                             if (u[0] != u[1]) return frac(1, 4);
                                             return outcome_bit(x, 0) != outcome_bit(x, 1) ? frac(1, 2) : Scalar(0);
                                           });
}

ProbabilitySystem pr_box() {
  const Scalar half = frac(1, 2), zero(0);
  return two_setting_pair({{{half, zero, zero, half},
                            {zero, half, half, zero},
                            {half, zero, zero, half},
                            {half, zero, zero, half}}},
                          Backend::Exact);
}

ProbabilitySystem ghz_xy() {
  return ProbabilitySystem::from_generator(3, 2, {"X", "Y"}, Backend::Exact,
                                           [](OutcomeMask x, std::span<const int> u) {
                                             const int ys = u[0] + u[1] + u[2];
                                             if (ys == 1 || ys == 3) return frac(1, 8);
                                             const int wanted = ys == 0 ? 0 : 1;
                                             return parity(x) == wanted ? frac(1, 4) : Scalar(0);
                                           });
}

ProbabilitySystem w_xy() {
  return ProbabilitySystem::from_generator(
      3, 2, {"X", "Y"}, Backend::Exact, [](OutcomeMask x, std::span<const int> u) {
        if (u[0] == u[1] && u[1] == u[2]) return (x == 0 || x == 7) ? frac(3, 8) : frac(1, 24);
        // The region whose setting differs from the other two.
        const int odd = u[0] == u[1] ? 2 : (u[0] == u[2] ? 1 : 0);
        const int a = (odd + 1) % 3, b = (odd + 2) % 3;
        return outcome_bit(x, a) == outcome_bit(x, b) ? frac(5, 24) : frac(1, 24);
      });
}

ProbabilitySystem ghz_zzz() {
  return ProbabilitySystem::from_generator(3, 1, {"Z"}, Backend::Exact, [](OutcomeMask x, std::span<const int>) {
    return (x == 0 || x == 7) ? frac(1, 2) : Scalar(0);
  });
}

ProbabilitySystem w_zzz() {
  return ProbabilitySystem::from_generator(3, 1, {"Z"}, Backend::Exact, [](OutcomeMask x, std::span<const int>) {
    return std::popcount(x) == 1 ? frac(1, 3) : Scalar(0);
  });
}

namespace {

bool super_ghz_allows(OutcomeMask x, std::span<const int> u) {
  const bool uniform = u[0] == u[1] && u[1] == u[2];
  return parity(x) == (uniform ? 1 : 0);
}

}  // namespace

ProbabilitySystem super_ghz() {
  return ProbabilitySystem::from_generator(3, 2, {"t0", "t1"}, Backend::Exact,
                                           [](OutcomeMask x, std::span<const int> u) {
                                             return super_ghz_allows(x, u) ? frac(1, 4) : Scalar(0);
                                           });
}

ProbabilitySystem quasi_super_ghz(const Scalar& eps) {
  if (eps.is_negative() || (frac(1, 4) - eps).is_negative()) {
    throw Error(ErrorCode::RangeError, "eps must lie in [0, 1/4]");
  }
  const Scalar quarter_minus = frac(1, 4) - eps;
  return ProbabilitySystem::from_generator(3, 2, {"t0", "t1"}, eps.backend(),
                                           [&](OutcomeMask x, std::span<const int> u) {
                                             return super_ghz_allows(x, u) ? quarter_minus : eps;
                                           });
}

double ContinuousEprB::probability(int x0, int x1, double angle0, double angle1) {
  const double c = std::cos(angle0 - angle1);
  return x0 == x1 ? (1.0 + c) / 4.0 : (1.0 - c) / 4.0;
}

OutcomeMask ContinuousEprB::run(double angle0, double angle1, CounterRng& rng) {
  const double ignition_angle = rng.uniform() < 0.5 ? angle0 : angle1;
  const double lambda = ContinuousGauge(ignition_angle).sample(rng.uniform());
  return pair(continuous_projection(angle0, lambda), continuous_projection(angle1, lambda));
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> angles;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string term;
    for (char c : text.substr(start, comma - start)) {
      if (c != ' ') term.push_back(c);
    }
    const std::size_t at = term.find("pi");
    if (at == std::string::npos) {
      angles.push_back(rational_to_double(parse_rational(term)));
    } else {
      std::string coefficient = term.substr(0, at);
      if (!coefficient.empty() && coefficient.back() == '*') coefficient.pop_back();
      double value = coefficient.empty() ? 1.0 : coefficient == "-" ? -1.0 : rational_to_double(parse_rational(coefficient));
      const std::string rest = term.substr(at + 2);
      if (!rest.empty()) {
        if (rest.front() != '/') throw Error(ErrorCode::ParseError, "bad angle '" + term + "'");
        value /= rational_to_double(parse_rational(rest.substr(1)));
      }
      angles.push_back(value * pi);
    }
    start = comma + 1;
  }
  return angles;
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> e;
    e.push_back({"one-region", "single region, Pr(0|k) per setting", {{"p", "1/2,1/2,1/2", "comma list of Pr(0|k)"}},
                 [](const CatalogParams& p) {
                   std::vector<Scalar> probs = parse_scalar_list(param_text(p, "p", "1/2,1/2,1/2"));
                   return one_region(probs);
                 }});
    e.push_back({"bell2", "totally correlated pair, two settings",
                 {{"q1", "1/2", ""}, {"q2", "1/2", ""}, {"q3", "3/4", ""}, {"q4", "3/4", ""}},
                 [](const CatalogParams& p) {
                   return general_bell2(param_scalar(p, "q1", "1/2"), param_scalar(p, "q2", "1/2"),
                                        param_scalar(p, "q3", "3/4"), param_scalar(p, "q4", "3/4"));
                 }});
    e.push_back({"gene2", "general locally consistent pair, two settings",
                 {{"q1", "3/4", ""}, {"q2", "3/4", ""}, {"q3", "3/4", ""}, {"q4", "3/4", ""},
                  {"q5", "1/4", ""}, {"q6", "1/4", ""}, {"q7", "1/4", ""}, {"q8", "1/4", ""}},
                 [](const CatalogParams& p) {
                   std::array<Scalar, 8> q;
                   for (int i = 0; i < 8; ++i) {
                     q[i] = param_scalar(p, "q" + std::to_string(i + 1), i < 4 ? "3/4" : "1/4");
                   }
                   return general_bipartite2(q);
                 }});
    e.push_back({"epr-b", "singlet-type pair at the given angles", {{"angles", "0,pi/5,pi/2", "comma list"}},
                 [](const CatalogParams& p) { return epr_b(parse_angle_list(param_text(p, "angles", "0,pi/5,pi/2"))); }});
    e.push_back({"epr-b-regular", "singlet-type pair at k*pi/K", {{"k", "3", "number of settings"}},
                 [](const CatalogParams& p) {
                   return epr_b_regular(static_cast<int>(param_scalar(p, "k", "3").to_double()));
                 }});
    e.push_back({"singlet", "three-axis singlet pair", {}, [](const CatalogParams&) { return singlet(); }});
    e.push_back({"pr-box", "maximally non-local pair", {}, [](const CatalogParams&) { return pr_box(); }});
    e.push_back({"ghz-xy", "three-region GHZ, X/Y settings", {}, [](const CatalogParams&) { return ghz_xy(); }});
    e.push_back({"w-xy", "three-region W, X/Y settings", {}, [](const CatalogParams&) { return w_xy(); }});
    e.push_back({"ghz-zzz", "three-region GHZ, Z only", {}, [](const CatalogParams&) { return ghz_zzz(); }});
    e.push_back({"w-zzz", "three-region W, Z only", {}, [](const CatalogParams&) { return w_zzz(); }});
    e.push_back({"super-ghz", "three-region parity system without a one-step collapse", {},
                 [](const CatalogParams&) { return super_ghz(); }});
    e.push_back({"quasi-super-ghz", "super-ghz softened by eps", {{"eps", "1/8", "in [0, 1/4]"}},
                 [](const CatalogParams& p) { return quasi_super_ghz(param_scalar(p, "eps", "1/8")); }});
    return e;
  }();
  return entries;
}

const CatalogEntry& find_catalog_entry(std::string_view name) {
  for (const auto& entry : catalog_entries()) {
    if (entry.name == name) return entry;
  }
  throw Error(ErrorCode::UnknownEntry, "no catalog entry named '" + std::string(name) + "'");
}

ProbabilitySystem build_catalog_system(std::string_view name, const CatalogParams& params) {
  const CatalogEntry& entry = find_catalog_entry(name);
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto& p : entry.params) known = known || p.name == key;
    if (!known) throw Error(ErrorCode::UnknownEntry, "'" + entry.name + "' has no parameter '" + key + "'");
  }
  return entry.build(params);
}

GaugeSet pr_box_reference_gauges() {
  const Scalar h = frac(1, 2), o(0);
  return gauges_from_rows(2, 2, {{0, {h, o, h, o}}, {6, {o, h, o, h}}, {9, {o, h, o, h}}, {15, {h, o, h, o}}});
}

GaugeSet singlet_reference_gauges() {
  const Scalar q = frac(1, 4);
  const std::vector<Scalar> all(6, q);
  return gauges_from_rows(2, 3, {{7, all}, {28, all}, {42, all}, {49, all}});
}

GaugeSet ghz_xy_reference_gauges() {
  // Each listed configuration gives the index weight 1/8.
  const std::vector<std::pair<IgnitionIndex, std::vector<int>>> rows = {
      {2, {2, 4}},  {3, {1, 5}},  {5, {5}},        {7, {0, 3, 4}}, {8, {0, 4}},  {10, {5}},
      {12, {3}},    {13, {1, 2, 4}}, {17, {0, 3, 4}}, {20, {1, 2, 4}}, {26, {1, 3}}, {27, {2, 4}},
      {28, {0, 5}}, {30, {4}},    {32, {0, 2, 5}}, {34, {3}},      {38, {1, 5}}, {39, {2}},
      {40, {1}},    {41, {3, 5}}, {45, {0}},       {47, {5}},      {48, {1, 3}}, {49, {2}},
      {52, {0}},    {54, {2}},    {57, {0}},       {59, {3}},      {62, {1}}};
  std::vector<std::pair<IgnitionIndex, std::vector<Scalar>>> table;
  for (const auto& [index, gammas] : rows) {
    std::vector<Scalar> row(6, Scalar(0));
    for (int g : gammas) row[g] = frac(1, 8);
    table.emplace_back(index, std::move(row));
  }
  return gauges_from_rows(3, 2, table);
}

GaugeSet w_xy_reference_gauges() {
  const Scalar o(0), a = frac(1, 24), b = frac(5, 24), s = frac(1, 6);
  return gauges_from_rows(3, 2, {{0, {s, s, s, s, s, s}},  {2, {o, o, o, o, a, o}},  {5, {o, o, o, o, a, b}},
                                 {9, {o, o, o, o, a, a}},  {10, {o, o, o, o, s, o}}, {14, {o, o, o, o, a, o}},
                                 {17, {o, o, a, b, o, o}}, {18, {o, o, a, a, o, o}}, {20, {a, b, o, o, o, o}},
                                 {21, {b, o, b, o, b, o}}, {22, {o, a, a, o, a, a}}, {24, {a, a, o, o, o, o}},
                                 {25, {a, o, o, a, a, o}}, {26, {o, a, o, a, a, a}}, {31, {o, o, o, o, s, o}},
                                 {33, {o, o, a, a, o, o}}, {34, {o, o, b, a, o, o}}, {36, {a, a, o, o, o, o}},
                                 {37, {a, o, a, o, o, a}}, {38, {o, a, a, o, o, a}}, {40, {b, a, o, o, o, o}},
                                 {41, {a, o, o, a, o, a}}, {42, {o, b, o, b, o, b}}, {47, {o, o, o, o, o, s}},
                                 {55, {o, o, s, o, o, o}}, {59, {o, o, o, s, o, o}}, {61, {s, o, o, o, o, o}},
                                 {62, {o, s, o, o, o, o}}});
}

GaugeSet super_ghz_branch_gauges(int setting) {
  const Scalar h = frac(1, 2), o(0);
  if (setting == 0) {
    return gauges_from_rows(2, 2, {{1, {o, h, h, o}}, {4, {h, o, o, h}}, {11, {h, o, o, h}}, {14, {o, h, h, o}}});
  }
  if (setting == 1) {
    return gauges_from_rows(2, 2, {{2, {h, o, o, h}}, {7, {o, h, h, o}}, {8, {o, h, h, o}}, {13, {h, o, o, h}}});
  }
  throw Error(ErrorCode::RangeError, "setting must be 0 or 1");
}

GaugeSet one_region_gauges(const ProbabilitySystem& system) {
  if (system.regions() != 1) throw Error(ErrorCode::WrongArity, "expected a one-region system");
  const int k = system.setting_count();
  const IgnitionIndex all_ones = (IgnitionIndex{1} << k) - 1;
  std::vector<GaugeDistribution> gauges;
  for (int s = 0; s < k; ++s) {
    const int u[1] = {s};
    gauges.emplace_back(s, std::vector<IgnitionIndex>{0, all_ones},
                        std::vector<Scalar>{system.at(0, u), system.at(1, u)});
  }
  return GaugeSet(1, k, std::move(gauges));
}

GaugeSet bell2_gauges(const Scalar& q1, const Scalar& q2, const Scalar& q3, const Scalar& q4) {
  const Scalar one(1);
  // Two-bit words read by both regions. Region 1 setting k meets region 0 at
  // the other setting, so configuration k + 2 takes the distribution of 1 - k.
  const std::vector<Scalar> g0{one - q3, q3 - q2, q3 - q1, q1 + q2 - q3};
  const std::vector<Scalar> g1{one - q4, q4 - q2, q4 - q1, q1 + q2 - q4};
  std::vector<std::pair<IgnitionIndex, std::vector<Scalar>>> rows;
  for (IgnitionIndex word = 0; word < 4; ++word) {
    rows.emplace_back(lift_bipartite(word, 2), std::vector<Scalar>{g0[word], g1[word], g1[word], g0[word]});
  }
  return gauges_from_rows(2, 2, rows);
}

}  // namespace gaugesim
