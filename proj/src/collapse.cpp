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

#include "gaugesim/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gaugesim/catalog.hpp"
#include "gaugesim/error.hpp"

namespace gaugesim {

CollapsePlan CollapsePlan::parse(std::string_view text) {
  CollapsePlan plan;
  std::size_t start = 0;
  bool finished = false;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string token;
    for (char c : text.substr(start, comma - start)) {
      if (c != ' ') token.push_back(c);
    }
    start = comma + 1;
    if (finished) throw Error(ErrorCode::ParseError, "'final' must be the last step");
    if (token == "final") {
      finished = true;
      continue;
    }
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::ParseError, "bad plan step '" + token + "'");
    }
    plan.leading_regions.push_back(std::stoi(token));
  }
  if (!finished) throw Error(ErrorCode::ParseError, "plan must end with 'final'");
  return plan;
}

std::string CollapsePlan::to_string() const {
  std::string s;
  for (int r : leading_regions) s += std::to_string(r) + ",";
  return s + "final";
}

RunTrace one_step_run(const GaugeSet& gauges, std::span<const int> settings, CounterRng& rng,
                      std::optional<int> forced_gamma) {
  const int n = gauges.regions();
  const int k = gauges.setting_count();
  if (static_cast<int>(settings.size()) != n) throw Error(ErrorCode::WrongArity, "setting vector length");
  int gamma = -1;
  if (forced_gamma) {
    const Configuration c = Configuration::from_gamma(*forced_gamma, k);
    if (*forced_gamma < 0 || c.region >= n || settings[c.region] != c.setting) {
      throw Error(ErrorCode::RangeError, "forced gauge " + std::to_string(*forced_gamma) +
                                             " does not match the setting vector");
    }
    gamma = *forced_gamma;
  } else {
    const int region = std::min(n - 1, static_cast<int>(rng.uniform() * n));
    gamma = settings[region] + region * k;
  }
  RunTrace trace;
  trace.ignition_gamma = gamma;
  trace.ignition_index = gauges.at(gamma).sample(rng.uniform());
  trace.outcome = project_outcome(trace.ignition_index, settings, k);
  return trace;
}

EmpiricalTable& EmpiricalTable::merge(const EmpiricalTable& other) {
  if (other.regions_ != regions_) throw Error(ErrorCode::WrongArity, "cannot merge tables of different shape");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

std::uint64_t EmpiricalTable::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

double EmpiricalTable::frequency(OutcomeMask x) const {
  const std::uint64_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(counts_.at(x)) / static_cast<double>(n);
}

double EmpiricalTable::tv_distance(std::span<const double> expected) const {
  if (expected.size() != counts_.size()) throw Error(ErrorCode::WrongArity, "expected distribution length");
  double sum = 0.0;
  for (std::size_t x = 0; x < counts_.size(); ++x) sum += std::fabs(frequency(static_cast<OutcomeMask>(x)) - expected[x]);
  return sum / 2.0;
}

struct PreparedCollapse::Node {
  // Inner nodes collapse `region` (original index) from its marginal.
  int region = -1;
  double probability_zero = 0.0;
  std::unique_ptr<Node> child[2];
  // Leaves hold the residual gauge set.
  std::optional<GaugeSet> gauges;
  std::vector<int> remaining;
  SettingVector residual_settings;
};

namespace {

void validate_plan(const ProbabilitySystem& system, const CollapsePlan& plan) {
  std::vector<bool> used(static_cast<std::size_t>(system.regions()), false);
  for (int r : plan.leading_regions) {
    if (r < 0 || r >= system.regions() || used[r]) throw Error(ErrorCode::RangeError, "bad leading region in plan");
    used[r] = true;
  }
  if (plan.steps() > system.regions()) throw Error(ErrorCode::RangeError, "plan has more steps than regions");
}

}  // namespace

PreparedCollapse::PreparedCollapse(const ProbabilitySystem& system, const CollapsePlan& plan,
                                   std::span<const int> settings, const WorkingSet* final_support)
    : regions_(system.regions()), setting_count_(system.setting_count()), settings_(settings.begin(), settings.end()) {
  if (static_cast<int>(settings_.size()) != regions_) throw Error(ErrorCode::WrongArity, "setting vector length");
  encode_settings(settings_, setting_count_);  // range check
  validate_plan(system, plan);

  const std::function<std::unique_ptr<Node>(const ConditionedSystem&, std::size_t)> build =
      [&](const ConditionedSystem& branch, std::size_t step) {
        auto node = std::make_unique<Node>();
        if (step == plan.leading_regions.size()) {
          const WorkingSet* support = (step == 0) ? final_support : nullptr;
          GaugeSetSolution solved = solve_all_gauges(branch.system, support);
          if (!solved.feasible()) {
            throw Error(ErrorCode::InfeasibleBranch,
                        "step " + std::to_string(step + 1) + " branch " + branch.describe());
          }
          node->gauges = std::move(solved.gauges);
          node->remaining = branch.remaining;
          for (int r : branch.remaining) node->residual_settings.push_back(settings_[r]);
          return node;
        }
        const int region = plan.leading_regions[step];
        const int position =
            static_cast<int>(std::find(branch.remaining.begin(), branch.remaining.end(), region) -
                             branch.remaining.begin());
        node->region = region;
        node->probability_zero = region_probability(branch.system, position, settings_[region], 0).to_double();
        for (int outcome = 0; outcome < 2; ++outcome) {
          if (region_probability(branch.system, position, settings_[region], outcome).is_zero()) continue;
          node->child[outcome] = build(branch.then(region, settings_[region], outcome), step + 1);
        }
        return node;
      };
  root_ = build(ConditionedSystem::root(system), 0);
}

PreparedCollapse::PreparedCollapse(PreparedCollapse&&) noexcept = default;
PreparedCollapse& PreparedCollapse::operator=(PreparedCollapse&&) noexcept = default;
PreparedCollapse::~PreparedCollapse() = default;

RunTrace PreparedCollapse::run(CounterRng& rng, std::optional<int> forced_gamma) const {
  RunTrace trace;
  const Node* node = root_.get();
  while (!node->gauges) {
    const int outcome = (node->child[0] && (!node->child[1] || rng.uniform() < node->probability_zero)) ? 0 : 1;
    trace.leading.push_back({node->region, settings_[node->region], outcome});
    trace.outcome |= static_cast<OutcomeMask>(outcome) << node->region;
    node = node->child[outcome].get();
  }
  std::optional<int> residual_forced;
  if (forced_gamma) {
    const Configuration c = Configuration::from_gamma(*forced_gamma, setting_count_);
    auto it = std::find(node->remaining.begin(), node->remaining.end(), c.region);
    if (it == node->remaining.end()) throw Error(ErrorCode::RangeError, "forced gauge names a leading region");
    residual_forced = c.setting + static_cast<int>(it - node->remaining.begin()) * setting_count_;
  }
  RunTrace last = one_step_run(*node->gauges, node->residual_settings, rng, residual_forced);
  const Configuration ignition = Configuration::from_gamma(last.ignition_gamma, setting_count_);
  trace.ignition_gamma = ignition.setting + node->remaining[ignition.region] * setting_count_;
  trace.ignition_index = last.ignition_index;
  for (std::size_t p = 0; p < node->remaining.size(); ++p) {
    trace.outcome |= static_cast<OutcomeMask>(outcome_bit(last.outcome, static_cast<int>(p))) << node->remaining[p];
  }
  return trace;
}

RunTrace multi_step_run(const ProbabilitySystem& system, const CollapsePlan& plan, std::span<const int> settings,
                        CounterRng& rng) {
  return PreparedCollapse(system, plan, settings).run(rng);
}

namespace {

std::vector<double> expected_distribution(const ProbabilitySystem& system, std::span<const int> settings) {
  std::vector<double> expected;
  for (OutcomeMask x = 0; x < system.outcome_count(); ++x) expected.push_back(system.at(x, settings).to_double());
  return expected;
}

SimulationResult finish(const ProbabilitySystem& system, const PreparedCollapse& prepared,
                        const SimulationOptions& options, EmpiricalTable counts) {
  SimulationResult result{std::move(counts), 0.0, {}};
  result.tv_distance = result.counts.tv_distance(expected_distribution(system, prepared.settings()));
  for (std::uint64_t r = 0; r < std::min<std::uint64_t>(options.runs, options.trace_sample); ++r) {
    CounterRng rng(options.seed, r);
    result.trace_sample.push_back(prepared.run(rng, options.forced_gamma));
  }
  return result;
}

}  // namespace

SimulationResult simulate_serial(const ProbabilitySystem& system, const PreparedCollapse& prepared,
                                 const SimulationOptions& options) {
  EmpiricalTable counts(system.regions());
  for (std::uint64_t r = 0; r < options.runs; ++r) {
    CounterRng rng(options.seed, r);
    counts.add(prepared.run(rng, options.forced_gamma).outcome);
  }
  return finish(system, prepared, options, std::move(counts));
}

SimulationResult simulate(const ProbabilitySystem& system, const PreparedCollapse& prepared,
                          const SimulationOptions& options) {
  // Validate a forced gauge once, outside the parallel region.
  if (options.forced_gamma && options.runs > 0) {
    CounterRng probe(options.seed, 0);
    prepared.run(probe, options.forced_gamma);
  }
  EmpiricalTable counts(system.regions());
  const auto runs = static_cast<std::int64_t>(options.runs);
#pragma omp parallel
  {
    EmpiricalTable local(system.regions());
#pragma omp for schedule(static) nowait
    for (std::int64_t r = 0; r < runs; ++r) {
      CounterRng rng(options.seed, static_cast<std::uint64_t>(r));
      local.add(prepared.run(rng, options.forced_gamma).outcome);
    }
#pragma omp critical(gaugesim_merge)
    counts.merge(local);
  }
  return finish(system, prepared, options, std::move(counts));
}

EmpiricalTable simulate_continuous(double angle0, double angle1, std::uint64_t runs, std::uint64_t seed) {
  EmpiricalTable counts(2);
  const auto total = static_cast<std::int64_t>(runs);
#pragma omp parallel
  {
    EmpiricalTable local(2);
#pragma omp for schedule(static) nowait
    for (std::int64_t r = 0; r < total; ++r) {
      CounterRng rng(seed, static_cast<std::uint64_t>(r));
      local.add(ContinuousEprB::run(angle0, angle1, rng));
    }
#pragma omp critical(gaugesim_merge)
    counts.merge(local);
  }
  return counts;
}

namespace {

class PlanSearch {
 public:
  std::optional<std::vector<BranchCertificate>> certify(const ProbabilitySystem& system, const CollapsePlan& plan) {
    std::vector<BranchCertificate> certificates;
    if (!walk(ConditionedSystem::root(system), plan, 0, certificates)) return std::nullopt;
    return certificates;
  }

 private:
  bool walk(const ConditionedSystem& branch, const CollapsePlan& plan, std::size_t step,
            std::vector<BranchCertificate>& out) {
    if (step == plan.leading_regions.size()) {
      const std::optional<GaugeSet>& gauges = one_step(branch.system);
      if (!gauges) return false;
      out.push_back({branch, *gauges});
      return true;
    }
    const int region = plan.leading_regions[step];
    const int position = static_cast<int>(std::find(branch.remaining.begin(), branch.remaining.end(), region) -
                                          branch.remaining.begin());
    for (int setting = 0; setting < branch.system.setting_count(); ++setting) {
      for (int outcome = 0; outcome < 2; ++outcome) {
        if (region_probability(branch.system, position, setting, outcome).is_zero()) continue;
        if (!walk(branch.then(region, setting, outcome), plan, step + 1, out)) return false;
      }
    }
    return true;
  }

  const std::optional<GaugeSet>& one_step(const ProbabilitySystem& system) {
    const std::string key = system.canonical_key();
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, solve_all_gauges(system).gauges).first;
    return it->second;
  }

  std::unordered_map<std::string, std::optional<GaugeSet>> cache_;
};

}  // namespace

std::optional<std::vector<BranchCertificate>> certify_plan(const ProbabilitySystem& system,
                                                           const CollapsePlan& plan) {
  validate_plan(system, plan);
  return PlanSearch().certify(system, plan);
}

MinStepsResult find_min_steps(const ProbabilitySystem& system) {
  const int n = system.regions();
  PlanSearch search;
  for (int leading = 0; leading < n; ++leading) {
    // Ordered choices of `leading` distinct regions, lexicographic.
    std::vector<int> order;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::optional<MinStepsResult> found;
    const std::function<void()> extend = [&]() {
      if (found) return;
      if (static_cast<int>(order.size()) == leading) {
        CollapsePlan plan{order};
        if (auto certificates = search.certify(system, plan)) found = MinStepsResult{leading + 1, plan, *certificates};
        return;
      }
      for (int r = 0; r < n && !found; ++r) {
        if (used[r]) continue;
        used[r] = true;
        order.push_back(r);
        extend();
        order.pop_back();
        used[r] = false;
      }
    };
    extend();
    if (found) return *found;
  }
  // A one-region residual always collapses, so this is unreachable.
  throw Error(ErrorCode::InfeasibleBranch, "no collapse plan found");
}

ChiSquareResult chi_square_homogeneity(const std::vector<std::vector<std::uint64_t>>& counts) {
  if (counts.size() < 2) throw Error(ErrorCode::WrongArity, "need at least two samples");
  const std::size_t columns = counts.front().size();
  std::vector<double> column_total(columns, 0.0);
  std::vector<double> row_total(counts.size(), 0.0);
  double grand = 0.0;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (counts[r].size() != columns) throw Error(ErrorCode::WrongArity, "ragged contingency table");
    for (std::size_t c = 0; c < columns; ++c) {
      const auto v = static_cast<double>(counts[r][c]);
      column_total[c] += v;
      row_total[r] += v;
      grand += v;
    }
  }
  ChiSquareResult result;
  int used_columns = 0;
  for (std::size_t c = 0; c < columns; ++c) {
    if (column_total[c] == 0.0) continue;
    ++used_columns;
    for (std::size_t r = 0; r < counts.size(); ++r) {
      const double expected = row_total[r] * column_total[c] / grand;
      if (expected > 0.0) {
        const double diff = static_cast<double>(counts[r][c]) - expected;
        result.statistic += diff * diff / expected;
      }
    }
  }
  result.degrees_of_freedom = static_cast<int>(counts.size() - 1) * std::max(0, used_columns - 1);
  result.p_value = result.degrees_of_freedom == 0
                       ? 1.0
                       : boost::math::gamma_q(result.degrees_of_freedom / 2.0, result.statistic / 2.0);
  return result;
}

}  // namespace gaugesim
