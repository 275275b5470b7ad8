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

#include "gaugesim/gauge.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <exception>
#include <numeric>

#include "gaugesim/error.hpp"
#include "gaugesim/simplex.hpp"

namespace gaugesim {

OutcomeMask project_outcome(IgnitionIndex index, std::span<const int> settings, int setting_count) {
  OutcomeMask x = 0;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const int gamma = settings[i] + static_cast<int>(i) * setting_count;
    x |= static_cast<OutcomeMask>(projection(gamma, index)) << i;
  }
  return x;
}

WorkingSet::WorkingSet(int regions, int setting_count, std::vector<IgnitionIndex> indices)
    : regions_(regions), setting_count_(setting_count), indices_(std::move(indices)) {
  const int bits = regions * setting_count;
  if (regions < 1 || setting_count < 1 || bits > 63) throw Error(ErrorCode::RangeError, "index space too wide");
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.back() >= (IgnitionIndex{1} << bits)) {
    throw Error(ErrorCode::RangeError, "ignition index " + std::to_string(indices_.back()) + " has more than " +
                                           std::to_string(bits) + " bits");
  }
}

WorkingSet WorkingSet::full(int regions, int setting_count) {
  const int bits = regions * setting_count;
  if (bits > kMaxFullIndexBits) {
    throw Error(ErrorCode::RangeError, "full index space has 2^" + std::to_string(bits) +
                                           " entries; pass an explicit working set");
  }
  std::vector<IgnitionIndex> all(std::size_t{1} << bits);
  std::iota(all.begin(), all.end(), IgnitionIndex{0});
  return WorkingSet(regions, setting_count, std::move(all));
}

std::vector<IgnitionIndex> target_index_set(const WorkingSet& support, OutcomeMask x, std::span<const int> settings) {
  std::vector<IgnitionIndex> matches;
  for (IgnitionIndex j : support.indices()) {
    if (project_outcome(j, settings, support.setting_count()) == x) matches.push_back(j);
  }
  return matches;
}

std::vector<IgnitionIndex> double_plateau(int setting_count) {
  if (setting_count < 1 || setting_count > 31) throw Error(ErrorCode::RangeError, "setting count out of range");
  const int k = setting_count;
  const IgnitionIndex all_ones = (IgnitionIndex{1} << k) - 1;
  // Walking around the cycle: ones enter from the bottom, then leave from the bottom.
  auto walk = [&](int t) -> IgnitionIndex {
    if (t <= k) return (IgnitionIndex{1} << t) - 1;
    return all_ones & ~((IgnitionIndex{1} << (t - k)) - 1);
  };
  const int offset = (k + 1) / 2;
  std::vector<IgnitionIndex> order;
  order.reserve(static_cast<std::size_t>(2 * k));
  for (int r = 0; r < 2 * k; ++r) order.push_back(walk((r + offset) % (2 * k)));
  return order;
}

WorkingSet double_plateau_support(int setting_count) {
  std::vector<IgnitionIndex> lifted;
  for (IgnitionIndex word : double_plateau(setting_count)) lifted.push_back(lift_bipartite(word, setting_count));
  return WorkingSet(2, setting_count, std::move(lifted));
}

GaugeDistribution::GaugeDistribution(int gamma, std::vector<IgnitionIndex> support, std::vector<Scalar> weights)
    : gamma_(gamma) {
  if (support.size() != weights.size()) throw Error(ErrorCode::WrongArity, "support and weights differ in size");
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  for (std::size_t i : order) {
    if (!support_.empty() && support_.back() == support[i]) {
      throw Error(ErrorCode::WrongArity, "duplicate ignition index " + std::to_string(support[i]));
    }
    support_.push_back(support[i]);
    weights_.push_back(weights[i]);
  }
  double running = 0.0;
  for (const auto& w : weights_) {
    running += std::max(0.0, w.to_double());
    cumulative_.push_back(running);
  }
}

Scalar GaugeDistribution::weight(IgnitionIndex index) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), index);
  if (it == support_.end() || *it != index) return Scalar(0);
  return weights_[static_cast<std::size_t>(it - support_.begin())];
}

Scalar GaugeDistribution::total() const {
  Scalar sum(0);
  for (const auto& w : weights_) sum += w;
  return sum;
}

IgnitionIndex GaugeDistribution::sample(double uniform01) const {
  if (cumulative_.empty() || cumulative_.back() <= 0.0) throw Error(ErrorCode::RangeError, "empty gauge");
  const double target = uniform01 * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) {
    // Rounding at the top end: fall back to the last entry carrying weight.
    std::size_t i = cumulative_.size() - 1;
    while (i > 0 && weights_[i].to_double() <= 0.0) --i;
    return support_[i];
  }
  return support_[static_cast<std::size_t>(it - cumulative_.begin())];
}

GaugeSet::GaugeSet(int regions, int setting_count, std::vector<GaugeDistribution> gauges)
    : regions_(regions), setting_count_(setting_count), gauges_(std::move(gauges)) {
  if (static_cast<int>(gauges_.size()) != regions * setting_count) {
    throw Error(ErrorCode::WrongArity, "expected one gauge per configuration");
  }
  for (std::size_t g = 0; g < gauges_.size(); ++g) {
    if (gauges_[g].gamma() != static_cast<int>(g)) throw Error(ErrorCode::WrongArity, "gauges out of order");
  }
}

GaugeConsistency verify_consistency(const ProbabilitySystem& system, const GaugeSet& gauges, double tolerance) {
  if (gauges.regions() != system.regions() || gauges.setting_count() != system.setting_count()) {
    throw Error(ErrorCode::WrongArity, "gauge set does not match the system shape");
  }
  const int n = system.regions();
  const int k = system.setting_count();
  const bool exact_system = system.backend() == Backend::Exact;
  GaugeConsistency report;
  for (const auto& gauge : gauges.gauges()) {
    const Configuration config = Configuration::from_gamma(gauge.gamma(), k);
    bool exact_weights = true;
    for (const auto& w : gauge.weights()) {
      exact_weights = exact_weights && w.is_exact();
      if (w.is_negative(tolerance)) report.normalized = false;
    }
    const bool exact = exact_system && exact_weights;
    const Scalar total = gauge.total();
    if (exact ? total.exact() != 1 : std::fabs(total.to_double() - 1.0) > tolerance) report.normalized = false;

    // Accumulate the gauge's prediction for every target it reaches.
    std::vector<Scalar> predicted(system.table().size(), exact ? Scalar(0) : Scalar(0.0));
    std::vector<bool> reached(system.setting_vector_count(), false);
    for (SettingIndex u = 0; u < system.setting_vector_count(); ++u) {
      SettingVector uv = decode_settings(u, n, k);
      if (uv[config.region] != config.setting) continue;
      reached[u] = true;
      for (std::size_t c = 0; c < gauge.support().size(); ++c) {
        const OutcomeMask x = project_outcome(gauge.support()[c], uv, k);
        predicted[u * system.outcome_count() + x] += gauge.weights()[c];
      }
    }
    for (SettingIndex u = 0; u < system.setting_vector_count(); ++u) {
      if (!reached[u]) continue;
      for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
        const Scalar& want = system.at(x, u);
        const Scalar& got = predicted[u * system.outcome_count() + x];
        const double deviation = abs_difference(want, got);
        report.max_deviation = std::max(report.max_deviation, deviation);
        if (!(exact && got.is_exact() && want.exact() == got.exact())) report.exact = false;
      }
    }
  }
  report.within_tolerance = report.max_deviation <= tolerance;
  return report;
}

namespace {

struct GaugeLinearSystem {
  RationalMatrix matrix;
  std::vector<Rational> rhs;
  std::vector<double> rhs_float;
  bool uncovered_target = false;  // a positive target no support entry reaches
};

GaugeLinearSystem build_linear_system(const ProbabilitySystem& system, int gamma, const WorkingSet& support) {
  const int n = system.regions();
  const int k = system.setting_count();
  if (gamma < 0 || gamma >= n * k) throw Error(ErrorCode::RangeError, "configuration out of range");
  if (support.regions() != n || support.setting_count() != k) {
    throw Error(ErrorCode::WrongArity, "working set does not match the system shape");
  }
  const Configuration config = Configuration::from_gamma(gamma, k);
  const std::size_t columns = support.size();
  GaugeLinearSystem out;
  for (SettingIndex u = 0; u < system.setting_vector_count(); ++u) {
    SettingVector uv = decode_settings(u, n, k);
    if (uv[config.region] != config.setting) continue;
    const std::size_t first = out.matrix.size();
    for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
      out.matrix.emplace_back(columns, Rational(0));
      out.rhs.push_back(system.at(x, u).to_rational());
      out.rhs_float.push_back(system.at(x, u).to_double());
    }
    for (std::size_t c = 0; c < columns; ++c) {
      out.matrix[first + project_outcome(support.indices()[c], uv, k)][c] = 1;
    }
    for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
      const auto& row = out.matrix[first + x];
      const bool empty = std::all_of(row.begin(), row.end(), [](const Rational& q) { return sgn(q) == 0; });
      if (empty && sgn(out.rhs[first + x]) != 0) out.uncovered_target = true;
    }
  }
  return out;
}

const WorkingSet& resolve_support(const ProbabilitySystem& system, const WorkingSet* support,
                                  std::optional<WorkingSet>& storage) {
  if (support != nullptr) return *support;
  storage.emplace(WorkingSet::full(system.regions(), system.setting_count()));
  return *storage;
}

}  // namespace

std::size_t gauge_system_rank(const ProbabilitySystem& system, int gamma, const WorkingSet* support) {
  std::optional<WorkingSet> storage;
  const WorkingSet& s = resolve_support(system, support, storage);
  return independent_rows(build_linear_system(system, gamma, s).matrix).size();
}

GaugeSolution solve_gauge(const ProbabilitySystem& system, int gamma, const WorkingSet* support) {
  std::optional<WorkingSet> storage;
  const WorkingSet& s = resolve_support(system, support, storage);
  GaugeLinearSystem linear = build_linear_system(system, gamma, s);
  if (s.size() == 0 || linear.uncovered_target) return {SolveStatus::SupportTooSmall, std::nullopt};

  // The full set of equations is redundant; solving on a row basis and then
  // checking the dropped rows keeps rounded float data from looking infeasible.
  const std::vector<std::size_t> basis_rows = independent_rows(linear.matrix);
  RationalMatrix reduced;
  std::vector<Rational> reduced_rhs;
  for (std::size_t r : basis_rows) {
    reduced.push_back(linear.matrix[r]);
    reduced_rhs.push_back(linear.rhs[r]);
  }
  std::optional<std::vector<Rational>> point = find_feasible_point(reduced, reduced_rhs);
  if (!point) return {SolveStatus::Infeasible, std::nullopt};

  const bool exact = system.backend() == Backend::Exact;
  for (std::size_t r = 0; r < linear.matrix.size(); ++r) {
    Rational lhs(0);
    for (std::size_t c = 0; c < point->size(); ++c) {
      if (sgn(linear.matrix[r][c]) != 0) lhs += (*point)[c];
    }
    const bool holds = exact ? lhs == linear.rhs[r] : std::fabs(lhs.get_d() - linear.rhs_float[r]) <= kNumericTolerance;
    if (!holds) return {SolveStatus::Infeasible, std::nullopt};
  }

  std::vector<IgnitionIndex> indices;
  std::vector<Scalar> weights;
  for (std::size_t c = 0; c < point->size(); ++c) {
    if (sgn((*point)[c]) == 0) continue;
    indices.push_back(s.indices()[c]);
    weights.emplace_back((*point)[c]);
  }
  return {SolveStatus::Feasible, GaugeDistribution(gamma, std::move(indices), std::move(weights))};
}

namespace {

GaugeSetSolution collect(const ProbabilitySystem& system, std::vector<GaugeSolution>& solved) {
  GaugeSetSolution out;
  std::vector<GaugeDistribution> gauges;
  for (std::size_t g = 0; g < solved.size(); ++g) {
    if (solved[g].status == SolveStatus::Feasible) {
      gauges.push_back(std::move(*solved[g].gauge));
    } else {
      out.failed.push_back(static_cast<int>(g));
    }
  }
  if (out.failed.empty()) out.gauges.emplace(system.regions(), system.setting_count(), std::move(gauges));
  return out;
}

}  // namespace

GaugeSetSolution solve_all_gauges_serial(const ProbabilitySystem& system, const WorkingSet* support) {
  std::optional<WorkingSet> storage;
  const WorkingSet& s = resolve_support(system, support, storage);
  std::vector<GaugeSolution> solved(static_cast<std::size_t>(system.configuration_count()));
  for (int g = 0; g < system.configuration_count(); ++g) solved[g] = solve_gauge(system, g, &s);
  return collect(system, solved);
}

GaugeSetSolution solve_all_gauges(const ProbabilitySystem& system, const WorkingSet* support) {
  std::optional<WorkingSet> storage;
  const WorkingSet& s = resolve_support(system, support, storage);
  const int count = system.configuration_count();
  std::vector<GaugeSolution> solved(static_cast<std::size_t>(count));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int g = 0; g < count; ++g) {
    try {
      solved[g] = solve_gauge(system, g, &s);
    } catch (...) {
#pragma omp critical(gaugesim_solve_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return collect(system, solved);
}

namespace {

using TargetBits = std::bitset<std::size_t{1} << kMaxSharedSearchBits>;

class SharedSupportSearch {
 public:
  SharedSupportSearch(const ProbabilitySystem& system, std::uint64_t budget)
      : system_(system), n_(system.regions()), k_(system.setting_count()), budget_(budget) {
    const int configs = n_ * k_;
    required_.resize(static_cast<std::size_t>(configs));
    allowed_.resize(static_cast<std::size_t>(configs));
    const IgnitionIndex space = IgnitionIndex{1} << configs;
    covers_.resize(space);
    std::vector<SettingVector> columns;
    for (SettingIndex u = 0; u < system.setting_vector_count(); ++u) columns.push_back(decode_settings(u, n_, k_));
    auto positive = [&](OutcomeMask x, SettingIndex u) { return !system.at(x, u).is_zero(); };
    for (SettingIndex u = 0; u < columns.size(); ++u) {
      int count = 0;
      for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
        if (!positive(x, u)) continue;
        ++count;
        for (int i = 0; i < n_; ++i) required_[columns[u][i] + i * k_].set(target(x, u));
      }
      min_size_ = std::max<std::size_t>(min_size_, static_cast<std::size_t>(count));
    }
    for (IgnitionIndex j = 0; j < space; ++j) {
      std::vector<bool> clean(static_cast<std::size_t>(configs), true);
      for (SettingIndex u = 0; u < columns.size(); ++u) {
        const OutcomeMask x = project_outcome(j, columns[u], k_);
        if (positive(x, u)) {
          covers_[j].set(target(x, u));
        } else {
          for (int i = 0; i < n_; ++i) clean[columns[u][i] + i * k_] = false;
        }
      }
      bool useful = false;
      for (int g = 0; g < configs; ++g) {
        if (clean[g]) {
          allowed_[g].push_back(j);
          useful = true;
        }
      }
      if (useful) candidates_.push_back(j);
    }
  }

  std::optional<WorkingSet> run(std::size_t max_size) {
    for (std::size_t size = std::max<std::size_t>(min_size_, 1); size <= max_size; ++size) {
      chosen_.clear();
      if (auto found = extend(0, size)) return found;
      if (visited_ >= budget_) break;
    }
    return std::nullopt;
  }

 private:
  std::size_t target(OutcomeMask x, SettingIndex u) const { return u * system_.outcome_count() + x; }

  bool allowed(int gamma, IgnitionIndex j) const {
    const auto& list = allowed_[gamma];
    return std::binary_search(list.begin(), list.end(), j);
  }

  bool covers_everything() const {
    for (std::size_t g = 0; g < required_.size(); ++g) {
      TargetBits covered;
      for (IgnitionIndex j : chosen_) {
        if (allowed(static_cast<int>(g), j)) covered |= covers_[j];
      }
      if ((covered & required_[g]) != required_[g]) return false;
    }
    return true;
  }

  std::optional<WorkingSet> extend(std::size_t from, std::size_t size) {
    if (chosen_.size() == size) {
      ++visited_;
      if (!covers_everything()) return std::nullopt;
      WorkingSet support(n_, k_, chosen_);
      for (int g = 0; g < n_ * k_; ++g) {
        if (solve_gauge(system_, g, &support).status != SolveStatus::Feasible) return std::nullopt;
      }
      return support;
    }
    for (std::size_t c = from; c + (size - chosen_.size()) <= candidates_.size(); ++c) {
      if (visited_ >= budget_) return std::nullopt;
      chosen_.push_back(candidates_[c]);
      if (auto found = extend(c + 1, size)) return found;
      chosen_.pop_back();
    }
    return std::nullopt;
  }

  const ProbabilitySystem& system_;
  int n_;
  int k_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  std::size_t min_size_ = 0;
  std::vector<TargetBits> required_;                 // positive targets each configuration must reach
  std::vector<std::vector<IgnitionIndex>> allowed_;  // indices a configuration may weight
  std::vector<TargetBits> covers_;                   // positive targets an index reaches
  std::vector<IgnitionIndex> candidates_;
  std::vector<IgnitionIndex> chosen_;
};

}  // namespace

std::optional<WorkingSet> find_shared_support(const ProbabilitySystem& system, std::size_t max_size,
                                              std::uint64_t budget) {
  if (system.configuration_count() > kMaxSharedSearchBits) return std::nullopt;
  return SharedSupportSearch(system, budget).run(max_size);
}

}  // namespace gaugesim
