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

#include "gaugesim/system.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_set>

#include "gaugesim/error.hpp"

namespace gaugesim {

namespace {

constexpr int kMaxRegions = 20;
constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 26;

std::string describe_target(OutcomeMask x, const SettingVector& u, int regions) {
  std::string s = "x=";
  for (int i = 0; i < regions; ++i) s += static_cast<char>('0' + outcome_bit(x, i));
  s += " u=(";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? "," : "") + std::to_string(u[i]);
  return s + ")";
}

OutcomeMask insert_bit(OutcomeMask reduced, int position, int bit) {
  const OutcomeMask low = reduced & ((1U << position) - 1U);
  const OutcomeMask high = reduced >> position;
  return low | (static_cast<OutcomeMask>(bit) << position) | (high << (position + 1));
}

struct DropResult {
  ProbabilitySystem system;
  double deviation;
  bool consistent;
};

// Sums region `position` out. The value at setting 0 is kept; the spread over
// the other settings is the reported deviation.
DropResult drop_region(const ProbabilitySystem& system, int position) {
  const int n = system.regions();
  const int k = system.setting_count();
  const ProbabilitySystem::Generator sum_out = [&](OutcomeMask x, std::span<const int> u) {
    SettingVector full(u.begin(), u.end());
    full.insert(full.begin() + position, 0);
    return system.at(insert_bit(x, position, 0), full) + system.at(insert_bit(x, position, 1), full);
  };
  double deviation = 0.0;
  bool consistent = true;
  const std::uint32_t reduced_outcomes = 1U << (n - 1);
  SettingIndex reduced_vectors = 1;
  for (int i = 0; i < n - 1; ++i) reduced_vectors *= static_cast<SettingIndex>(k);
  for (SettingIndex ru = 0; ru < reduced_vectors; ++ru) {
    SettingVector u = decode_settings(ru, n - 1, k);
    for (OutcomeMask x = 0; x < reduced_outcomes; ++x) {
      Scalar reference = sum_out(x, u);
      for (int s = 1; s < k; ++s) {
        SettingVector full = u;
        full.insert(full.begin() + position, s);
        Scalar other = system.at(insert_bit(x, position, 0), full) + system.at(insert_bit(x, position, 1), full);
        deviation = std::max(deviation, abs_difference(reference, other));
        if (!approx_equal(reference, other)) consistent = false;
      }
    }
  }
  std::vector<std::string> labels = system.labels();
  return {ProbabilitySystem::from_generator(n - 1, k, labels, system.backend(), sum_out), deviation, consistent};
}

}  // namespace

SettingIndex encode_settings(std::span<const int> settings, int setting_count) {
  SettingIndex index = 0;
  for (std::size_t i = settings.size(); i-- > 0;) {
    if (settings[i] < 0 || settings[i] >= setting_count) {
      throw Error(ErrorCode::RangeError, "setting " + std::to_string(settings[i]) + " out of range");
    }
    index = index * static_cast<SettingIndex>(setting_count) + static_cast<SettingIndex>(settings[i]);
  }
  return index;
}

SettingVector decode_settings(SettingIndex index, int regions, int setting_count) {
  SettingVector u(static_cast<std::size_t>(regions));
  for (int i = 0; i < regions; ++i) {
    u[i] = static_cast<int>(index % static_cast<SettingIndex>(setting_count));
    index /= static_cast<SettingIndex>(setting_count);
  }
  return u;
}

ProbabilitySystem::ProbabilitySystem(int regions, int setting_count, std::vector<std::string> labels,
                                     Backend backend, std::vector<Scalar> table)
    : regions_(regions), setting_count_(setting_count), setting_vectors_(1), labels_(std::move(labels)),
      backend_(backend), table_(std::move(table)) {
  if (regions_ < 1 || regions_ > kMaxRegions) {
    throw Error(ErrorCode::WrongArity, "region count " + std::to_string(regions_) + " out of range");
  }
  if (setting_count_ < 1) throw Error(ErrorCode::WrongArity, "need at least one setting");
  for (int i = 0; i < regions_; ++i) {
    setting_vectors_ *= static_cast<SettingIndex>(setting_count_);
    if (setting_vectors_ * outcome_count() > kMaxTableSize) throw Error(ErrorCode::WrongArity, "table too large");
  }
  if (labels_.empty()) {
    for (int s = 0; s < setting_count_; ++s) labels_.push_back(std::to_string(s));
  }
  if (static_cast<int>(labels_.size()) != setting_count_) {
    throw Error(ErrorCode::WrongArity, "expected " + std::to_string(setting_count_) + " setting labels");
  }
  if (table_.size() != setting_vectors_ * outcome_count()) {
    throw Error(ErrorCode::WrongArity, "table has " + std::to_string(table_.size()) + " entries, expected " +
                                           std::to_string(setting_vectors_ * outcome_count()));
  }
  for (auto& p : table_) p = p.as(backend_);
  for (SettingIndex u = 0; u < setting_vectors_; ++u) {
    Scalar sum(backend_ == Backend::Exact ? Scalar(0) : Scalar(0.0));
    for (OutcomeMask x = 0; x < outcome_count(); ++x) {
      const Scalar& p = at(x, u);
      if (p.is_negative()) {
        throw Error(ErrorCode::NegativeProbability,
                    describe_target(x, decode_settings(u, regions_, setting_count_), regions_) + " has p=" +
                        p.to_string());
      }
      sum += p;
    }
    if (!approx_equal(sum, Scalar(1))) {
      SettingVector uv = decode_settings(u, regions_, setting_count_);
      std::string where = "u=(";
      for (std::size_t i = 0; i < uv.size(); ++i) where += (i ? "," : "") + std::to_string(uv[i]);
      throw Error(ErrorCode::NormalizationViolation, where + ") sums to " + sum.to_string());
    }
  }
}

ProbabilitySystem ProbabilitySystem::from_generator(int regions, int setting_count, std::vector<std::string> labels,
                                                    Backend backend, const Generator& probability) {
  if (regions < 1 || regions > kMaxRegions || setting_count < 1) {
    throw Error(ErrorCode::WrongArity, "bad system shape");
  }
  SettingIndex vectors = 1;
  for (int i = 0; i < regions; ++i) vectors *= static_cast<SettingIndex>(setting_count);
  const std::uint32_t outcomes = 1U << regions;
  std::vector<Scalar> table;
  table.reserve(vectors * outcomes);
  for (SettingIndex u = 0; u < vectors; ++u) {
    SettingVector uv = decode_settings(u, regions, setting_count);
    for (OutcomeMask x = 0; x < outcomes; ++x) table.push_back(probability(x, uv));
  }
  return ProbabilitySystem(regions, setting_count, std::move(labels), backend, std::move(table));
}

int ProbabilitySystem::setting_from_label(std::string_view label) const {
  for (int s = 0; s < setting_count_; ++s) {
    if (labels_[s] == label) return s;
  }
  int index = -1;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), index);
  if (ec == std::errc() && ptr == label.data() + label.size() && index >= 0 && index < setting_count_) return index;
  throw Error(ErrorCode::RangeError, "unknown setting '" + std::string(label) + "'");
}

std::string ProbabilitySystem::canonical_key() const {
  std::string key = std::to_string(regions_) + "|" + std::to_string(setting_count_) + "|";
  for (const auto& p : table_) {
    key += p.to_string();
    key += ';';
  }
  return key;
}

MarginalSystem marginal(const ProbabilitySystem& system, std::span<const int> kept) {
  std::set<int> keep(kept.begin(), kept.end());
  if (keep.empty() || *keep.begin() < 0 || *keep.rbegin() >= system.regions()) {
    throw Error(ErrorCode::RangeError, "marginal needs a non-empty subset of regions");
  }
  ProbabilitySystem current = system;
  for (int region = system.regions() - 1; region >= 0; --region) {
    if (keep.contains(region)) continue;
    DropResult dropped = drop_region(current, region);
    if (!dropped.consistent) throw InconsistentMarginalError(region, dropped.deviation);
    current = std::move(dropped.system);
  }
  return {std::vector<int>(keep.begin(), keep.end()), std::move(current)};
}

Scalar region_probability(const ProbabilitySystem& system, int region, int setting, int outcome) {
  if (region < 0 || region >= system.regions()) throw Error(ErrorCode::RangeError, "region out of range");
  SettingVector u(static_cast<std::size_t>(system.regions()), 0);
  u[region] = setting;
  const SettingIndex ui = encode_settings(u, system.setting_count());
  Scalar sum = system.backend() == Backend::Exact ? Scalar(0) : Scalar(0.0);
  for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
    if (outcome_bit(x, region) == outcome) sum += system.at(x, ui);
  }
  return sum;
}

namespace {

void consistency_walk(const ProbabilitySystem& system, const std::vector<int>& original, std::uint32_t mask,
                      std::unordered_set<std::uint32_t>& seen, ConsistencyReport& report) {
  if (system.regions() < 2 || !seen.insert(mask).second) return;
  for (int p = 0; p < system.regions(); ++p) {
    DropResult dropped = drop_region(system, p);
    if (dropped.deviation > report.worst_deviation || (!dropped.consistent && report.consistent)) {
      report.worst_deviation = std::max(report.worst_deviation, dropped.deviation);
      report.worst_region = original[p];
    }
    if (!dropped.consistent) {
      report.consistent = false;
      continue;
    }
    std::vector<int> rest = original;
    rest.erase(rest.begin() + p);
    consistency_walk(dropped.system, rest, mask & ~(1U << original[p]), seen, report);
  }
}

}  // namespace

ConsistencyReport check_local_consistency(const ProbabilitySystem& system) {
  ConsistencyReport report;
  std::vector<int> original(static_cast<std::size_t>(system.regions()));
  for (int i = 0; i < system.regions(); ++i) original[i] = i;
  std::unordered_set<std::uint32_t> seen;
  consistency_walk(system, original, (1U << system.regions()) - 1U, seen, report);
  return report;
}

bool is_totally_correlated(const ProbabilitySystem& system) {
  if (system.regions() != 2) throw Error(ErrorCode::WrongArity, "total correlation is defined for two regions");
  for (int s = 0; s < system.setting_count(); ++s) {
    const int u[2] = {s, s};
    if (!system.at(0b01, u).is_zero() || !system.at(0b10, u).is_zero()) return false;
  }
  return true;
}

bool is_separable(const ProbabilitySystem& system) {
  if (!is_locally_consistent(system)) return false;
  const int n = system.regions();
  const int k = system.setting_count();
  std::vector<Scalar> single(static_cast<std::size_t>(n * k * 2));
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < k; ++s) {
      for (int b = 0; b < 2; ++b) single[(i * k + s) * 2 + b] = region_probability(system, i, s, b);
    }
  }
  for (SettingIndex u = 0; u < system.setting_vector_count(); ++u) {
    SettingVector uv = decode_settings(u, n, k);
    for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
      Scalar product = system.backend() == Backend::Exact ? Scalar(1) : Scalar(1.0);
      for (int i = 0; i < n; ++i) product *= single[(i * k + uv[i]) * 2 + outcome_bit(x, i)];
      if (!approx_equal(product, system.at(x, u))) return false;
    }
  }
  return true;
}

ProbabilitySystem condition(const ProbabilitySystem& system, int region, int setting, int outcome) {
  if (system.regions() < 2) throw Error(ErrorCode::WrongArity, "cannot condition a one-region system");
  if (setting < 0 || setting >= system.setting_count() || (outcome != 0 && outcome != 1)) {
    throw Error(ErrorCode::RangeError, "conditioning setting or outcome out of range");
  }
  const Scalar branch = region_probability(system, region, setting, outcome);
  if (branch.is_zero()) {
    throw Error(ErrorCode::ZeroProbabilityBranch, "region " + std::to_string(region) + " setting " +
                                                      std::to_string(setting) + " outcome " +
                                                      std::to_string(outcome) + " has probability zero");
  }
  return ProbabilitySystem::from_generator(
      system.regions() - 1, system.setting_count(), system.labels(), system.backend(),
      [&](OutcomeMask x, std::span<const int> u) {
        SettingVector full(u.begin(), u.end());
        full.insert(full.begin() + region, setting);
        return system.at(insert_bit(x, region, outcome), full) / branch;
      });
}

ConditionedSystem ConditionedSystem::root(const ProbabilitySystem& system) {
  std::vector<int> remaining(static_cast<std::size_t>(system.regions()));
  for (int i = 0; i < system.regions(); ++i) remaining[i] = i;
  return {{}, std::move(remaining), system};
}

ConditionedSystem ConditionedSystem::then(int region, int setting, int outcome) const {
  auto it = std::find(remaining.begin(), remaining.end(), region);
  if (it == remaining.end()) throw Error(ErrorCode::RangeError, "region already conditioned");
  const int position = static_cast<int>(it - remaining.begin());
  ConditionedSystem next{path, remaining, condition(system, position, setting, outcome)};
  next.path.push_back({region, setting, outcome});
  next.remaining.erase(next.remaining.begin() + position);
  return next;
}

std::string ConditionedSystem::describe() const {
  if (path.empty()) return "root";
  std::string s;
  for (const auto& step : path) {
    if (!s.empty()) s += ",";
    s += std::to_string(step.region) + ":" + system.labels()[step.setting] + "=" + std::to_string(step.outcome);
  }
  return s;
}

}  // namespace gaugesim
