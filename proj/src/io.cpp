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

#include "gaugesim/io.hpp"

#include <fstream>
#include <optional>

#include "gaugesim/error.hpp"

namespace gaugesim {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

int setting_value(const json& item, const std::vector<std::string>& labels) {
  if (item.is_number_integer()) return item.get<int>();
  if (item.is_string()) {
    const auto text = item.get<std::string>();
    for (std::size_t s = 0; s < labels.size(); ++s) {
      if (labels[s] == text) return static_cast<int>(s);
    }
  }
  malformed("unknown setting " + item.dump());
}

Scalar probability_value(const json& item, Backend backend) {
  if (item.is_string()) {
    Rational q = parse_rational(item.get<std::string>());
    return backend == Backend::Exact ? Scalar(q) : Scalar(rational_to_double(q));
  }
  if (item.is_number()) {
    const double d = item.get<double>();
    return backend == Backend::Exact ? Scalar(snap_to_rational(d)) : Scalar(d);
  }
  malformed("probability must be a string or a number, got " + item.dump());
}

}  // namespace

ProbabilitySystem system_from_json(const json& doc) {
  try {
    if (!doc.is_object()) malformed("system document must be an object");
    const int n = doc.at("n").get<int>();
    const int k = doc.at("k").get<int>();
    if (n < 1 || n > 20 || k < 1) throw Error(ErrorCode::WrongArity, "bad n or k");
    std::vector<std::string> labels;
    if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
    if (labels.empty()) {
      for (int s = 0; s < k; ++s) labels.push_back(std::to_string(s));
    }
    if (static_cast<int>(labels.size()) != k) throw Error(ErrorCode::WrongArity, "labels must list k settings");
    Backend backend = Backend::Exact;
    if (doc.contains("scalar")) {
      const auto scalar = doc.at("scalar").get<std::string>();
      if (scalar == "float") {
        backend = Backend::Float;
      } else if (scalar != "rational") {
        malformed("scalar must be 'rational' or 'float'");
      }
    }
    SettingIndex vectors = 1;
    for (int i = 0; i < n; ++i) vectors *= static_cast<SettingIndex>(k);
    const std::uint32_t outcomes = 1U << n;
    std::vector<std::optional<Scalar>> cells(vectors * outcomes);
    for (const json& entry : doc.at("table")) {
      const json& xs = entry.at("x");
      const json& us = entry.at("u");
      if (!xs.is_array() || !us.is_array() || static_cast<int>(xs.size()) != n || static_cast<int>(us.size()) != n) {
        throw Error(ErrorCode::WrongArity, "entry " + entry.dump() + " does not have n outcomes and settings");
      }
      OutcomeMask x = 0;
      SettingVector u;
      for (int i = 0; i < n; ++i) {
        const int bit = xs[i].get<int>();
        if (bit != 0 && bit != 1) malformed("outcomes must be 0 or 1");
        x |= static_cast<OutcomeMask>(bit) << i;
        u.push_back(setting_value(us[i], labels));
      }
      auto& cell = cells[encode_settings(u, k) * outcomes + x];
      if (cell) malformed("duplicate entry " + entry.dump());
      cell = probability_value(entry.at("p"), backend);
    }
    std::vector<Scalar> table;
    table.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!cells[c]) {
        const SettingVector u = decode_settings(c / outcomes, n, k);
        std::string where = "x=";
        for (int i = 0; i < n; ++i) where += std::to_string((c % outcomes >> i) & 1U);
        where += " u=";
        for (int i = 0; i < n; ++i) where += (i ? "," : "") + labels[u[i]];
        throw Error(ErrorCode::MissingTarget, where);
      }
      table.push_back(*cells[c]);
    }
    return ProbabilitySystem(n, k, labels, backend, std::move(table));
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

json system_to_json(const ProbabilitySystem& system) {
  json table = json::array();
  const int n = system.regions();
  for (SettingIndex u = 0; u < system.setting_vector_count(); ++u) {
    const SettingVector uv = decode_settings(u, n, system.setting_count());
    for (OutcomeMask x = 0; x < system.outcome_count(); ++x) {
      json xs = json::array();
      json us = json::array();
      for (int i = 0; i < n; ++i) {
        xs.push_back(outcome_bit(x, i));
        us.push_back(system.labels()[uv[i]]);
      }
      table.push_back({{"x", xs}, {"u", us}, {"p", scalar_to_json(system.at(x, u))}});
    }
  }
  return {{"n", n},
          {"k", system.setting_count()},
          {"labels", system.labels()},
          {"scalar", backend_name(system.backend())},
          {"table", table}};
}

ProbabilitySystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    malformed(path.string() + ": " + e.what());
  }
  return system_from_json(doc);
}

json scalar_to_json(const Scalar& value) {
  if (value.is_exact()) return format_rational(value.exact());
  return value.to_double();
}

json gauge_to_json(const GaugeDistribution& gauge) {
  json weights = json::array();
  for (const auto& w : gauge.weights()) weights.push_back(scalar_to_json(w));
  return {{"gamma", gauge.gamma()}, {"support", gauge.support()}, {"weights", weights}};
}

json gauge_set_to_json(const GaugeSet& gauges) {
  json list = json::array();
  for (const auto& g : gauges.gauges()) list.push_back(gauge_to_json(g));
  return list;
}

WorkingSet working_set_from_json(const json& doc, int regions, int setting_count) {
  try {
    const json& list = doc.is_object() ? doc.at("support") : doc;
    return WorkingSet(regions, setting_count, list.get<std::vector<IgnitionIndex>>());
  } catch (const json::exception& e) {
    malformed(std::string("working set: ") + e.what());
  }
}

WorkingSet load_working_set(const std::filesystem::path& path, int regions, int setting_count) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    malformed(path.string() + ": " + e.what());
  }
  return working_set_from_json(doc, regions, setting_count);
}

}  // namespace gaugesim
