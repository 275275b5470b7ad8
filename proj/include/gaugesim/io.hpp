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

#include <filesystem>

#include <json.hpp>

#include "gaugesim/gauge.hpp"
#include "gaugesim/system.hpp"

namespace gaugesim {

inline constexpr const char* kReportSchema = "gaugesim/1";

// {"n","k","labels","scalar":"rational"|"float","table":[{"x":[..],"u":[..],"p":"1/4"|0.25}]}
// Settings in "u" may be indices or labels. Throws Error(MissingTarget) when
// a target is absent, ParseError on malformed input.
ProbabilitySystem system_from_json(const nlohmann::json& document);
nlohmann::json system_to_json(const ProbabilitySystem& system);
ProbabilitySystem load_system(const std::filesystem::path& path);

nlohmann::json scalar_to_json(const Scalar& value);

// {"gamma","support":[j...],"weights":["p/q"...]}
nlohmann::json gauge_to_json(const GaugeDistribution& gauge);
nlohmann::json gauge_set_to_json(const GaugeSet& gauges);

// A bare list of indices or {"support":[...]}.
WorkingSet working_set_from_json(const nlohmann::json& document, int regions, int setting_count);
WorkingSet load_working_set(const std::filesystem::path& path, int regions, int setting_count);

}  // namespace gaugesim
