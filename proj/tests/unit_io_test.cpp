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

#include <filesystem>
#include <fstream>

#include "gaugesim/io.hpp"
#include "oracle.hpp"

namespace gaugesim {
namespace {

using nlohmann::json;

ErrorCode code_of(const std::function<void()>& action) {
  try {
    action();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::RangeError;
}

TEST(SystemJson, RoundTripExact) {
  for (const ProbabilitySystem& s : {pr_box(), w_xy(), singlet(), quasi_super_ghz(Scalar::ratio(1, 16))}) {
    const json doc = system_to_json(s);
    const ProbabilitySystem back = system_from_json(json::parse(doc.dump()));
    EXPECT_EQ(back.canonical_key(), s.canonical_key());
    EXPECT_EQ(back.labels(), s.labels());
  }
}

TEST(SystemJson, RoundTripFloat) {
  const double angles[] = {0.0, 0.7};
  const ProbabilitySystem s = epr_b(angles);
  const ProbabilitySystem back = system_from_json(json::parse(system_to_json(s).dump()));
  EXPECT_EQ(back.backend(), Backend::Float);
  for (std::size_t c = 0; c < s.table().size(); ++c) EXPECT_EQ(back.table()[c].to_double(), s.table()[c].to_double());
}

TEST(SystemJson, LabelsAndIndicesForSettings) {
  const json doc = {{"n", 1},
                    {"k", 2},
                    {"labels", {"a", "b"}},
                    {"table",
                     {{{"x", {0}}, {"u", {"a"}}, {"p", "1/3"}},
                      {{"x", {1}}, {"u", {0}}, {"p", "2/3"}},
                      {{"x", {0}}, {"u", {"b"}}, {"p", 0.25}},
                      {{"x", {1}}, {"u", {1}}, {"p", "0.75"}}}}};
  const ProbabilitySystem s = system_from_json(doc);
  EXPECT_EQ(s.at(0, std::vector<int>{0}).exact(), Rational(1, 3));
  EXPECT_EQ(s.at(0, std::vector<int>{1}).exact(), Rational(1, 4));
  EXPECT_EQ(s.at(1, std::vector<int>{1}).exact(), Rational(3, 4));
}

TEST(SystemJson, Errors) {
  json doc = system_to_json(pr_box());
  json missing = doc;
  missing["table"].erase(5);
  EXPECT_EQ(code_of([&] { system_from_json(missing); }), ErrorCode::MissingTarget);
  json duplicate = doc;
  duplicate["table"].push_back(doc["table"][0]);
  EXPECT_EQ(code_of([&] { system_from_json(duplicate); }), ErrorCode::ParseError);
  json unknown_label = doc;
  unknown_label["table"][0]["u"][0] = "zz";
  EXPECT_EQ(code_of([&] { system_from_json(unknown_label); }), ErrorCode::ParseError);
  json bad_scalar = doc;
  bad_scalar["scalar"] = "decimal";
  EXPECT_EQ(code_of([&] { system_from_json(bad_scalar); }), ErrorCode::ParseError);
  json short_entry = doc;
  short_entry["table"][0]["x"] = json::array({0});
  EXPECT_EQ(code_of([&] { system_from_json(short_entry); }), ErrorCode::WrongArity);
  json unnormalized = doc;
  unnormalized["table"][0]["p"] = "1/3";
  EXPECT_EQ(code_of([&] { system_from_json(unnormalized); }), ErrorCode::NormalizationViolation);
  EXPECT_EQ(code_of([&] { system_from_json(json::array()); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_system("/nonexistent/system.json"); }), ErrorCode::ParseError);
}

TEST(SystemJson, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "gaugesim_io_test.json";
  {
    std::ofstream out(path);
    out << system_to_json(ghz_xy()).dump(2);
  }
  EXPECT_EQ(load_system(path).canonical_key(), ghz_xy().canonical_key());
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_EQ(code_of([&] { load_system(path); }), ErrorCode::ParseError);
  std::filesystem::remove(path);
}

TEST(GaugeJson, Shape) {
  const json g = gauge_set_to_json(pr_box_reference_gauges());
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[0]["gamma"], 0);
  EXPECT_EQ(g[0]["support"], json::array({0, 15}));
  EXPECT_EQ(g[0]["weights"], json::array({"1/2", "1/2"}));
  EXPECT_EQ(scalar_to_json(Scalar(0.5)), json(0.5));
}

TEST(WorkingSetJson, ObjectAndList) {
  EXPECT_EQ(working_set_from_json(json::parse(R"({"support":[15,0,6,9]})"), 2, 2).indices(),
            (std::vector<IgnitionIndex>{0, 6, 9, 15}));
  EXPECT_EQ(working_set_from_json(json::parse("[1,2]"), 1, 2).size(), 2u);
  EXPECT_EQ(code_of([] { working_set_from_json(json::parse(R"({"other":1})"), 1, 2); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { working_set_from_json(json::parse("[16]"), 2, 2); }), ErrorCode::RangeError);
}

}  // namespace
}  // namespace gaugesim
