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


// gaugesim: command-line front end.
//
// Exit codes: 0 success, 2 validation failure, 3 infeasible gauge or plan,
// 64 usage error (including unknown catalog entries).

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gaugesim/gaugesim.hpp"
#include "gaugesim/io.hpp"

namespace {

using nlohmann::json;
using namespace gaugesim;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUsage = 64;

// Sweep bisection stops once the bracket is narrower than this.
constexpr double kSweepTolerance = 1e-4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Result of a verb: report and exit status.
struct Outcome {
  json report;
  int status = kExitOk;
  std::string csv;  // used instead of the report when non-empty
};

struct Options {
  std::string system_path;
  std::string catalog_name;
  std::vector<std::string> params;
  std::string out;
  std::string format = "json";
  std::string settings;
  std::uint64_t runs = 10000;
  std::uint64_t seed = 1;
  std::string steps = "1";
  std::string support = "full";
  std::string plan;
  std::optional<int> force_gauge;
  std::string param_range;
  bool bisect_chsh = false;
  std::string catalog_action;
  std::string catalog_entry;
};

json base_report(const Options& o) {
  json r;
  r["schema"] = kReportSchema;
  r["source"] = o.catalog_name.empty() ? "file:" + o.system_path : "catalog:" + o.catalog_name;
  return r;
}

CatalogParams parse_params(const std::vector<std::string>& items) {
  CatalogParams params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects NAME=VALUE, got '" + item + "'");
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return params;
}

ProbabilitySystem load_input(const Options& o) {
  if (!o.catalog_name.empty()) return build_catalog_system(o.catalog_name, parse_params(o.params));
  if (!o.params.empty()) throw UsageError("--param applies to --catalog only");
  return load_system(o.system_path);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, sep);) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    out.push_back(item);
  }
  return out;
}

SettingVector parse_settings(const ProbabilitySystem& s, const std::string& text) {
  const auto items = split(text, ',');
  if (static_cast<int>(items.size()) != s.regions()) {
    throw UsageError("--settings needs " + std::to_string(s.regions()) + " comma-separated settings");
  }
  SettingVector u;
  for (const auto& item : items) u.push_back(s.setting_from_label(item));
  return u;
}

json labels_of(const ProbabilitySystem& s, const SettingVector& u) {
  json out = json::array();
  for (int k : u) out.push_back(s.labels()[k]);
  return out;
}

std::string outcome_string(OutcomeMask x, int regions) {
  std::string bits;
  for (int i = 0; i < regions; ++i) bits.push_back(static_cast<char>('0' + outcome_bit(x, i)));
  return bits;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<WorkingSet> support_policy(const ProbabilitySystem& s, const std::string& policy) {
  if (policy == "full") return std::nullopt;
  if (policy == "double-plateau") {
    if (s.regions() != 2) throw UsageError("the double-plateau support needs a two-region system");
    return double_plateau_support(s.setting_count());
  }
  if (policy == "shared") {
    auto shared = find_shared_support(s);
    if (!shared) throw Error(ErrorCode::SupportTooSmall, "no shared working set within the search limits");
    return shared;
  }
  return load_working_set(policy, s.regions(), s.setting_count());
}

json chsh_json(const ProbabilitySystem& s, const ChshOptimum& best) {
  const auto& l = s.labels();
  return {{"value", best.value},
          {"tuple",
           {{"a", l[best.tuple.a]}, {"a_prime", l[best.tuple.a_prime]}, {"b", l[best.tuple.b]},
            {"b_prime", l[best.tuple.b_prime]}}}};
}

json certificates_json(const std::vector<BranchCertificate>& branches) {
  json out = json::array();
  for (const auto& b : branches) {
    out.push_back({{"branch", b.branch.path.empty() ? "root" : b.branch.describe()},
                   {"gauges", gauge_set_to_json(b.gauges)}});
  }
  return out;
}

// --- verbs -----------------------------------------------------------------

Outcome run_validate(const Options& o) {
  const ProbabilitySystem s = load_input(o);
  json r = base_report(o);
  const ConsistencyReport c = check_local_consistency(s);
  r["n"] = s.regions();
  r["k"] = s.setting_count();
  r["labels"] = s.labels();
  r["scalar"] = backend_name(s.backend());
  r["local_consistency"] = {
      {"consistent", c.consistent}, {"worst_region", c.worst_region}, {"worst_deviation", c.worst_deviation}};
  if (!c.consistent) {
    r["valid"] = false;
    r["error"] = error_code_name(ErrorCode::InconsistentMarginal);
    return {r, kExitValidation};
  }
  r["valid"] = true;
  return {r, kExitOk};
}

std::optional<MinStepsResult> plan_with_steps(const ProbabilitySystem& s, int steps) {
  const int leading = steps - 1;
  if (leading < 0 || leading >= s.regions()) return std::nullopt;
  std::vector<int> order;
  std::vector<bool> used(static_cast<std::size_t>(s.regions()), false);
  std::optional<MinStepsResult> found;
  const std::function<void()> extend = [&] {
    if (found) return;
    if (static_cast<int>(order.size()) == leading) {
      CollapsePlan plan{order};
      if (auto certs = certify_plan(s, plan)) found = MinStepsResult{steps, plan, *certs};
      return;
    }
    for (int region = 0; region < s.regions() && !found; ++region) {
      if (used[region]) continue;
      used[region] = true;
      order.push_back(region);
      extend();
      order.pop_back();
      used[region] = false;
    }
  };
  extend();
  return found;
}

Outcome run_gauges(const Options& o) {
  const ProbabilitySystem s = load_input(o);
  json r = base_report(o);
  if (o.steps == "1") {
    const std::optional<WorkingSet> support = support_policy(s, o.support);
    const GaugeSetSolution sol = solve_all_gauges(s, support ? &*support : nullptr);
    r["steps"] = 1;
    r["support_policy"] = o.support;
    if (support) r["support"] = support->indices();
    if (!sol.feasible()) {
      r["status"] = "Infeasible";
      r["failed"] = sol.failed;
      return {r, kExitInfeasible};
    }
    const GaugeConsistency check = verify_consistency(s, *sol.gauges);
    r["status"] = "Feasible";
    r["gauges"] = gauge_set_to_json(*sol.gauges);
    r["verification"] = {{"exact", check.exact}, {"max_deviation", check.max_deviation}};
    return {r, kExitOk};
  }
  if (o.support != "full") throw UsageError("--support applies to one-step gauges only");
  std::optional<MinStepsResult> found;
  if (o.steps == "auto") {
    found = find_min_steps(s);
  } else {
    int steps = 0;
    const auto [ptr, ec] = std::from_chars(o.steps.data(), o.steps.data() + o.steps.size(), steps);
    if (ec != std::errc() || ptr != o.steps.data() + o.steps.size() || steps < 1) {
      throw UsageError("--steps expects 1, auto or a positive integer");
    }
    found = plan_with_steps(s, steps);
  }
  if (!found) {
    r["status"] = "Infeasible";
    r["steps"] = o.steps;
    return {r, kExitInfeasible};
  }
  r["status"] = "Feasible";
  r["steps"] = found->steps;
  r["plan"] = found->plan.to_string();
  r["branches"] = certificates_json(found->branches);
  return {r, kExitOk};
}

Outcome run_collapse(const Options& o) {
  const ProbabilitySystem s = load_input(o);
  if (o.settings.empty()) throw UsageError("collapse needs --settings");
  const SettingVector u = parse_settings(s, o.settings);
  const CollapsePlan plan = o.plan.empty() ? find_min_steps(s).plan : CollapsePlan::parse(o.plan);
  std::optional<WorkingSet> support;
  if (o.support != "full") {
    if (plan.steps() != 1) throw UsageError("--support applies to one-step plans only");
    support = support_policy(s, o.support);
  }
  json r = base_report(o);
  r["settings"] = labels_of(s, u);
  r["plan"] = plan.to_string();
  r["runs"] = o.runs;
  r["seed"] = o.seed;
  const PreparedCollapse prepared(s, plan, u, support ? &*support : nullptr);
  SimulationOptions options;
  options.runs = o.runs;
  options.seed = o.seed;
  options.forced_gamma = o.force_gauge;
  const SimulationResult result = simulate(s, prepared, options);
  json counts = json::object(), expected = json::object();
  for (OutcomeMask x = 0; x < s.outcome_count(); ++x) {
    counts[outcome_string(x, s.regions())] = result.counts.counts()[x];
    expected[outcome_string(x, s.regions())] = scalar_to_json(s.at(x, u));
  }
  r["counts"] = counts;
  r["expected"] = expected;
  r["tv_distance"] = result.tv_distance;
  json traces = json::array();
  for (const RunTrace& t : result.trace_sample) {
    json leading = json::array();
    for (const auto& step : t.leading) {
      leading.push_back({{"region", step.region}, {"setting", s.labels()[step.setting]}, {"outcome", step.outcome}});
    }
    traces.push_back({{"leading", leading},
                      {"ignition_gamma", t.ignition_gamma},
                      {"ignition_index", t.ignition_index},
                      {"outcome", outcome_string(t.outcome, s.regions())}});
  }
  r["trace_sample"] = traces;
  return {r, kExitOk};
}

json setting_metrics(const ProbabilitySystem& s, const SettingVector& u) {
  const std::uint32_t all = s.outcome_count() - 1U;
  json regions = json::array();
  for (int i = 0; i < s.regions(); ++i) regions.push_back(measurement_entropy(s, 1U << i, u));
  json entry = {{"settings", labels_of(s, u)},
                {"s1", {{"joint", measurement_entropy(s, all, u)}, {"regions", regions}}},
                {"s_n", s.regions() >= 2 ? json(multivariate_information(s, all, u)) : json(nullptr)},
                {"total_entanglement", total_entanglement(s, u)}};
  if (s.regions() <= kMaxAtomRegions) {
    const auto mu = atom_measures(s, u);
    json atoms = json::object();
    for (std::uint32_t m = 1; m <= all; ++m) atoms[std::to_string(m)] = mu[m];
    entry["atoms"] = atoms;
  }
  return entry;
}

Outcome run_metrics(const Options& o) {
  const ProbabilitySystem s = load_input(o);
  if (!is_locally_consistent(s)) throw Error(ErrorCode::InconsistentMarginal, "metrics need a locally consistent system");
  std::vector<SettingVector> vectors;
  if (!o.settings.empty()) {
    vectors.push_back(parse_settings(s, o.settings));
  } else {
    for (SettingIndex u = 0; u < s.setting_vector_count(); ++u) {
      vectors.push_back(decode_settings(u, s.regions(), s.setting_count()));
    }
  }
  if (o.format == "csv") {
    std::string csv = "setting,s1,s_n,total_entanglement\n";
    const std::uint32_t all = s.outcome_count() - 1U;
    for (const auto& u : vectors) {
      std::string label;
      for (int k : u) label += (label.empty() ? "" : ";") + s.labels()[k];
      csv += label + "," + format_double(measurement_entropy(s, all, u)) + "," +
             (s.regions() >= 2 ? format_double(multivariate_information(s, all, u)) : "") + "," +
             format_double(total_entanglement(s, u)) + "\n";
    }
    return {json(), kExitOk, csv};
  }
  json r = base_report(o);
  json per_setting = json::array();
  for (const auto& u : vectors) per_setting.push_back(setting_metrics(s, u));
  r["per_setting"] = per_setting;
  json pairs = json::array();
  for (int i = 0; i < s.regions(); ++i) {
    for (int j = i + 1; j < s.regions(); ++j) {
      const int kept[] = {i, j};
      pairs.push_back({{"regions", {i, j}}, {"matrix", s2_matrix(marginal(s, kept).system)}});
    }
  }
  r["s2_matrix"] = pairs;
  if (s.regions() == 2 && s.setting_count() >= 2) r["chsh_max"] = chsh_json(s, chsh_max(s));
  const EntanglementScheme scheme = entanglement_scheme(s);
  json counts = json::object();
  for (int m = 2; m <= s.regions(); ++m) counts[std::to_string(m)] = scheme.counts[m];
  r["scheme"] = {{"counts", counts},
                 {"degree", scheme.degree},
                 {"maximally_entangled", scheme.maximally_entangled},
                 {"max_total_entanglement", scheme.max_total_entanglement}};
  r["classification"] = classification_name(classify(s).kind);
  return {r, kExitOk};
}

Outcome run_classify(const Options& o) {
  const ProbabilitySystem s = load_input(o);
  if (!is_locally_consistent(s)) throw Error(ErrorCode::InconsistentMarginal, "classification needs a locally consistent system");
  const ClassificationResult c = classify(s);
  json r = base_report(o);
  r["classification"] = classification_name(c.kind);
  r["max_branch_chsh"] = c.max_branch_chsh;
  if (c.witness) {
    r["witness"] = {{"branch", c.witness->path.empty() ? "root" : c.witness->describe()},
                    {"chsh", chsh_json(c.witness->system, *c.witness_chsh)}};
  }
  return {r, kExitOk};
}

Outcome run_sweep(const Options& o) {
  if (o.catalog_name.empty()) throw UsageError("sweep needs --catalog");
  const auto eq = o.param_range.find('=');
  if (eq == std::string::npos) throw UsageError("--param-range expects NAME=v1,v2,...");
  const std::string name = o.param_range.substr(0, eq);
  const auto values = split(o.param_range.substr(eq + 1), ',');
  if (values.empty()) throw UsageError("--param-range lists no values");
  const CatalogEntry& entry = find_catalog_entry(o.catalog_name);
  bool declared = false;
  for (const auto& p : entry.params) declared = declared || p.name == name;
  if (!declared) throw UsageError("'" + entry.name + "' has no parameter '" + name + "'");
  const CatalogParams fixed = parse_params(o.params);
  const auto build = [&](const std::string& value) {
    CatalogParams params = fixed;
    params[name] = value;
    return build_catalog_system(o.catalog_name, params);
  };

  json rows = json::array();
  std::string csv = name + ",min_steps,max_branch_chsh,total_entanglement,classification\n";
  for (const auto& value : values) {
    const ProbabilitySystem s = build(value);
    const MinStepsResult steps = find_min_steps(s);
    const ClassificationResult c = classify(s);
    const EntanglementScheme scheme = entanglement_scheme(s);
    rows.push_back({{name, value},
                    {"min_steps", steps.steps},
                    {"max_branch_chsh", c.max_branch_chsh},
                    {"total_entanglement", scheme.max_total_entanglement},
                    {"classification", classification_name(c.kind)}});
    csv += value + "," + std::to_string(steps.steps) + "," + format_double(c.max_branch_chsh) + "," +
           format_double(scheme.max_total_entanglement) + "," + std::string(classification_name(c.kind)) + "\n";
  }
  json r = base_report(o);
  r["parameter"] = name;
  r["rows"] = rows;
  if (o.bisect_chsh) {
    const double lo = rational_to_double(parse_rational(values.front()));
    const double hi = rational_to_double(parse_rational(values.back()));
    const auto crossing = bisect_tsirelson_crossing(
        [&](double v) { return build(format_double(v)); }, lo, hi, kSweepTolerance);
    if (crossing) {
      r["crossing"] = {{name, crossing->parameter},
                       {"max_branch_chsh", crossing->max_branch_chsh},
                       {"iterations", crossing->iterations},
                       {"tolerance", kSweepTolerance}};
      csv += "# crossing " + name + "=" + format_double(crossing->parameter) + "\n";
    } else {
      r["crossing"] = nullptr;
      csv += "# crossing none\n";
    }
  }
  if (o.format == "csv") return {json(), kExitOk, csv};
  return {r, kExitOk};
}

json entry_json(const CatalogEntry& e) {
  json params = json::array();
  for (const auto& p : e.params) params.push_back({{"name", p.name}, {"default", p.default_value}, {"help", p.help}});
  return {{"name", e.name}, {"summary", e.summary}, {"params", params}};
}

Outcome run_catalog(const Options& o) {
  json r;
  r["schema"] = kReportSchema;
  if (o.catalog_action == "list") {
    json entries = json::array();
    for (const auto& e : catalog_entries()) entries.push_back(entry_json(e));
    r["entries"] = entries;
    return {r, kExitOk};
  }
  if (o.catalog_entry.empty()) throw UsageError("catalog " + o.catalog_action + " needs an entry name");
  if (o.catalog_action == "show") {
    r["entry"] = entry_json(find_catalog_entry(o.catalog_entry));
    return {r, kExitOk};
  }
  if (o.catalog_action == "emit") return {system_to_json(build_catalog_system(o.catalog_entry, parse_params(o.params))), kExitOk};
  throw UsageError("catalog action must be list, show or emit");
}

void emit(const Outcome& outcome, const Options& o) {
  const std::string text = outcome.csv.empty() ? outcome.report.dump(2) + "\n" : outcome.csv;
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw UsageError("cannot write " + o.out);
  file << text;
}

int error_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownEntry: return kExitUsage;
    case ErrorCode::InfeasibleBranch:
    case ErrorCode::SupportTooSmall: return kExitInfeasible;
    default: return kExitValidation;
  }
}

void apply_thread_setting() {
  const char* env = std::getenv("GAUGESIM_THREADS");
  if (env == nullptr || *env == '\0') return;
  int threads = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
  if (ec != std::errc() || ptr != text.data() + text.size() || threads < 1) {
    throw UsageError("GAUGESIM_THREADS must be a positive integer");
  }
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Build, validate, collapse and measure stochastic gauge systems"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.add_option("--system", o.system_path, "System JSON file");
  app.add_option("--catalog", o.catalog_name, "Catalog entry name");
  app.add_option("--param", o.params, "Catalog parameter NAME=VALUE (repeatable)");
  app.add_option("--out", o.out, "Write the report to FILE");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* validate = app.add_subcommand("validate", "Check normalization and local consistency");
  auto* gauges = app.add_subcommand("gauges", "Solve gauge distributions");
  gauges->add_option("--steps", o.steps, "1, auto or a number of steps");
  gauges->add_option("--support", o.support, "full, double-plateau, shared or a working-set FILE");
  auto* collapse = app.add_subcommand("collapse", "Simulate collapses at one setting vector");
  collapse->add_option("--settings", o.settings, "Comma-separated setting labels");
  collapse->add_option("--runs", o.runs, "Number of runs");
  collapse->add_option("--seed", o.seed, "Random seed");
  collapse->add_option("--plan", o.plan, "Leading regions then 'final', e.g. 2,final");
  collapse->add_option("--force-gauge", o.force_gauge, "Ignition configuration gamma");
  collapse->add_option("--support", o.support, "Working set for one-step plans");
  auto* metrics = app.add_subcommand("metrics", "Entropies, atoms, entanglement and CHSH");
  metrics->add_option("--settings", o.settings, "Restrict to one setting vector");
  auto* classify_cmd = app.add_subcommand("classify", "Separable, quantum-compatible or super-quantum");
  auto* sweep = app.add_subcommand("sweep", "Scan one catalog parameter");
  sweep->add_option("--param-range", o.param_range, "NAME=v1,v2,...")->required();
  sweep->add_flag("--bisect-chsh", o.bisect_chsh, "Locate the 2 sqrt 2 crossing between the end points");
  auto* catalog = app.add_subcommand("catalog", "List, show or emit catalog systems");
  catalog->add_option("action", o.catalog_action, "list, show or emit")->required()->check(
      CLI::IsMember({"list", "show", "emit"}));
  catalog->add_option("name", o.catalog_entry, "Entry name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const bool has_system = !o.system_path.empty(), has_catalog = !o.catalog_name.empty();
  const std::vector<std::pair<CLI::App*, std::function<Outcome(const Options&)>>> verbs = {
      {validate, run_validate}, {gauges, run_gauges},         {collapse, run_collapse}, {metrics, run_metrics},
      {classify_cmd, run_classify}, {sweep, run_sweep}, {catalog, run_catalog}};
  try {
    if (has_system && has_catalog) throw UsageError("give exactly one of --system and --catalog");
    apply_thread_setting();
    for (const auto& [command, action] : verbs) {
      if (!command->parsed()) continue;
      if (command != catalog && command != sweep && !has_system && !has_catalog) {
        throw UsageError("give exactly one of --system and --catalog");
      }
      const Outcome outcome = action(o);
      emit(outcome, o);
      return outcome.status;
    }
    std::cerr << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    const json r = {{"schema", kReportSchema}, {"error", error_code_name(e.code())}, {"message", e.what()}};
    std::cout << r.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return error_status(e.code());
  }
}
