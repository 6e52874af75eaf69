// Copyright 2026 The VEAT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "veat/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "veat/csv.hpp"
#include "veat/errors.hpp"

namespace veat {

using nlohmann::json;

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_double(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

EffectClass parse_effect_class(const std::string& s) {
  for (auto c : {EffectClass::neutral, EffectClass::small, EffectClass::medium, EffectClass::large}) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError("unknown effect class '" + s + "'");
}

json class_json(const std::optional<EffectClass>& c) {
  return c ? json(std::string(to_string(*c))) : json(nullptr);
}

std::optional<EffectClass> class_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_effect_class(j.get<std::string>());
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string fixed4(double v) { return fmt::format("{:.4f}", v); }

std::string fixed4(const std::optional<double>& v) { return v ? fixed4(*v) : "n/a"; }

}  // namespace

json to_json(const TestResult& r) {
  json items = json::array();
  for (const auto& s : r.item_scores) items.push_back({{"video_id", s.video_id}, {"score", s.score}});
  return {
      {"kind", std::string(to_string(r.kind))},
      {"statistic", r.statistic},
      {"effect_size", r.effect_size},
      {"p_value", r.p_value},
      {"method", std::string(to_string(r.method))},
      {"iterations", r.iterations},
      {"partitions", r.partitions},
      {"seed", r.seed},
      {"tie_rule", std::string(to_string(r.tie_rule))},
      {"std_divisor", std::string(to_string(r.std_divisor))},
      {"group_means", {{"x", r.mean_x}, {"y", optional_json(r.mean_y)}}},
      {"pooled_std", r.pooled_std},
      {"item_scores", std::move(items)},
  };
}

TestResult test_result_from_json(const json& j) {
  TestResult r;
  r.kind = parse_test_kind(j.at("kind").get<std::string>());
  r.statistic = j.at("statistic").get<double>();
  r.effect_size = j.at("effect_size").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.method = parse_method(j.at("method").get<std::string>());
  r.iterations = j.at("iterations").get<std::uint64_t>();
  r.partitions = j.at("partitions").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.tie_rule = parse_tie_rule(j.at("tie_rule").get<std::string>());
  r.std_divisor = parse_std_divisor(j.at("std_divisor").get<std::string>());
  r.mean_x = j.at("group_means").at("x").get<double>();
  r.mean_y = optional_double(j.at("group_means").at("y"));
  r.pooled_std = j.at("pooled_std").get<double>();
  for (const auto& s : j.at("item_scores")) {
    r.item_scores.push_back({s.at("video_id").get<std::string>(), s.at("score").get<double>()});
  }
  return r;
}

json to_json(const BatteryResults& results) {
  json tests = json::array();
  for (const auto& t : results.tests) {
    tests.push_back({
        {"name", t.name},
        {"x", t.x},
        {"y", t.y.empty() ? json(nullptr) : json(t.y)},
        {"a", t.a},
        {"b", t.b},
        {"condition", t.condition ? json(std::string(to_string(*t.condition))) : json(nullptr)},
        {"group", t.group},
        {"label", t.label},
        {"classification", std::string(to_string(classify_effect(t.result.effect_size)))},
        {"result", to_json(t.result)},
    });
  }
  json correlations = json::array();
  for (const auto& c : results.correlations) {
    json pairs = json::array();
    for (const auto& p : c.result.pairs) {
      pairs.push_back({{"label", p.label},
                       {"effect_size", p.effect_size},
                       {"statistic_pct", p.statistic_pct}});
    }
    correlations.push_back({{"group", c.group},
                            {"axis", c.axis},
                            {"condition", std::string(to_string(c.condition))},
                            {"source", c.source},
                            {"r", c.result.r},
                            {"n", c.result.n},
                            {"pairs", std::move(pairs)}});
  }
  json comparisons = json::array();
  for (const auto& [group, c] : results.comparisons) {
    comparisons.push_back({{"group", group},
                           {"scenario", c.scenario},
                           {"d_control", c.d_control},
                           {"d_debias1", optional_json(c.d_debias1)},
                           {"d_debias2", optional_json(c.d_debias2)},
                           {"delta1", optional_json(c.delta1)},
                           {"delta2", optional_json(c.delta2)},
                           {"sign_flip1", c.sign_flip1},
                           {"sign_flip2", c.sign_flip2},
                           {"class_control", std::string(to_string(c.class_control))},
                           {"class_debias1", class_json(c.class_debias1)},
                           {"class_debias2", class_json(c.class_debias2)}});
  }
  return {{"schema_version", kBatterySchemaVersion},
          {"tests", std::move(tests)},
          {"correlations", std::move(correlations)},
          {"comparisons", std::move(comparisons)}};
}

BatteryResults results_from_json(const json& j) {
  BatteryResults out;
  try {
    for (const auto& t : j.at("tests")) {
      NamedTestResult n;
      n.name = t.at("name").get<std::string>();
      n.x = t.at("x").get<std::string>();
      n.y = t.at("y").is_null() ? "" : t.at("y").get<std::string>();
      n.a = t.at("a").get<std::string>();
      n.b = t.at("b").get<std::string>();
      if (!t.at("condition").is_null()) n.condition = parse_condition(t.at("condition").get<std::string>());
      n.group = t.at("group").get<std::string>();
      n.label = t.at("label").get<std::string>();
      n.result = test_result_from_json(t.at("result"));
      out.tests.push_back(std::move(n));
    }
    for (const auto& c : j.at("correlations")) {
      NamedCorrelation n;
      n.group = c.at("group").get<std::string>();
      n.axis = c.at("axis").get<std::string>();
      n.condition = parse_condition(c.at("condition").get<std::string>());
      n.source = c.at("source").get<std::string>();
      n.result.r = c.at("r").get<double>();
      n.result.n = c.at("n").get<std::size_t>();
      for (const auto& p : c.at("pairs")) {
        n.result.pairs.push_back({p.at("label").get<std::string>(), p.at("effect_size").get<double>(),
                                  p.at("statistic_pct").get<double>()});
      }
      out.correlations.push_back(std::move(n));
    }
    for (const auto& c : j.at("comparisons")) {
      NamedComparison n;
      n.group = c.at("group").get<std::string>();
      n.result.scenario = c.at("scenario").get<std::string>();
      n.result.d_control = c.at("d_control").get<double>();
      n.result.d_debias1 = optional_double(c.at("d_debias1"));
      n.result.d_debias2 = optional_double(c.at("d_debias2"));
      n.result.delta1 = optional_double(c.at("delta1"));
      n.result.delta2 = optional_double(c.at("delta2"));
      n.result.sign_flip1 = c.at("sign_flip1").get<bool>();
      n.result.sign_flip2 = c.at("sign_flip2").get<bool>();
      n.result.class_control = parse_effect_class(c.at("class_control").get<std::string>());
      n.result.class_debias1 = class_from_json(c.at("class_debias1"));
      n.result.class_debias2 = class_from_json(c.at("class_debias2"));
      out.comparisons.push_back(std::move(n));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed results JSON: ") + e.what());
  }
  return out;
}

std::string results_json_text(const BatteryResults& results) {
  return to_json(results).dump(2) + "\n";
}

json to_json(const RunManifest& m) {
  return {{"tool", m.tool},
          {"tool_version", m.tool_version},
          {"schema_version", m.schema_version},
          {"config_sha256", m.config_sha256},
          {"archives", m.archives},
          {"reference_data", m.reference_data},
          {"permutation",
           {{"seed", m.permutation.seed},
            {"iterations", m.permutation.iterations},
            {"exact_threshold", m.permutation.exact_threshold},
            {"tie_rule", std::string(to_string(m.permutation.tie_rule))}}},
          {"std_divisor", std::string(to_string(m.std_divisor))},
          {"test_count", m.test_count},
          {"results_sha256", m.results_sha256},
          {"generated_at", m.generated_at}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.tool = j.at("tool").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.schema_version = j.at("schema_version").get<int>();
    m.config_sha256 = j.at("config_sha256").get<std::string>();
    m.archives = j.at("archives").get<std::map<std::string, std::string>>();
    m.reference_data = j.at("reference_data").get<std::map<std::string, std::string>>();
    const json& p = j.at("permutation");
    m.permutation.seed = p.at("seed").get<std::uint64_t>();
    m.permutation.iterations = p.at("iterations").get<std::uint64_t>();
    m.permutation.exact_threshold = p.at("exact_threshold").get<std::uint64_t>();
    m.permutation.tie_rule = parse_tie_rule(p.at("tie_rule").get<std::string>());
    m.std_divisor = parse_std_divisor(j.at("std_divisor").get<std::string>());
    m.test_count = j.at("test_count").get<std::size_t>();
    m.results_sha256 = j.at("results_sha256").get<std::string>();
    m.generated_at = j.at("generated_at").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

ReportBundle build_report(const BatteryResults& results) {
  ReportBundle bundle;
  std::size_t significant = 0, large = 0;
  for (const auto& t : results.tests) {
    const auto cls = classify_effect(t.result.effect_size);
    bundle.results_table.push_back({t.name, t.result.effect_size, t.result.p_value,
                                    t.result.method, t.result.iterations, cls});
    if (t.result.p_value < 0.05) ++significant;
    if (cls == EffectClass::large) ++large;
  }
  for (const auto& c : results.correlations) {
    bundle.correlation_table.push_back({c.group, c.axis, c.result.r, c.result.n});
  }
  for (const auto& [group, c] : results.comparisons) {
    bundle.comparison_matrix.push_back({c.scenario, Condition::control, group, c.d_control});
    if (c.d_debias1) bundle.comparison_matrix.push_back({c.scenario, Condition::debias1, group, *c.d_debias1});
    if (c.d_debias2) bundle.comparison_matrix.push_back({c.scenario, Condition::debias2, group, *c.d_debias2});
  }
  bundle.summary = fmt::format(
      "{} association tests: {} significant at p < 0.05, {} with large effects (|d| >= 0.8). "
      "{} correlations, {} debias comparisons.",
      results.tests.size(), significant, large, results.correlations.size(),
      results.comparisons.size());
  return bundle;
}

std::string results_csv(const BatteryResults& results) {
  std::string out = csv::format_row({"test", "kind", "x", "y", "a", "b", "group", "label",
                                     "condition", "statistic", "effect_size", "p_value",
                                     "method", "iterations", "partitions", "seed", "tie_rule",
                                     "std_divisor", "mean_x", "mean_y", "pooled_std",
                                     "classification"});
  for (const auto& t : results.tests) {
    const auto& r = t.result;
    out += csv::format_row({t.name, std::string(to_string(r.kind)), t.x, t.y, t.a, t.b, t.group,
                            t.label, t.condition ? std::string(to_string(*t.condition)) : "",
                            csv::format_double(r.statistic), csv::format_double(r.effect_size),
                            csv::format_double(r.p_value), std::string(to_string(r.method)),
                            std::to_string(r.iterations), std::to_string(r.partitions),
                            std::to_string(r.seed), std::string(to_string(r.tie_rule)),
                            std::string(to_string(r.std_divisor)), csv::format_double(r.mean_x),
                            r.mean_y ? csv::format_double(*r.mean_y) : "",
                            csv::format_double(r.pooled_std),
                            std::string(to_string(classify_effect(r.effect_size)))});
  }
  return out;
}

std::string correlations_csv(const BatteryResults& results) {
  std::string out = csv::format_row({"group", "axis", "condition", "source", "r", "n"});
  for (const auto& c : results.correlations) {
    out += csv::format_row({c.group, c.axis, std::string(to_string(c.condition)), c.source,
                            csv::format_double(c.result.r), std::to_string(c.result.n)});
  }
  return out;
}

std::string comparisons_csv(const BatteryResults& results) {
  std::string out = csv::format_row({"scenario", "condition", "axis", "d"});
  for (const auto& cell : build_report(results).comparison_matrix) {
    out += csv::format_row({cell.scenario, std::string(to_string(cell.condition)), cell.axis,
                            csv::format_double(cell.effect_size)});
  }
  return out;
}

std::string report_markdown(const BatteryResults& results) {
  const ReportBundle bundle = build_report(results);
  std::ostringstream md;
  md << "# Association test report\n\n" << bundle.summary << "\n\n";

  md << "## Association tests\n\n"
     << "| Test | d | Sig. | p | Method | Effect |\n"
     << "|---|---:|:---:|---:|---|---|\n";
  for (const auto& row : bundle.results_table) {
    const std::string method =
        row.method == PValueMethod::exact ? "exact"
                                          : fmt::format("monte carlo ({})", row.iterations);
    md << "| " << row.test << " | " << fixed4(row.effect_size) << " | "
       << significance_stars(row.p_value) << " | " << fixed4(row.p_value) << " | " << method
       << " | " << to_string(row.classification) << " |\n";
  }
  md << "\nSignificance: *** p < 0.001, ** p < 0.01, * p < 0.05 (one-sided permutation test).\n";

  if (!bundle.correlation_table.empty()) {
    md << "\n## Correlations with reference statistics\n\n"
       << "| Group | Axis | r | n |\n|---|---|---:|---:|\n";
    for (const auto& row : bundle.correlation_table) {
      md << "| " << row.group << " | " << row.axis << " | " << fixed4(row.r) << " | " << row.n
         << " |\n";
    }
  }

  if (!results.comparisons.empty()) {
    md << "\n## Debias comparisons\n\n"
       << "| Group | Scenario | d control | d debias1 | delta1 | d debias2 | delta2 | Sign flip |\n"
       << "|---|---|---:|---:|---:|---:|---:|---|\n";
    for (const auto& [group, c] : results.comparisons) {
      std::string flips;
      if (c.sign_flip1) flips += "debias1";
      if (c.sign_flip2) flips += flips.empty() ? "debias2" : ", debias2";
      md << "| " << group << " | " << c.scenario << " | " << fixed4(c.d_control) << " | "
         << fixed4(c.d_debias1) << " | " << fixed4(c.delta1) << " | " << fixed4(c.d_debias2)
         << " | " << fixed4(c.delta2) << " | " << flips << " |\n";
    }
  }
  return md.str();
}

std::vector<std::filesystem::path> emit_csv(const BatteryResults& results,
                                            const std::filesystem::path& dir) {
  if (results.tests.empty()) throw ValidationError("no results to emit");
  std::vector<std::filesystem::path> written;
  written.push_back(dir / "results.csv");
  write_file(written.back(), results_csv(results));
  if (!results.correlations.empty()) {
    written.push_back(dir / "correlations.csv");
    write_file(written.back(), correlations_csv(results));
  }
  if (!results.comparisons.empty()) {
    written.push_back(dir / "comparisons.csv");
    write_file(written.back(), comparisons_csv(results));
  }
  return written;
}

std::filesystem::path emit_json(const BatteryResults& results, const std::filesystem::path& dir) {
  if (results.tests.empty()) throw ValidationError("no results to emit");
  const auto path = dir / "results.json";
  write_file(path, results_json_text(results));
  return path;
}

std::filesystem::path emit_markdown(const BatteryResults& results,
                                    const std::filesystem::path& dir) {
  if (results.tests.empty()) throw ValidationError("no results to emit");
  const auto path = dir / "report.md";
  write_file(path, report_markdown(results));
  return path;
}

std::filesystem::path emit_manifest(const RunManifest& manifest, const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  write_file(path, to_json(manifest).dump(2) + "\n");
  return path;
}

RunManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json_file(path));
}

BatteryResults read_results_json(const std::filesystem::path& path) {
  return results_from_json(read_json_file(path));
}

std::vector<std::string> diff_results(const BatteryResults& before, const BatteryResults& after) {
  std::vector<std::string> out;
  std::map<std::string, const NamedTestResult*> index;
  for (const auto& t : before.tests) index[t.name] = &t;
  for (const auto& t : after.tests) {
    auto it = index.find(t.name);
    if (it == index.end()) {
      out.push_back("test '" + t.name + "' added");
      continue;
    }
    const TestResult& a = it->second->result;
    const TestResult& b = t.result;
    if (a.p_value != b.p_value) {
      out.push_back(fmt::format("test '{}': p_value {} -> {}", t.name,
                                csv::format_double(a.p_value), csv::format_double(b.p_value)));
    }
    if (a.effect_size != b.effect_size) {
      out.push_back(fmt::format("test '{}': effect_size {} -> {}", t.name,
                                csv::format_double(a.effect_size),
                                csv::format_double(b.effect_size)));
    }
    if (a.statistic != b.statistic) out.push_back("test '" + t.name + "': statistic changed");
    if (a.seed != b.seed) out.push_back("test '" + t.name + "': seed changed");
    index.erase(it);
  }
  for (const auto& [name, _] : index) out.push_back("test '" + name + "' removed");
  if (before.correlations != after.correlations) out.push_back("correlations changed");
  if (before.comparisons != after.comparisons) out.push_back("comparisons changed");
  return out;
}

std::vector<std::string> diff_manifests(const RunManifest& before, const RunManifest& after) {
  std::vector<std::string> out;
  auto field = [&](const char* name, const auto& a, const auto& b) {
    if (a != b) out.push_back(std::string(name) + " differs");
  };
  field("tool_version", before.tool_version, after.tool_version);
  field("config_sha256", before.config_sha256, after.config_sha256);
  field("archives", before.archives, after.archives);
  field("reference_data", before.reference_data, after.reference_data);
  field("seed", before.permutation.seed, after.permutation.seed);
  field("iterations", before.permutation.iterations, after.permutation.iterations);
  field("exact_threshold", before.permutation.exact_threshold, after.permutation.exact_threshold);
  field("tie_rule", before.permutation.tie_rule, after.permutation.tie_rule);
  field("std_divisor", before.std_divisor, after.std_divisor);
  field("test_count", before.test_count, after.test_count);
  field("results_sha256", before.results_sha256, after.results_sha256);
  return out;
}

}  // namespace veat
