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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "veat/battery.hpp"

namespace veat {

// Machine formats carry full precision (shortest round-trip decimals); the
// Markdown report rounds to 4 decimal places.

nlohmann::json to_json(const TestResult& r);
TestResult test_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BatteryResults& results);
BatteryResults results_from_json(const nlohmann::json& j);

// Canonical results.json contents.
std::string results_json_text(const BatteryResults& results);

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, "" otherwise.
std::string significance_stars(double p);

struct ResultRow {
  std::string test;
  double effect_size = 0.0;
  double p_value = 1.0;
  PValueMethod method = PValueMethod::exact;
  std::uint64_t iterations = 0;
  EffectClass classification = EffectClass::neutral;
};

struct CorrelationRow {
  std::string group;
  std::string axis;
  double r = 0.0;
  std::size_t n = 0;
};

// Long format heatmap cell; `axis` is the comparison group.
struct ComparisonCell {
  std::string scenario;
  Condition condition = Condition::control;
  std::string axis;
  double effect_size = 0.0;
};

struct ReportBundle {
  std::vector<ResultRow> results_table;
  std::vector<CorrelationRow> correlation_table;
  std::vector<ComparisonCell> comparison_matrix;  // empty when no comparisons ran
  std::string summary;
};

ReportBundle build_report(const BatteryResults& results);

std::string results_csv(const BatteryResults& results);
std::string correlations_csv(const BatteryResults& results);
std::string comparisons_csv(const BatteryResults& results);
std::string report_markdown(const BatteryResults& results);

// Each writes into `dir` and returns the files written. CSV files for empty
// tables are skipped.
std::vector<std::filesystem::path> emit_csv(const BatteryResults& results,
                                            const std::filesystem::path& dir);
std::filesystem::path emit_json(const BatteryResults& results, const std::filesystem::path& dir);
std::filesystem::path emit_markdown(const BatteryResults& results,
                                    const std::filesystem::path& dir);
std::filesystem::path emit_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

RunManifest read_manifest(const std::filesystem::path& path);
BatteryResults read_results_json(const std::filesystem::path& path);

// Human-readable differences between two runs, e.g. p-values that moved
// after a seed change. Empty when the results are identical.
std::vector<std::string> diff_results(const BatteryResults& before, const BatteryResults& after);
std::vector<std::string> diff_manifests(const RunManifest& before, const RunManifest& after);

}  // namespace veat
