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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "veat/association.hpp"
#include "veat/embedding.hpp"
#include "veat/reference_data.hpp"
#include "veat/stats.hpp"

namespace veat {

inline constexpr int kBatterySchemaVersion = 1;

struct VeatTestSpec {
  std::string name;
  std::string x, y, a, b;
};

struct ScveatTestSpec {
  std::string name;
  std::string x, a, b;
  std::optional<Condition> condition;  // absent means control
  std::string group;                   // correlation / comparison group
  std::string label;                   // join key; defaults to normalized x

  Condition effective_condition() const { return condition.value_or(Condition::control); }
};

// Correlates the effect sizes of one SC-VEAT group against a reference axis.
//   axis: "occupations.<demographic axis>", "awards.<demographic axis>" or
//         "oasis.valence_mean"
//   source: "computed" uses the group's effect sizes; "reference" uses the
//           published OASIS effect sizes shipped with the reference data.
struct CorrelationSpec {
  std::string group;
  std::string axis;
  Condition condition = Condition::control;
  std::string source = "computed";
};

// Throws ValidationError for unknown sources or axes.
void validate_correlation_spec(const CorrelationSpec& spec);

struct BatteryConfig {
  int schema_version = kBatterySchemaVersion;
  std::vector<std::filesystem::path> archives;  // as written in the config
  std::vector<VeatTestSpec> veat_tests;
  std::vector<ScveatTestSpec> scveat_tests;
  std::vector<CorrelationSpec> correlations;
  PermutationConfig permutation;
  StdDivisor std_divisor = StdDivisor::sample;

  std::filesystem::path base_dir;  // archives resolve relative to this
  std::string source_bytes;        // raw config text, hashed into the manifest
};

BatteryConfig parse_battery_config(std::string_view text,
                                   const std::filesystem::path& base_dir = {});
BatteryConfig read_battery_config(const std::filesystem::path& path);

// Every concept name the battery's tests reference, sorted and unique.
std::vector<std::string> referenced_concepts(const BatteryConfig& config);

struct ResolvedBattery {
  BatteryConfig config;
  std::map<std::string, ConceptSet> concepts;
  ReferenceData reference;
  std::map<std::string, std::string> archive_checksums;  // config path -> sha256
};

// Validates a config against already-materialized concept sets.
ResolvedBattery resolve_battery(BatteryConfig config, std::map<std::string, ConceptSet> concepts,
                                ReferenceData reference);

// Reads the config and its archives, then resolves.
ResolvedBattery load_battery(const std::filesystem::path& config_path,
                             const ReferenceData& reference);
ResolvedBattery load_battery(BatteryConfig config, const ReferenceData& reference);

struct NamedTestResult {
  std::string name;
  std::string x, y, a, b;  // y empty for single-category tests
  std::optional<Condition> condition;
  std::string group;
  std::string label;
  TestResult result;

  friend bool operator==(const NamedTestResult&, const NamedTestResult&) = default;
};

struct NamedCorrelation {
  std::string group;
  std::string axis;
  Condition condition = Condition::control;
  std::string source;
  CorrelationResult result;

  friend bool operator==(const NamedCorrelation&, const NamedCorrelation&) = default;
};

struct NamedComparison {
  std::string group;
  ComparisonResult result;

  friend bool operator==(const NamedComparison&, const NamedComparison&) = default;
};

struct BatteryResults {
  std::vector<NamedTestResult> tests;  // VEAT tests in config order, then SC-VEAT tests
  std::vector<NamedCorrelation> correlations;
  std::vector<NamedComparison> comparisons;

  friend bool operator==(const BatteryResults&, const BatteryResults&) = default;
};

// Per-test Monte Carlo seed from the battery seed and the test name, so a
// test's numbers do not depend on which other tests run or in what order.
std::uint64_t derive_seed(std::uint64_t battery_seed, std::string_view test_name);

// Runs every configured test; `threads` = 0 uses all hardware threads.
BatteryResults run_battery(const ResolvedBattery& battery, unsigned threads = 1);

// Joins single-category results for `spec.group` and `spec.condition` with the
// reference table named by the axis; fewer than 3 matches is an error.
NamedCorrelation compute_correlation(const ReferenceData& reference, const BatteryResults& results,
                                     const CorrelationSpec& spec);

// Control vs debias deltas for every group that has debias-tagged tests.
std::vector<NamedComparison> compute_comparisons(const BatteryResults& results);

struct RunManifest {
  std::string tool = "veat";
  std::string tool_version;
  int schema_version = kBatterySchemaVersion;
  std::string config_sha256;
  std::map<std::string, std::string> archives;        // path as configured -> sha256
  std::map<std::string, std::string> reference_data;  // file -> sha256
  PermutationConfig permutation;
  StdDivisor std_divisor = StdDivisor::sample;
  std::size_t test_count = 0;
  std::string results_sha256;
  std::string generated_at;  // UTC, ISO 8601

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

RunManifest emit_provenance(const ResolvedBattery& battery, const BatteryResults& results);

}  // namespace veat
