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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace veat {

// Real-world demographics for one occupation or award.
struct DemographicRecord {
  std::string label;            // name as published
  std::string key;              // normalized join key
  std::string attribute_group;  // Female, Male, Black, White, STEM, non-STEM
  // Occupations: workforce percentages.
  std::optional<double> pct_women, pct_black, pct_white;
  // Awards: laureate counts.
  std::optional<long> n_female, n_black, n_total;

  void validate() const;
  friend bool operator==(const DemographicRecord&, const DemographicRecord&) = default;
};

// Demographic axes usable in a correlation:
//   pct_women, pct_male, pct_black, pct_white, pct_non_black
// Award percentages derive from counts, e.g. pct_male = (total - female) / total * 100.
double axis_value(const DemographicRecord& record, std::string_view axis);
bool is_demographic_axis(std::string_view axis);

struct OasisTheme {
  std::string theme;
  double valence_mean = 0.0;
  double effect_size = 0.0;
  std::string category;
};

struct StimulusSet {
  std::string concept_label;
  std::string group;
  std::vector<std::string> stimuli;
  std::string prompt_template;
};

struct ReferenceData {
  std::vector<StimulusSet> weat_stimuli;
  std::vector<DemographicRecord> occupations;  // one row per (occupation, attribute)
  std::vector<DemographicRecord> awards;
  std::vector<OasisTheme> oasis;
  std::map<std::string, std::string> debias_prompts;    // control, debias1, debias2
  std::map<std::string, std::string> prompt_templates;  // stimulus, person, oasis
  std::map<std::string, std::string> checksums;         // file name -> sha256

  // First record whose key equals normalize_label(key), or nullptr.
  const DemographicRecord* find_occupation(std::string_view key) const;
  const DemographicRecord* find_award(std::string_view key) const;
};

// Lowercase, trimmed, internal whitespace collapsed to single spaces.
std::string normalize_label(std::string_view label);

// Directory baked in at build time; VEAT_REFERENCE_DIR overrides it.
std::filesystem::path default_reference_dir();

// Loads the bundled tables and verifies each file against its recorded
// SHA-256 digest. Throws ValidationError on a digest mismatch.
ReferenceData load_reference_data(const std::filesystem::path& dir = default_reference_dir());

// Expected digests of the shipped data files.
const std::map<std::string, std::string>& reference_checksums();

}  // namespace veat
