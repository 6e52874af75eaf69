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

#include "veat/reference_data.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "veat/checksum.hpp"
#include "veat/errors.hpp"

#ifndef VEAT_REFERENCE_DIR
#define VEAT_REFERENCE_DIR "data/reference"
#endif

namespace veat {

using nlohmann::json;

const std::map<std::string, std::string>& reference_checksums() {
  static const std::map<std::string, std::string> kDigests = {
      {"awards.json", "b74feadcb84f392d8042024dd846f4062bd21f640b901cec18da9fa5ec5f89d5"},
      {"oasis.json", "3eedc371db0f43475c1ca685e284f284ba391a7a70a7bb25056220079f4a24b5"},
      {"occupations.json", "d5d38fb2e8f192d173faf293855597dfa6dafc0dd6df4d1f76c84e29743e7890"},
      {"prompts.json", "a401b553ecedc69abf3f80bad283accbaf53856c3bf07042cda74d15319264c6"},
      {"weat_stimuli.json", "60b695a8d2ccb37429d8cc17ecd2f9312fd3beb8f0af5a2f972b13f65dad860a"},
  };
  return kDigests;
}

void DemographicRecord::validate() const {
  auto check_pct = [&](const std::optional<double>& v, const char* name) {
    if (v && !(*v >= 0.0 && *v <= 100.0)) {
      throw ValidationError("demographic record '" + label + "': " + name +
                            " outside [0, 100]");
    }
  };
  check_pct(pct_women, "pct_women");
  check_pct(pct_black, "pct_black");
  check_pct(pct_white, "pct_white");
  auto check_count = [&](const std::optional<long>& v, const char* name) {
    if (v && *v < 0) throw ValidationError("demographic record '" + label + "': negative " + name);
  };
  check_count(n_female, "n_female");
  check_count(n_black, "n_black");
  check_count(n_total, "n_total");
  if (n_total && ((n_female && *n_female > *n_total) || (n_black && *n_black > *n_total))) {
    throw ValidationError("demographic record '" + label + "': count exceeds n_total");
  }
}

bool is_demographic_axis(std::string_view axis) {
  return axis == "pct_women" || axis == "pct_male" || axis == "pct_black" ||
         axis == "pct_white" || axis == "pct_non_black";
}

double axis_value(const DemographicRecord& r, std::string_view axis) {
  auto from_counts = [&](const std::optional<long>& count, bool complement) -> double {
    if (!count || !r.n_total || *r.n_total == 0) {
      throw ValidationError("record '" + r.label + "' has no data for axis '" +
                            std::string(axis) + "'");
    }
    const double c = static_cast<double>(complement ? *r.n_total - *count : *count);
    return c / static_cast<double>(*r.n_total) * 100.0;
  };
  auto pct = [&](const std::optional<double>& v, bool complement) -> double {
    if (!v) {
      throw ValidationError("record '" + r.label + "' has no data for axis '" +
                            std::string(axis) + "'");
    }
    return complement ? 100.0 - *v : *v;
  };

  if (axis == "pct_women") return r.pct_women ? pct(r.pct_women, false) : from_counts(r.n_female, false);
  if (axis == "pct_male") return r.pct_women ? pct(r.pct_women, true) : from_counts(r.n_female, true);
  if (axis == "pct_black") return r.pct_black ? pct(r.pct_black, false) : from_counts(r.n_black, false);
  if (axis == "pct_non_black") {
    return r.pct_black ? pct(r.pct_black, true) : from_counts(r.n_black, true);
  }
  if (axis == "pct_white") return pct(r.pct_white, false);
  throw ValidationError("unknown demographic axis '" + std::string(axis) + "'");
}

std::string normalize_label(std::string_view label) {
  std::string out;
  bool pending_space = false;
  for (char c : label) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

const DemographicRecord* ReferenceData::find_occupation(std::string_view key) const {
  const std::string normalized = normalize_label(key);
  for (const auto& r : occupations) {
    if (r.key == normalized) return &r;
  }
  return nullptr;
}

const DemographicRecord* ReferenceData::find_award(std::string_view key) const {
  const std::string normalized = normalize_label(key);
  for (const auto& r : awards) {
    if (r.key == normalized) return &r;
  }
  return nullptr;
}

std::filesystem::path default_reference_dir() {
  if (const char* env = std::getenv("VEAT_REFERENCE_DIR"); env && *env) return env;
  return VEAT_REFERENCE_DIR;
}

namespace {

json read_verified(const std::filesystem::path& dir, const std::string& name,
                   std::map<std::string, std::string>& checksums) {
  const auto path = dir / name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open reference data " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  const std::string digest = sha256_hex(bytes);
  const auto& expected = reference_checksums().at(name);
  if (digest != expected) {
    throw ValidationError("reference data " + path.string() + " does not match its checksum (" +
                          digest + " != " + expected + ")");
  }
  checksums[name] = digest;
  try {
    json doc = json::parse(bytes);
    if (doc.at("schema_version").get<int>() != 1) {
      throw ValidationError("unsupported schema_version in " + path.string());
    }
    return doc;
  } catch (const json::exception& e) {
    throw ValidationError("malformed reference data " + path.string() + ": " + e.what());
  }
}

}  // namespace

ReferenceData load_reference_data(const std::filesystem::path& dir) {
  ReferenceData ref;
  try {
    const json stimuli = read_verified(dir, "weat_stimuli.json", ref.checksums);
    for (const auto& c : stimuli.at("concepts")) {
      ref.weat_stimuli.push_back({c.at("concept").get<std::string>(),
                                  c.at("group").get<std::string>(),
                                  c.at("stimuli").get<std::vector<std::string>>(),
                                  c.at("prompt_template").get<std::string>()});
    }

    const json occupations = read_verified(dir, "occupations.json", ref.checksums);
    for (const auto& o : occupations.at("occupations")) {
      DemographicRecord r;
      r.label = o.at("name").get<std::string>();
      r.key = o.at("key").get<std::string>();
      r.attribute_group = o.at("attribute").get<std::string>();
      r.pct_women = o.at("pct_women").get<double>();
      r.pct_black = o.at("pct_black").get<double>();
      r.pct_white = o.at("pct_white").get<double>();
      r.validate();
      ref.occupations.push_back(std::move(r));
    }

    const json awards = read_verified(dir, "awards.json", ref.checksums);
    for (const auto& a : awards.at("awards")) {
      DemographicRecord r;
      r.label = a.at("name").get<std::string>();
      r.key = a.at("key").get<std::string>();
      r.attribute_group = a.at("stem").get<bool>() ? "STEM" : "non-STEM";
      r.n_female = a.at("n_female").get<long>();
      r.n_black = a.at("n_black").get<long>();
      r.n_total = a.at("n_total").get<long>();
      r.validate();
      ref.awards.push_back(std::move(r));
    }

    const json oasis = read_verified(dir, "oasis.json", ref.checksums);
    for (const auto& t : oasis.at("themes")) {
      ref.oasis.push_back({t.at("theme").get<std::string>(), t.at("valence_mean").get<double>(),
                           t.at("effect_size").get<double>(),
                           t.at("category").get<std::string>()});
    }

    const json prompts = read_verified(dir, "prompts.json", ref.checksums);
    ref.prompt_templates = prompts.at("templates").get<std::map<std::string, std::string>>();
    ref.debias_prompts = prompts.at("debias_prompts").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed reference data: ") + e.what());
  }
  return ref;
}

}  // namespace veat
