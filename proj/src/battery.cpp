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

#include "veat/battery.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "veat/archive.hpp"
#include "veat/checksum.hpp"
#include "veat/errors.hpp"
#include "veat/report.hpp"

namespace veat {

using nlohmann::json;

namespace {

std::string get_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw ValidationError(where + ": missing or empty string field '" + key + "'");
  }
  return it->get<std::string>();
}

std::uint64_t get_count(const json& obj, const char* key, std::uint64_t fallback,
                        const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned()) {
    throw ValidationError(where + ": '" + key + "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string unknown_concept_message(const std::string& test, const std::string& name,
                                    const std::map<std::string, ConceptSet>& concepts) {
  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const auto& [candidate, _] : concepts) {
    ranked.emplace_back(edit_distance(name, candidate), candidate);
  }
  std::sort(ranked.begin(), ranked.end());
  std::ostringstream os;
  os << "test '" << test << "': unknown concept '" << name << "'";
  if (!ranked.empty()) {
    os << "; did you mean";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) {
      os << (i ? ", '" : " '") << ranked[i].second << "'";
    }
    os << "?";
  }
  os << " Available concepts:";
  for (const auto& [candidate, _] : concepts) os << " '" << candidate << "'";
  return os.str();
}

[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const DegenerateError& e) {
    throw DegenerateError(context + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
}

}  // namespace

void validate_correlation_spec(const CorrelationSpec& spec) {
  if (spec.source != "computed" && spec.source != "reference") {
    throw ValidationError("correlation '" + spec.group + "': source must be computed or reference");
  }
  const auto dot = spec.axis.find('.');
  const std::string table = spec.axis.substr(0, dot);
  const std::string column = dot == std::string::npos ? "" : spec.axis.substr(dot + 1);
  const bool ok = ((table == "occupations" || table == "awards") && is_demographic_axis(column) &&
                   spec.source == "computed") ||
                  (table == "oasis" && column == "valence_mean");
  if (!ok) {
    throw ValidationError("correlation '" + spec.group + "': unsupported axis '" + spec.axis +
                          "' for source '" + spec.source + "'");
  }
}

BatteryConfig parse_battery_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("battery config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("battery config must be a JSON object");

  static const std::set<std::string> kKnown = {"schema_version", "description", "archives",
                                               "permutation",    "std_divisor", "veat_tests",
                                               "scveat_tests",   "correlations"};
  for (const auto& [key, _] : doc.items()) {
    if (!kKnown.count(key)) throw ValidationError("battery config: unknown field '" + key + "'");
  }

  BatteryConfig cfg;
  cfg.base_dir = base_dir;
  cfg.source_bytes = std::string(text);

  auto version = doc.find("schema_version");
  if (version == doc.end() || !version->is_number_integer()) {
    throw ValidationError("battery config: missing integer schema_version");
  }
  cfg.schema_version = version->get<int>();
  if (cfg.schema_version != kBatterySchemaVersion) {
    throw ValidationError("battery config: unsupported schema_version " +
                          std::to_string(cfg.schema_version));
  }

  if (auto it = doc.find("archives"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("battery config: 'archives' must be an array");
    for (const auto& a : *it) {
      if (!a.is_string()) throw ValidationError("battery config: archive paths must be strings");
      cfg.archives.emplace_back(a.get<std::string>());
    }
  }

  if (auto it = doc.find("permutation"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("battery config: 'permutation' must be an object");
    const std::string where = "battery config permutation";
    cfg.permutation.seed = get_count(*it, "seed", cfg.permutation.seed, where);
    cfg.permutation.iterations = get_count(*it, "iterations", cfg.permutation.iterations, where);
    cfg.permutation.exact_threshold =
        get_count(*it, "exact_threshold", cfg.permutation.exact_threshold, where);
    if (auto rule = it->find("tie_rule"); rule != it->end()) {
      if (!rule->is_string()) throw ValidationError(where + ": tie_rule must be a string");
      cfg.permutation.tie_rule = parse_tie_rule(rule->get<std::string>());
    }
    cfg.permutation.validate();
  }
  if (auto it = doc.find("std_divisor"); it != doc.end()) {
    if (!it->is_string()) throw ValidationError("battery config: std_divisor must be a string");
    cfg.std_divisor = parse_std_divisor(it->get<std::string>());
  }

  std::set<std::string> names;
  auto claim_name = [&](const std::string& name) {
    if (!names.insert(name).second) {
      throw ValidationError("battery config: duplicate test name '" + name + "'");
    }
  };

  if (auto it = doc.find("veat_tests"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("battery config: 'veat_tests' must be an array");
    for (const auto& t : *it) {
      const std::string where = "veat test";
      VeatTestSpec spec{get_string(t, "name", where), get_string(t, "x", where),
                        get_string(t, "y", where), get_string(t, "a", where),
                        get_string(t, "b", where)};
      claim_name(spec.name);
      cfg.veat_tests.push_back(std::move(spec));
    }
  }

  if (auto it = doc.find("scveat_tests"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("battery config: 'scveat_tests' must be an array");
    for (const auto& t : *it) {
      const std::string where = "scveat test";
      ScveatTestSpec spec;
      spec.name = get_string(t, "name", where);
      spec.x = get_string(t, "x", where);
      spec.a = get_string(t, "a", where);
      spec.b = get_string(t, "b", where);
      if (t.contains("condition")) {
        spec.condition = parse_condition(get_string(t, "condition", where));
      }
      if (t.contains("group")) spec.group = get_string(t, "group", where);
      spec.label = normalize_label(t.contains("label") ? get_string(t, "label", where) : spec.x);
      claim_name(spec.name);
      cfg.scveat_tests.push_back(std::move(spec));
    }
  }

  if (auto it = doc.find("correlations"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("battery config: 'correlations' must be an array");
    for (const auto& c : *it) {
      const std::string where = "correlation";
      CorrelationSpec spec;
      spec.group = get_string(c, "group", where);
      spec.axis = get_string(c, "axis", where);
      if (c.contains("condition")) spec.condition = parse_condition(get_string(c, "condition", where));
      if (c.contains("source")) spec.source = get_string(c, "source", where);
      validate_correlation_spec(spec);
      cfg.correlations.push_back(std::move(spec));
    }
  }

  // Any group that uses debias conditions must also have control results.
  std::map<std::string, std::set<Condition>> conditions;
  for (const auto& t : cfg.scveat_tests) {
    if (t.condition) conditions[t.group].insert(*t.condition);
  }
  for (const auto& [group, seen] : conditions) {
    const bool has_debias = seen.count(Condition::debias1) || seen.count(Condition::debias2);
    if (has_debias && !seen.count(Condition::control)) {
      throw ValidationError("battery config: group '" + group +
                            "' has debias conditions but no control tests");
    }
  }
  return cfg;
}

BatteryConfig read_battery_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open battery config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_battery_config(buf.str(), path.parent_path());
}

std::vector<std::string> referenced_concepts(const BatteryConfig& config) {
  std::set<std::string> names;
  for (const auto& t : config.veat_tests) names.insert({t.x, t.y, t.a, t.b});
  for (const auto& t : config.scveat_tests) names.insert({t.x, t.a, t.b});
  return {names.begin(), names.end()};
}

ResolvedBattery resolve_battery(BatteryConfig config, std::map<std::string, ConceptSet> concepts,
                                ReferenceData reference) {
  auto lookup = [&](const std::string& test, const std::string& name) -> const ConceptSet& {
    auto it = concepts.find(name);
    if (it == concepts.end()) throw ValidationError(unknown_concept_message(test, name, concepts));
    return it->second;
  };
  auto check_dims = [&](const std::string& test, std::initializer_list<const ConceptSet*> sets) {
    const ConceptSet* first = *sets.begin();
    for (const auto* s : sets) {
      if (s->dim() != first->dim()) {
        throw ValidationError("test '" + test + "': concepts '" + first->name() + "' and '" +
                              s->name() + "' have different dimensions");
      }
    }
  };

  for (const auto& t : config.veat_tests) {
    const auto &x = lookup(t.name, t.x), &y = lookup(t.name, t.y);
    const auto &a = lookup(t.name, t.a), &b = lookup(t.name, t.b);
    check_dims(t.name, {&x, &y, &a, &b});
    if (x.size() != y.size()) {
      throw ValidationError("test '" + t.name + "': target sets '" + t.x + "' and '" + t.y +
                            "' differ in size (" + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()) + ")");
    }
  }
  for (const auto& t : config.scveat_tests) {
    const auto &x = lookup(t.name, t.x), &a = lookup(t.name, t.a), &b = lookup(t.name, t.b);
    check_dims(t.name, {&x, &a, &b});
    if (a.size() != b.size()) {
      throw ValidationError("test '" + t.name + "': attribute sets '" + t.a + "' and '" + t.b +
                            "' differ in size");
    }
  }

  ResolvedBattery out;
  out.config = std::move(config);
  out.concepts = std::move(concepts);
  out.reference = std::move(reference);
  return out;
}

ResolvedBattery load_battery(const std::filesystem::path& config_path,
                             const ReferenceData& reference) {
  return load_battery(read_battery_config(config_path), reference);
}

ResolvedBattery load_battery(BatteryConfig config, const ReferenceData& reference) {
  if (config.archives.empty()) throw ValidationError("battery config lists no archives");
  std::vector<std::filesystem::path> paths;
  std::map<std::string, std::string> checksums;
  for (const auto& a : config.archives) {
    const auto full = a.is_absolute() ? a : config.base_dir / a;
    if (!std::filesystem::exists(full)) throw IoError("archive not found: " + full.string());
    checksums[a.generic_string()] = sha256_file(full);
    paths.push_back(full);
  }
  auto concepts = load_concepts(paths);
  ResolvedBattery battery = resolve_battery(std::move(config), std::move(concepts), reference);
  battery.archive_checksums = std::move(checksums);
  return battery;
}

std::uint64_t derive_seed(std::uint64_t battery_seed, std::string_view test_name) {
  // FNV-1a over the name, then a splitmix64 finalizer over the combination.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : test_name) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::uint64_t z = battery_seed ^ (h + 0x9e3779b97f4a7c15ull + (battery_seed << 6) + (battery_seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

std::vector<CorrelationPair> correlation_pairs(const ReferenceData& reference,
                                               const BatteryResults& results,
                                               const CorrelationSpec& spec) {
  const auto dot = spec.axis.find('.');
  const std::string table = spec.axis.substr(0, dot);
  const std::string column = spec.axis.substr(dot + 1);
  std::vector<CorrelationPair> pairs;

  if (spec.source == "reference") {
    for (const auto& t : reference.oasis) {
      pairs.push_back({normalize_label(t.theme), t.effect_size, t.valence_mean});
    }
    return pairs;
  }

  std::set<std::string> seen;
  for (const auto& t : results.tests) {
    if (t.result.kind != TestKind::scveat || t.group != spec.group) continue;
    if (t.condition.value_or(Condition::control) != spec.condition) continue;
    if (!seen.insert(t.label).second) {
      throw ValidationError("correlation '" + spec.group + "': label '" + t.label +
                            "' appears in more than one test");
    }
    double value = 0.0;
    if (table == "oasis") {
      auto it = std::find_if(reference.oasis.begin(), reference.oasis.end(),
                             [&](const OasisTheme& th) { return normalize_label(th.theme) == t.label; });
      if (it == reference.oasis.end()) {
        throw ValidationError("correlation '" + spec.group + "': no OASIS theme '" + t.label + "'");
      }
      value = it->valence_mean;
    } else {
      const DemographicRecord* rec = table == "occupations"
                                         ? reference.find_occupation(t.label)
                                         : reference.find_award(t.label);
      if (!rec) {
        throw ValidationError("correlation '" + spec.group + "': no " + table + " record for '" +
                              t.label + "'");
      }
      value = axis_value(*rec, column);
    }
    pairs.push_back({t.label, t.result.effect_size, value});
  }
  if (pairs.size() < 3) {
    throw ValidationError("correlation '" + spec.group + "' on " + spec.axis + " matched " +
                          std::to_string(pairs.size()) + " labels; need at least 3");
  }
  return pairs;
}

}  // namespace

NamedCorrelation compute_correlation(const ReferenceData& reference, const BatteryResults& results,
                                     const CorrelationSpec& spec) {
  validate_correlation_spec(spec);
  try {
    return {spec.group, spec.axis, spec.condition, spec.source,
            correlate(correlation_pairs(reference, results, spec))};
  } catch (const Error&) {
    rethrow_with_context("correlation '" + spec.group + "' on " + spec.axis);
  }
}

std::vector<NamedComparison> compute_comparisons(const BatteryResults& results) {
  std::map<std::string, std::vector<ConditionEffect>> by_group;
  std::set<std::string> groups_with_debias;
  for (const auto& t : results.tests) {
    if (t.result.kind != TestKind::scveat || !t.condition) continue;
    by_group[t.group].push_back({t.label, *t.condition, t.result.effect_size});
    if (*t.condition != Condition::control) groups_with_debias.insert(t.group);
  }
  std::vector<NamedComparison> out;
  for (const auto& group : groups_with_debias) {
    try {
      for (auto& c : compare_conditions(by_group[group])) out.push_back({group, std::move(c)});
    } catch (const Error&) {
      rethrow_with_context("comparison group '" + group + "'");
    }
  }
  return out;
}

BatteryResults run_battery(const ResolvedBattery& battery, unsigned threads) {
  const BatteryConfig& cfg = battery.config;

  struct Job {
    NamedTestResult meta;
    const ConceptSet *x, *y, *a, *b;
  };
  std::vector<Job> jobs;
  for (const auto& t : cfg.veat_tests) {
    Job job;
    job.meta.name = t.name;
    job.meta.x = t.x;
    job.meta.y = t.y;
    job.meta.a = t.a;
    job.meta.b = t.b;
    job.x = &battery.concepts.at(t.x);
    job.y = &battery.concepts.at(t.y);
    job.a = &battery.concepts.at(t.a);
    job.b = &battery.concepts.at(t.b);
    jobs.push_back(std::move(job));
  }
  for (const auto& t : cfg.scveat_tests) {
    Job job;
    job.meta.name = t.name;
    job.meta.x = t.x;
    job.meta.a = t.a;
    job.meta.b = t.b;
    job.meta.condition = t.condition;
    job.meta.group = t.group;
    job.meta.label = t.label;
    job.x = &battery.concepts.at(t.x);
    job.y = nullptr;
    job.a = &battery.concepts.at(t.a);
    job.b = &battery.concepts.at(t.b);
    jobs.push_back(std::move(job));
  }

  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      Job& job = jobs[i];
      TestOptions options;
      options.permutation = cfg.permutation;
      options.permutation.seed = derive_seed(cfg.permutation.seed, job.meta.name);
      options.std_divisor = cfg.std_divisor;
      options.threads = 1;
      try {
        try {
          job.meta.result = job.y ? run_veat(*job.x, *job.y, *job.a, *job.b, options)
                                  : run_scveat(*job.x, *job.a, *job.b, options);
        } catch (const Error&) {
          rethrow_with_context("test '" + job.meta.name + "'");
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BatteryResults results;
  for (auto& job : jobs) results.tests.push_back(std::move(job.meta));

  for (const auto& spec : cfg.correlations) {
    results.correlations.push_back(compute_correlation(battery.reference, results, spec));
  }
  results.comparisons = compute_comparisons(results);
  return results;
}

RunManifest emit_provenance(const ResolvedBattery& battery, const BatteryResults& results) {
  RunManifest m;
  m.tool_version = VEAT_VERSION;
  m.schema_version = battery.config.schema_version;
  m.config_sha256 = sha256_hex(battery.config.source_bytes);
  m.archives = battery.archive_checksums;
  m.reference_data = battery.reference.checksums;
  m.permutation = battery.config.permutation;
  m.std_divisor = battery.config.std_divisor;
  m.test_count = results.tests.size();
  m.results_sha256 = sha256_hex(results_json_text(results));

  // SOURCE_DATE_EPOCH pins the timestamp so repeated runs are byte-identical.
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    try {
      now = static_cast<std::time_t>(std::stoll(epoch));
    } catch (const std::exception&) {
      throw ValidationError(std::string("SOURCE_DATE_EPOCH is not an integer: ") + epoch);
    }
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  m.generated_at = buf;
  return m;
}

}  // namespace veat
