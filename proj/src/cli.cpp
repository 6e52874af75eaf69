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

#include "veat/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "veat/annotations.hpp"
#include "veat/archive.hpp"
#include "veat/battery.hpp"
#include "veat/errors.hpp"
#include "veat/oracle.hpp"
#include "veat/report.hpp"
#include "veat/stats.hpp"

namespace veat::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kTieRules = {"strict", "plus_one"};
const std::vector<std::string> kDivisors = {"sample", "population"};
const std::vector<std::string> kConditions = {"control", "debias1", "debias2"};

// Flags shared by every subcommand that runs association tests. The option
// handles let `battery` tell explicit flags apart from defaults.
struct PermutationFlags {
  PermutationConfig config;
  std::string tie_rule = "strict";
  std::string std_divisor = "sample";
  unsigned threads = 1;
  CLI::Option* seed = nullptr;
  CLI::Option* iterations = nullptr;
  CLI::Option* exact_threshold = nullptr;
  CLI::Option* tie = nullptr;
  CLI::Option* divisor = nullptr;

  void attach(CLI::App* app) {
    seed = app->add_option("--seed", config.seed, "Permutation seed")->capture_default_str();
    iterations = app->add_option("--iterations", config.iterations, "Monte Carlo draws")
                     ->capture_default_str();
    exact_threshold =
        app->add_option("--exact-threshold", config.exact_threshold,
                        "Enumerate all partitions when their count is at most this")
            ->capture_default_str();
    tie = app->add_option("--tie-rule", tie_rule, "Tie handling for permutation counts")
              ->check(CLI::IsMember(kTieRules))
              ->capture_default_str();
    divisor = app->add_option("--std-divisor", std_divisor, "Standard deviation divisor")
                  ->check(CLI::IsMember(kDivisors))
                  ->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  }

  TestOptions options() const {
    TestOptions o;
    o.permutation = config;
    o.permutation.tie_rule = parse_tie_rule(tie_rule);
    o.permutation.validate();
    o.std_divisor = parse_std_divisor(std_divisor);
    o.threads = threads;
    return o;
  }
};

CLI::Option* add_output_dir(CLI::App* app, std::string& target) {
  return app->add_option("--output-dir", target, "Directory for result files")
      ->envname("VEAT_OUTPUT_DIR");
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

std::map<std::string, ConceptSet> load_archives(const std::vector<std::string>& archives) {
  std::vector<fs::path> paths;
  for (const auto& a : archives) {
    if (!fs::exists(a)) throw IoError("archive not found: " + a);
    paths.emplace_back(a);
  }
  return load_concepts(paths);
}

void print_test(std::ostream& out, const std::string& name, const TestResult& r) {
  fmt::print(out, "test: {}\n", name);
  fmt::print(out, "d = {:.4f} ({})\n", r.effect_size, to_string(classify_effect(r.effect_size)));
  fmt::print(out, "p = {:.4f} {}\n", r.p_value, significance_stars(r.p_value));
  if (r.method == PValueMethod::exact) {
    fmt::print(out, "method = exact ({} partitions)\n", r.partitions);
  } else {
    fmt::print(out, "method = monte_carlo ({} draws, seed {})\n", r.iterations, r.seed);
  }
  fmt::print(out, "statistic = {:.4f}\n", r.statistic);
}

void emit_single(const NamedTestResult& test, const std::string& output_dir, std::ostream& out) {
  if (output_dir.empty()) return;
  prepare_dir(output_dir);
  BatteryResults results;
  results.tests.push_back(test);
  emit_json(results, output_dir);
  emit_csv(results, output_dir);
  emit_markdown(results, output_dir);
  fmt::print(out, "wrote results to {}\n", output_dir);
}

int cmd_pool(const std::string& frames, const std::string& output, bool normalize,
             std::ostream& out) {
  const auto records = read_frame_records(fs::path(frames));
  if (records.empty()) throw ValidationError("no frame records in " + frames);
  PoolOptions options;
  options.normalize_frames = normalize;
  std::vector<VideoEmbedding> pooled;
  for (const auto& rec : records) {
    VideoEmbedding e = pool_frames(rec.sequence, rec.concept_label, options);
    pooled.emplace_back(e.video_id(), e.concept_label(), e.vector(), e.n_frames(),
                        rec.source_path);
  }
  write_archive(pooled, fs::path(output));
  fmt::print(out, "pooled {} videos into {}\n", pooled.size(), output);
  return kOk;
}

struct ConceptArgs {
  std::string x, y, a, b;
  std::vector<std::string> archives;
};

int cmd_veat(const ConceptArgs& args, const PermutationFlags& flags,
             const std::string& output_dir, std::ostream& out) {
  const TestOptions options = flags.options();
  BatteryConfig config;
  NamedTestResult test;
  test.name = args.x + " vs " + args.y + " / " + args.a + " vs " + args.b;
  test.x = args.x;
  test.y = args.y;
  test.a = args.a;
  test.b = args.b;
  config.veat_tests.push_back({test.name, args.x, args.y, args.a, args.b});
  const ResolvedBattery battery =
      resolve_battery(std::move(config), load_archives(args.archives), ReferenceData{});
  const auto& c = battery.concepts;
  test.result = run_veat(c.at(args.x), c.at(args.y), c.at(args.a), c.at(args.b), options);
  print_test(out, test.name, test.result);
  emit_single(test, output_dir, out);
  return kOk;
}

int cmd_scveat(const ConceptArgs& args, const PermutationFlags& flags,
               const std::string& output_dir, std::ostream& out) {
  const TestOptions options = flags.options();
  BatteryConfig config;
  NamedTestResult test;
  test.name = args.x + " / " + args.a + " vs " + args.b;
  test.x = args.x;
  test.a = args.a;
  test.b = args.b;
  test.label = normalize_label(args.x);
  ScveatTestSpec spec;
  spec.name = test.name;
  spec.x = args.x;
  spec.a = args.a;
  spec.b = args.b;
  config.scveat_tests.push_back(spec);
  const ResolvedBattery battery =
      resolve_battery(std::move(config), load_archives(args.archives), ReferenceData{});
  const auto& c = battery.concepts;
  test.result = run_scveat(c.at(args.x), c.at(args.a), c.at(args.b), options);
  print_test(out, test.name, test.result);
  emit_single(test, output_dir, out);
  return kOk;
}

int cmd_battery(const std::string& config_path, const std::vector<std::string>& archives,
                const std::string& reference_dir,
                const PermutationFlags& flags, std::string output_dir, std::ostream& out) {
  // Validate overrides before touching any archive.
  const TestOptions overrides = flags.options();
  if (!fs::exists(config_path)) throw IoError("battery config not found: " + config_path);
  const ReferenceData reference =
      load_reference_data(reference_dir.empty() ? default_reference_dir() : fs::path(reference_dir));
  BatteryConfig config = read_battery_config(config_path);
  if (!archives.empty()) {
    config.archives.clear();
    for (const auto& a : archives) config.archives.push_back(fs::absolute(a));
  }
  ResolvedBattery battery = load_battery(std::move(config), reference);
  auto& perm = battery.config.permutation;
  if (flags.seed->count()) perm.seed = overrides.permutation.seed;
  if (flags.iterations->count()) perm.iterations = overrides.permutation.iterations;
  if (flags.exact_threshold->count()) perm.exact_threshold = overrides.permutation.exact_threshold;
  if (flags.tie->count()) perm.tie_rule = overrides.permutation.tie_rule;
  if (flags.divisor->count()) battery.config.std_divisor = overrides.std_divisor;
  perm.validate();

  const BatteryResults results = run_battery(battery, flags.threads);
  if (output_dir.empty()) output_dir = "veat-output";
  prepare_dir(output_dir);
  std::vector<fs::path> written = emit_csv(results, output_dir);
  written.push_back(emit_json(results, output_dir));
  written.push_back(emit_markdown(results, output_dir));
  written.push_back(emit_manifest(emit_provenance(battery, results), output_dir));

  fmt::print(out, "{}\n", build_report(results).summary);
  for (const auto& c : results.correlations) {
    fmt::print(out, "r({}, {}) = {:.4f} (n = {})\n", c.group, c.axis, c.result.r, c.result.n);
  }
  for (const auto& p : written) fmt::print(out, "wrote {}\n", p.string());
  return kOk;
}

int cmd_correlate(const std::string& results_path, const CorrelationSpec& spec,
                  const std::string& reference_dir, const std::string& output_dir,
                  std::ostream& out) {
  validate_correlation_spec(spec);
  BatteryResults results;
  if (spec.source == "computed") {
    if (results_path.empty()) throw ValidationError("--results is required for computed correlations");
    results = read_results_json(results_path);
  }
  const ReferenceData reference =
      load_reference_data(reference_dir.empty() ? default_reference_dir() : fs::path(reference_dir));
  const NamedCorrelation c = compute_correlation(reference, results, spec);
  fmt::print(out, "r = {:.4f} (n = {})\n", c.result.r, c.result.n);
  for (const auto& p : c.result.pairs) {
    fmt::print(out, "  {}: d = {:.4f}, value = {:.4f}\n", p.label, p.effect_size, p.statistic_pct);
  }
  if (!output_dir.empty()) {
    prepare_dir(output_dir);
    BatteryResults wrapped;
    wrapped.correlations.push_back(c);
    std::ofstream file(fs::path(output_dir) / "correlations.csv", std::ios::binary);
    if (!file) throw IoError("cannot write correlations.csv in " + output_dir);
    file << correlations_csv(wrapped);
    fmt::print(out, "wrote {}\n", (fs::path(output_dir) / "correlations.csv").string());
  }
  return kOk;
}

int cmd_compare(const std::string& results_path, const std::string& group,
                const std::string& output_dir, std::ostream& out) {
  BatteryResults results = read_results_json(results_path);
  std::vector<NamedComparison> comparisons = compute_comparisons(results);
  if (!group.empty()) {
    std::erase_if(comparisons, [&](const NamedComparison& c) { return c.group != group; });
  }
  if (comparisons.empty()) throw ValidationError("no debias comparisons found in " + results_path);
  auto fmt_opt = [](const std::optional<double>& v) {
    return v ? fmt::format("{:+.4f}", *v) : std::string("n/a");
  };
  for (const auto& [g, c] : comparisons) {
    fmt::print(out, "{} / {}: control {:+.4f}, debias1 {} (delta {}), debias2 {} (delta {}){}\n", g,
               c.scenario, c.d_control, fmt_opt(c.d_debias1), fmt_opt(c.delta1),
               fmt_opt(c.d_debias2), fmt_opt(c.delta2),
               (c.sign_flip1 || c.sign_flip2) ? " [sign flip]" : "");
  }
  if (!output_dir.empty()) {
    prepare_dir(output_dir);
    results.comparisons = std::move(comparisons);
    const fs::path path = fs::path(output_dir) / "comparisons.csv";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path.string());
    file << comparisons_csv(results);
    fmt::print(out, "wrote {}\n", path.string());
  }
  return kOk;
}

int cmd_agreement(const std::string& path, const std::optional<double>& d,
                  const std::string& group_a, const std::string& group_b, std::ostream& out) {
  const auto annotations = read_annotations(fs::path(path));
  fmt::print(out, "fleiss_kappa = {:.4f}\n", fleiss_kappa(annotations));
  if (d) {
    if (group_a.empty() || group_b.empty()) {
      throw ValidationError("--effect-size needs --group-a and --group-b");
    }
    fmt::print(out, "coherence = {}\n",
               to_string(directionality_coherence(*d, annotations, group_a, group_b)));
  }
  return kOk;
}

int cmd_oracle_check(std::size_t trials, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  if (trials == 0) throw ValidationError("--trials must be positive");
  const oracle::CheckReport report = oracle::run_check(trials, seed);
  for (const auto& m : report.messages) fmt::print(err, "{}\n", m);
  fmt::print(out, "{} trials, {} failures, max statistic error {:.3g}, max effect size error {:.3g}\n",
             report.trials, report.failures, report.max_statistic_error,
             report.max_effect_size_error);
  return report.ok() ? kOk : kValidation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embedding association tests for video concept sets", "veat"};
  app.set_version_flag("--version", VEAT_VERSION);
  app.set_config("--config", "", "Read flags from a TOML or INI file");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // pool
  std::string frames, pool_output;
  bool normalize = false;
  auto* pool = app.add_subcommand("pool", "Mean-pool per-frame embeddings into an archive");
  pool->add_option("--frames", frames, "Frame records (JSON Lines)")->required();
  pool->add_option("--output", pool_output, "Archive to write")->required();
  pool->add_flag("--normalize-frames", normalize, "L2-normalize frames before pooling");

  // veat / scveat
  ConceptArgs veat_args, sc_args;
  PermutationFlags veat_flags, sc_flags;
  std::string veat_out, sc_out;
  auto* veat = app.add_subcommand("veat", "Two-target association test");
  veat->add_option("--x", veat_args.x, "Target concept X")->required();
  veat->add_option("--y", veat_args.y, "Target concept Y")->required();
  veat->add_option("--a", veat_args.a, "Attribute concept A")->required();
  veat->add_option("--b", veat_args.b, "Attribute concept B")->required();
  veat->add_option("--archive", veat_args.archives, "Embedding archive(s)")->required();
  veat_flags.attach(veat);
  add_output_dir(veat, veat_out);

  auto* scveat = app.add_subcommand("scveat", "Single-category association test");
  scveat->add_option("--x", sc_args.x, "Target concept")->required();
  scveat->add_option("--a", sc_args.a, "Attribute concept A")->required();
  scveat->add_option("--b", sc_args.b, "Attribute concept B")->required();
  scveat->add_option("--archive", sc_args.archives, "Embedding archive(s)")->required();
  sc_flags.attach(scveat);
  add_output_dir(scveat, sc_out);

  // battery
  std::string battery_config, battery_ref, battery_out;
  std::vector<std::string> battery_archives;
  PermutationFlags battery_flags;
  auto* battery = app.add_subcommand("battery", "Run a configured battery of tests");
  battery->add_option("battery", battery_config, "Battery config (JSON)")->required();
  battery->add_option("--archive", battery_archives, "Archive(s) replacing those in the config");
  battery->add_option("--reference-dir", battery_ref, "Reference data directory");
  battery_flags.attach(battery);
  add_output_dir(battery, battery_out);

  // correlate
  std::string corr_results, corr_ref, corr_out, corr_condition = "control";
  CorrelationSpec corr_spec;
  auto* correlate_cmd = app.add_subcommand("correlate", "Correlate effect sizes with reference data");
  correlate_cmd->add_option("--results", corr_results, "results.json from a battery run");
  correlate_cmd->add_option("--group", corr_spec.group, "Test group")->required();
  correlate_cmd->add_option("--axis", corr_spec.axis, "e.g. occupations.pct_male")->required();
  correlate_cmd->add_option("--condition", corr_condition)->check(CLI::IsMember(kConditions))
      ->capture_default_str();
  correlate_cmd->add_option("--source", corr_spec.source, "computed or reference")
      ->check(CLI::IsMember({"computed", "reference"}))
      ->capture_default_str();
  correlate_cmd->add_option("--reference-dir", corr_ref, "Reference data directory");
  add_output_dir(correlate_cmd, corr_out);

  // compare
  std::string cmp_results, cmp_group, cmp_out;
  auto* compare = app.add_subcommand("compare", "Control vs debias effect-size deltas");
  compare->add_option("--results", cmp_results, "results.json from a battery run")->required();
  compare->add_option("--group", cmp_group, "Restrict to one group");
  add_output_dir(compare, cmp_out);

  // agreement
  std::string annotations, group_a, group_b;
  std::optional<double> agreement_d;
  auto* agreement = app.add_subcommand("agreement", "Fleiss' kappa and directionality coherence");
  agreement->add_option("--annotations", annotations, "Annotation CSV")->required();
  agreement->add_option("--effect-size", agreement_d, "Effect size to check for coherence");
  agreement->add_option("--group-a", group_a, "Label counted as the A side");
  agreement->add_option("--group-b", group_b, "Label counted as the B side");

  // oracle-check
  std::size_t trials = 200;
  std::uint64_t oracle_seed = 0;
  auto* check = app.add_subcommand("oracle-check", "Compare the fast path with the reference oracle");
  check->add_option("--trials", trials, "Randomized instances")->capture_default_str();
  check->add_option("--seed", oracle_seed, "Instance generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  }

  try {
    if (pool->parsed()) return cmd_pool(frames, pool_output, normalize, out);
    if (veat->parsed()) return cmd_veat(veat_args, veat_flags, veat_out, out);
    if (scveat->parsed()) return cmd_scveat(sc_args, sc_flags, sc_out, out);
    if (battery->parsed()) return cmd_battery(battery_config, battery_archives, battery_ref, battery_flags, battery_out, out);
    if (correlate_cmd->parsed()) {
      corr_spec.condition = parse_condition(corr_condition);
      return cmd_correlate(corr_results, corr_spec, corr_ref, corr_out, out);
    }
    if (compare->parsed()) return cmd_compare(cmp_results, cmp_group, cmp_out, out);
    if (agreement->parsed()) return cmd_agreement(annotations, agreement_d, group_a, group_b, out);
    if (check->parsed()) return cmd_oracle_check(trials, oracle_seed, out, err);
  } catch (const IoError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kIo;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kValidation;
  }
  return kValidation;
}

}  // namespace veat::cli
