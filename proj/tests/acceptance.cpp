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

// Acceptance checks. Prints one PASS / FAIL / SKIP line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "helpers.hpp"
#include "veat/annotations.hpp"
#include "veat/archive.hpp"
#include "veat/association.hpp"
#include "veat/battery.hpp"
#include "veat/errors.hpp"
#include "veat/oracle.hpp"
#include "veat/reference_data.hpp"
#include "veat/report.hpp"
#include "veat/stats.hpp"
#include "veat/synthetic.hpp"

using namespace veat;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass(std::string detail) { return {Verdict::pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Verdict::fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Verdict::skip, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const oracle::CheckReport report = oracle::run_check(200, 20260101);
  const double elapsed = seconds_since(start);
  const std::string detail =
      fmt::format("{} instances, {} mismatches, max |stat err| {:.2e}, max |d err| {:.2e}, {:.2f} s",
                  report.trials, report.failures, report.max_statistic_error,
                  report.max_effect_size_error, elapsed);
  if (!report.ok()) return fail(detail + "; first: " + report.messages.front());
  if (elapsed >= 10.0) return fail(detail + " (limit 10 s)");
  return pass(detail);
}

Outcome monte_carlo_convergence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd x = testing::random_set(rng, 16, 10);
  const Eigen::MatrixXd y = testing::random_set(rng, 16, 10);
  const Eigen::MatrixXd a = testing::random_set(rng, 16, 8);
  const Eigen::MatrixXd b = testing::random_set(rng, 16, 8);

  // Monte Carlo counts draws with statistic >= observed, so the matching
  // exact quantity is the plus_one proportion.
  PermutationConfig exact_config;
  exact_config.tie_rule = TieRule::plus_one;
  exact_config.exact_threshold = 200000;
  const PermutationOutcome exact = veat_p_value(x, y, a, b, exact_config);
  if (exact.method != PValueMethod::exact || exact.partitions != 184756) {
    return fail("exact enumeration did not cover all 184756 partitions");
  }
  const double p0 = exact.p_value;
  if (p0 <= 0.0 || p0 >= 1.0) return fail(fmt::format("degenerate instance, exact p = {}", p0));

  const std::uint64_t draws = 100000;
  const double se = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(draws));
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PermutationConfig mc;
    mc.seed = seed;
    mc.iterations = draws;
    mc.exact_threshold = 1;  // forces sampling
    const PermutationOutcome outcome = veat_p_value(x, y, a, b, mc);
    if (outcome.method != PValueMethod::monte_carlo) return fail("Monte Carlo mode not selected");
    worst = std::max(worst, std::abs(outcome.p_value - p0) / se);
  }
  const double elapsed = seconds_since(start);
  const std::string detail = fmt::format(
      "exact p = {:.5f} over 184756 partitions; worst deviation {:.2f} SE across 20 seeds; {:.2f} s",
      p0, worst, elapsed);
  if (worst > 3.0) return fail(detail);
  if (elapsed >= 30.0) return fail(detail + " (limit 30 s)");
  return pass(detail);
}

Outcome oasis_baseline() {
  const ReferenceData reference = load_reference_data();
  std::vector<double> valence, effect;
  for (const auto& t : reference.oasis) {
    valence.push_back(t.valence_mean);
    effect.push_back(t.effect_size);
  }
  const double r = pearson_r(valence, effect);
  const std::string detail = fmt::format("r = {:.4f} over {} themes (target 0.91 +/- 0.03)", r,
                                         valence.size());
  return valence.size() == 10 && std::abs(r - 0.91) <= 0.03 ? pass(detail) : fail(detail);
}

Outcome effect_classification() {
  const std::vector<double> large = {1.54, 1.18, 1.04, 0.98, 1.13, 1.07, 1.41, 1.15, 1.35};
  std::string bad;
  for (double d : large) {
    if (classify_effect(d) != EffectClass::large) bad += fmt::format(" {} -> {}", d, to_string(classify_effect(d)));
  }
  if (classify_effect(0.24) != EffectClass::small) bad += fmt::format(" 0.24 -> {}", to_string(classify_effect(0.24)));
  if (!bad.empty()) return fail("misclassified:" + bad);
  return pass("9 large, 1 small");
}

Eigen::MatrixXd scale_columns(std::mt19937_64& rng, const Eigen::MatrixXd& m) {
  std::uniform_real_distribution<double> factor(0.05, 20.0);
  Eigen::MatrixXd out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) *= factor(rng);
  return out;
}

Outcome symmetry_suite() {
  constexpr int kCases = 500;
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> dim_dist(2, 8), size_dist(2, 6);
  auto close = [&](double u, double v) { return std::abs(u - v) <= kTol * std::max(1.0, std::abs(u)); };

  int violations = 0;
  std::string first;
  auto note = [&](int i, const std::string& what) {
    if (violations++ == 0) first = fmt::format("case {}: {}", i, what);
  };
  for (int i = 0; i < kCases; ++i) {
    const int dim = dim_dist(rng);
    const int n = size_dist(rng);
    const int na = size_dist(rng);
    const Eigen::MatrixXd x = testing::random_set(rng, dim, n);
    const Eigen::MatrixXd y = testing::random_set(rng, dim, n);
    const Eigen::MatrixXd a = testing::random_set(rng, dim, na);
    const Eigen::MatrixXd b = testing::random_set(rng, dim, size_dist(rng));
    const Eigen::MatrixXd b_eq = testing::random_set(rng, dim, na);

    const double s = veat_statistic(x, y, a, b);
    const double d = veat_effect_size(x, y, a, b);
    const double sc = scveat_statistic(x, a, b);
    const double dc = scveat_effect_size(x, a, b);

    if (!close(-s, veat_statistic(y, x, a, b))) note(i, "VEAT statistic X<->Y");
    if (!close(-s, veat_statistic(x, y, b, a))) note(i, "VEAT statistic A<->B");
    if (!close(-d, veat_effect_size(y, x, a, b))) note(i, "VEAT d X<->Y");
    if (!close(-d, veat_effect_size(x, y, b, a))) note(i, "VEAT d A<->B");
    if (!close(-sc, scveat_statistic(x, b, a))) note(i, "SC-VEAT statistic A<->B");
    if (!close(-dc, scveat_effect_size(x, b, a))) note(i, "SC-VEAT d A<->B");

    const Eigen::MatrixXd xs = scale_columns(rng, x), ys = scale_columns(rng, y);
    const Eigen::MatrixXd as = scale_columns(rng, a), bs = scale_columns(rng, b);
    if (!close(s, veat_statistic(xs, ys, as, bs))) note(i, "VEAT statistic scale");
    if (!close(d, veat_effect_size(xs, ys, as, bs))) note(i, "VEAT d scale");
    if (!close(sc, scveat_statistic(xs, as, bs))) note(i, "SC-VEAT statistic scale");
    if (!close(dc, scveat_effect_size(xs, as, bs))) note(i, "SC-VEAT d scale");

    PermutationConfig config;
    config.seed = static_cast<std::uint64_t>(i);
    config.iterations = 200;
    config.tie_rule = i % 2 ? TieRule::plus_one : TieRule::strict;
    config.exact_threshold = i % 3 ? 200000 : 1;  // every third case samples
    for (double p : {veat_p_value(x, y, a, b, config).p_value,
                     scveat_p_value(x, a, b_eq, config).p_value}) {
      if (!(p >= 0.0 && p <= 1.0)) note(i, fmt::format("p = {} outside [0, 1]", p));
    }
  }
  const std::string detail = fmt::format("{} cases, {} violations", kCases, violations);
  return violations == 0 ? pass(detail) : fail(detail + "; " + first);
}

Outcome determinism() {
  const auto start = std::chrono::steady_clock::now();
  testing::TempDir dir("acceptance");
  BatteryConfig config = read_battery_config(fs::path(VEAT_BATTERY_DIR) / "study.json");

  std::vector<std::string> concepts = referenced_concepts(config);
  for (int i = 1; concepts.size() < 122; ++i) concepts.push_back(fmt::format("filler {:02d}", i));
  SyntheticOptions options;
  options.seed = 2025;
  options.dim = 32;
  options.members = 10;
  options.planted = {{"flower", "pleasant", 0.5}, {"insect", "unpleasant", 0.5}};
  const fs::path archive = dir / "synthetic.jsonl";
  write_archive(synthesize_archive(concepts, options), archive);

  config.archives = {archive};
  config.permutation.iterations = 5000;
  const ResolvedBattery battery = load_battery(config, load_reference_data());
  const std::string first = results_json_text(run_battery(battery, 1));
  const std::string second = results_json_text(run_battery(battery, 1));
  const std::string threaded = results_json_text(run_battery(battery, 8));
  const std::string detail =
      fmt::format("{} concept sets, {} tests, results.json {} bytes, {:.2f} s", concepts.size(),
                  battery.config.veat_tests.size() + battery.config.scveat_tests.size(),
                  first.size(), seconds_since(start));
  if (first != second) return fail(detail + "; repeated single-thread runs differ");
  if (first != threaded) return fail(detail + "; 1 vs 8 threads differ");
  return pass(detail);
}

// Runs `f`, which must throw exactly E.
template <typename E>
bool raises(const std::function<void()>& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

Outcome degenerate_handling() {
  std::string bad;
  const Eigen::MatrixXd x = testing::cols({{1, 0}, {0, 1}});
  const Eigen::MatrixXd y = testing::cols({{1, 1}, {2, 1}});
  const Eigen::MatrixXd a = testing::cols({{1, 2}, {3, 1}});

  // A == B: every item score is zero, so the pooled std is zero.
  if (!raises<DegenerateError>([&] { veat_effect_size(x, y, a, a); })) bad += " veat zero-variance;";
  if (!raises<DegenerateError>([&] { scveat_effect_size(x, a, a); })) bad += " scveat zero-variance;";
  {
    PermutationConfig strict;
    PermutationConfig plus_one;
    plus_one.tie_rule = TieRule::plus_one;
    const double p_strict = veat_p_value(x, y, a, a, strict).p_value;
    const double p_plus = veat_p_value(x, y, a, a, plus_one).p_value;
    if (p_strict != 0.0 || p_plus != 1.0) bad += " full-tie p-values;";
  }

  const Eigen::MatrixXd with_zero = testing::cols({{1, 0}, {0, 0}});
  if (!raises<ValidationError>([&] { veat_statistic(with_zero, y, a, y); })) bad += " zero target vector;";
  if (!raises<ValidationError>([&] { scveat_statistic(x, with_zero, y); })) bad += " zero attribute vector;";
  if (!raises<ValidationError>([&] { testing::concept_set("c", with_zero); })) {
    bad += " zero member accepted by concept set;";
  }

  const Eigen::MatrixXd y3 = testing::cols({{1, 1}, {2, 1}, {0, 3}});
  if (!raises<ValidationError>([&] { veat_statistic(x, y3, a, y); })) bad += " unequal targets (statistic);";
  if (!raises<ValidationError>([&] { veat_p_value(x, y3, a, y, {}); })) bad += " unequal targets (p);";

  std::vector<AnnotationRecord> ann = {{"v1", "r1", "Man"},   {"v1", "r2", "Woman"},
                                       {"v1", "r3", "Other"}, {"v2", "r1", "Man"},
                                       {"v2", "r2", "Man"},   {"v2", "r3", "Woman"}};
  const auto labels = majority_labels(ann);
  if (labels.at("v1") != kCantAnswer || labels.at("v2") != "Man") bad += " three-way tie label;";
  const double kappa = fleiss_kappa(ann);
  if (!std::isfinite(kappa)) bad += " kappa not finite;";
  if (directionality_coherence(1.0, ann, "Man", "Woman") != Coherence::aligned) bad += " coherence with tie;";

  if (!bad.empty()) return fail("unexpected outcome:" + bad);
  return pass("zero variance, zero vectors, unequal targets and three-way ties handled");
}

Outcome fleiss() {
  Eigen::MatrixXd perfect(4, 2);
  perfect << 3, 0, 0, 3, 3, 0, 0, 3;
  const double k1 = fleiss_kappa(perfect);
  Eigen::MatrixXd worked(10, 5);
  worked << 0, 0, 0, 0, 14, 0, 2, 6, 4, 2, 0, 0, 3, 5, 6, 0, 3, 9, 2, 0, 2, 2, 8, 1, 1,
            7, 7, 0, 0, 0, 3, 2, 6, 3, 0, 2, 5, 3, 2, 2, 6, 5, 2, 1, 0, 0, 2, 2, 3, 7;
  const double expected = 4211.0 / 20059.0;  // exact-fraction hand computation
  const double k2 = fleiss_kappa(worked);
  const std::string detail =
      fmt::format("perfect = {}, worked example = {:.8f} (expected {:.8f})", k1, k2, expected);
  return k1 == 1.0 && std::abs(k2 - expected) <= 1e-6 ? pass(detail) : fail(detail);
}

// Released annotation data is not bundled. Point these variables at
// video_id,annotator_id,category CSVs to reproduce the published kappas.
Outcome released_annotations() {
  struct Case {
    const char* env;
    double expected;
  };
  std::vector<std::string> parts;
  bool any = false, ok = true;
  for (const Case& c : {Case{"VEAT_RACE_ANNOTATIONS", 0.83}, Case{"VEAT_GENDER_ANNOTATIONS", 1.0}}) {
    const char* path = std::getenv(c.env);
    if (path == nullptr || *path == '\0') continue;
    any = true;
    const double k = fleiss_kappa(read_annotations(fs::path(path)));
    const bool match = std::abs(k - c.expected) <= 0.005;
    ok = ok && match;
    parts.push_back(fmt::format("{}: kappa = {:.4f} (expected {:.2f})", c.env, k, c.expected));
  }
  if (!any) return skip("set VEAT_RACE_ANNOTATIONS / VEAT_GENDER_ANNOTATIONS to check released data");
  return ok ? pass(fmt::format("{}", fmt::join(parts, "; "))) : fail(fmt::format("{}", fmt::join(parts, "; ")));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"monte carlo convergence", monte_carlo_convergence},
      {"oasis baseline correlation", oasis_baseline},
      {"effect size classification", effect_classification},
      {"symmetry suite", symmetry_suite},
      {"determinism", determinism},
      {"degenerate handling", degenerate_handling},
      {"fleiss kappa", fleiss},
      {"released annotation kappas", released_annotations},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const char* tag = outcome.verdict == Verdict::pass   ? "PASS"
                      : outcome.verdict == Verdict::fail ? "FAIL"
                                                         : "SKIP";
    if (outcome.verdict == Verdict::fail) ++failures;
    std::cout << tag << "  " << name << ": " << outcome.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
