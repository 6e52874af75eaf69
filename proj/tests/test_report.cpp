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

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "veat/csv.hpp"
#include "veat/errors.hpp"
#include "veat/report.hpp"

using namespace veat;

namespace {

NamedTestResult veat_row(const std::string& name, double d, double p) {
  NamedTestResult t;
  t.name = name;
  t.x = "european american";
  t.y = "african american";
  t.a = "pleasant";
  t.b = "unpleasant";
  t.result.kind = TestKind::veat;
  t.result.statistic = 0.1 + d / 3.0;
  t.result.effect_size = d;
  t.result.p_value = p;
  t.result.method = PValueMethod::monte_carlo;
  t.result.iterations = 100000;
  t.result.seed = 0xfedcba9876543210ull;
  t.result.mean_x = 0.0123456789012345;
  t.result.mean_y = -0.003;
  t.result.pooled_std = 1.0 / 7.0;
  t.result.item_scores = {{"v1", 0.1}, {"v2", 1.0 / 3.0}};
  return t;
}

NamedTestResult scveat_row(const std::string& scenario, Condition c, double d) {
  NamedTestResult t;
  t.name = scenario + " / " + std::string(to_string(c));
  t.x = scenario;
  t.a = "man";
  t.b = "woman";
  t.condition = c;
  t.group = "occupation-gender";
  t.label = scenario;
  t.result.kind = TestKind::scveat;
  t.result.effect_size = d;
  t.result.p_value = 0.2;
  t.result.partitions = 252;
  t.result.mean_x = d / 10.0;
  t.result.pooled_std = 0.1;
  return t;
}

BatteryResults sample_results() {
  BatteryResults r;
  r.tests.push_back(veat_row("Eur-Americans vs Afr-Americans", 1.13, 0.00001));
  r.tests.push_back(veat_row("Afr-American Women vs Eur-American Women", 0.24, 0.351));
  r.tests.push_back(scveat_row("janitor", Condition::control, 0.31));
  r.tests.push_back(scveat_row("janitor", Condition::debias1, -0.12));
  NamedCorrelation c;
  c.group = "occupation-gender";
  c.axis = "occupations.pct_male";
  c.source = "computed";
  c.result.r = 0.9312345678901234;
  c.result.n = 3;
  c.result.pairs = {{"a", 0.1, 1}, {"b", 0.2, 2}, {"c", 0.3, 4}};
  r.correlations.push_back(c);
  ComparisonResult cmp;
  cmp.scenario = "janitor";
  cmp.d_control = 0.31;
  cmp.d_debias1 = -0.12;
  cmp.delta1 = -0.12 - 0.31;
  cmp.sign_flip1 = true;
  cmp.class_control = EffectClass::small;
  cmp.class_debias1 = EffectClass::neutral;
  r.comparisons.push_back({"occupation-gender", cmp});
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("significance stars are a function of p alone") {
  CHECK(significance_stars(0.0) == "***");
  CHECK(significance_stars(0.0009) == "***");
  CHECK(significance_stars(0.001) == "**");
  CHECK(significance_stars(0.0099) == "**");
  CHECK(significance_stars(0.01) == "*");
  CHECK(significance_stars(0.0499) == "*");
  CHECK(significance_stars(0.05) == "");
  CHECK(significance_stars(0.351) == "");
}

TEST_CASE("markdown rows round to four decimals and carry stars") {
  const std::string md = report_markdown(sample_results());
  CHECK(md.find("| Eur-Americans vs Afr-Americans | 1.1300 | *** | 0.0000 |") != std::string::npos);
  CHECK(md.find("| Afr-American Women vs Eur-American Women | 0.2400 |  | 0.3510 |") != std::string::npos);
  CHECK(md.find("| occupation-gender | occupations.pct_male | 0.9312 | 3 |") != std::string::npos);
  CHECK(md.find("| occupation-gender | janitor | 0.3100 | -0.1200 | -0.4300 | n/a | n/a | debias1 |") !=
        std::string::npos);
}

TEST_CASE("report bundle lists each test once") {
  const ReportBundle b = build_report(sample_results());
  CHECK(b.results_table.size() == 4);
  CHECK(b.results_table[0].classification == EffectClass::large);
  CHECK(b.correlation_table.size() == 1);
  CHECK(b.comparison_matrix.size() == 2);
  CHECK(b.summary.find("4 association tests: 1 significant") != std::string::npos);
}

TEST_CASE("JSON round trip is lossless") {
  const BatteryResults r = sample_results();
  CHECK(results_from_json(to_json(r)) == r);
  CHECK(results_from_json(nlohmann::json::parse(results_json_text(r))) == r);
  CHECK(test_result_from_json(to_json(r.tests[0].result)) == r.tests[0].result);
  CHECK_THROWS_AS(results_from_json(nlohmann::json::object()), ValidationError);
}

TEST_CASE("CSV values equal JSON values at full precision") {
  const BatteryResults r = sample_results();
  const auto rows = csv::parse(results_csv(r));
  REQUIRE(rows.size() == 5);
  const auto& header = rows[0];
  auto column = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  const auto json = nlohmann::json::parse(results_json_text(r));
  for (std::size_t i = 0; i < r.tests.size(); ++i) {
    const auto& jr = json["tests"][i]["result"];
    CHECK(csv::parse_double(rows[i + 1][column("effect_size")]) == jr["effect_size"].get<double>());
    CHECK(csv::parse_double(rows[i + 1][column("p_value")]) == jr["p_value"].get<double>());
    CHECK(csv::parse_double(rows[i + 1][column("mean_x")]) == jr["group_means"]["x"].get<double>());
    CHECK(rows[i + 1][column("seed")] == std::to_string(jr["seed"].get<std::uint64_t>()));
  }
  CHECK(rows[3][column("mean_y")].empty());
}

TEST_CASE("comparison CSV is long format") {
  const auto rows = csv::parse(comparisons_csv(sample_results()));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == csv::Row{"scenario", "condition", "axis", "d"});
  CHECK(rows[1] == csv::Row{"janitor", "control", "occupation-gender", "0.31"});
  CHECK(rows[2][1] == "debias1");
}

TEST_CASE("emitters write the documented files and skip empty tables") {
  testing::TempDir dir("report");
  BatteryResults r = sample_results();
  auto written = emit_csv(r, dir.path());
  CHECK(written.size() == 3);
  emit_json(r, dir.path());
  emit_markdown(r, dir.path());
  CHECK(read_results_json(dir / "results.json") == r);
  CHECK(slurp(dir / "results.json") == results_json_text(r));

  testing::TempDir bare("report-bare");
  r.comparisons.clear();
  r.correlations.clear();
  written = emit_csv(r, bare.path());
  CHECK(written.size() == 1);
  CHECK(!std::filesystem::exists(bare / "comparisons.csv"));
  CHECK(report_markdown(r).find("Debias comparisons") == std::string::npos);

  CHECK_THROWS_AS(emit_json(BatteryResults{}, dir.path()), ValidationError);
  CHECK_THROWS_AS(emit_json(r, dir / "missing" / "deeper"), IoError);
}

TEST_CASE("manifest round trip and diffs") {
  RunManifest m;
  m.tool_version = "0.1.0";
  m.config_sha256 = "abc";
  m.archives = {{"e.jsonl", "123"}};
  m.reference_data = {{"oasis.json", "456"}};
  m.permutation.seed = 9;
  m.test_count = 4;
  m.results_sha256 = "def";
  m.generated_at = "2026-01-01T00:00:00Z";
  testing::TempDir dir("manifest");
  emit_manifest(m, dir.path());
  const RunManifest back = read_manifest(dir / "manifest.json");
  CHECK(back == m);

  RunManifest other = m;
  other.permutation.seed = 10;
  other.results_sha256 = "xyz";
  const auto diff = diff_manifests(m, other);
  CHECK(diff == std::vector<std::string>{"seed differs", "results_sha256 differs"});
  CHECK(diff_manifests(m, back).empty());
}

TEST_CASE("result diffs name what moved") {
  const BatteryResults a = sample_results();
  BatteryResults b = a;
  b.tests[1].result.p_value = 0.4;
  b.tests.pop_back();
  const auto diff = diff_results(a, b);
  REQUIRE(diff.size() == 2);
  CHECK(diff[0] == "test 'Afr-American Women vs Eur-American Women': p_value 0.351 -> 0.4");
  CHECK(diff[1] == "test 'janitor / debias1' removed");
  CHECK(diff_results(a, a).empty());
}

}  // TEST_SUITE
