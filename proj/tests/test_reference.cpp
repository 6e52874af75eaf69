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
#include <set>

#include "helpers.hpp"
#include "veat/checksum.hpp"
#include "veat/errors.hpp"
#include "veat/reference_data.hpp"
#include "veat/stats.hpp"

using namespace veat;

TEST_SUITE("reference") {

TEST_CASE("bundled tables load and verify") {
  const ReferenceData ref = load_reference_data(VEAT_REFERENCE_DIR);
  CHECK(ref.oasis.size() == 10);
  CHECK(ref.awards.size() == 7);
  CHECK(ref.occupations.size() == 20);
  CHECK(ref.weat_stimuli.size() == 10);
  CHECK(ref.checksums.size() == 5);
  CHECK(ref.debias_prompts.at("control").empty());
  CHECK(ref.debias_prompts.at("debias2").find("output") != std::string::npos);
}

TEST_CASE("seventeen distinct occupations behind twenty rows") {
  const ReferenceData ref = load_reference_data(VEAT_REFERENCE_DIR);
  std::set<std::string> keys;
  for (const auto& o : ref.occupations) keys.insert(o.key);
  CHECK(keys.size() == 17);
  const auto* doctor = ref.find_occupation("Doctor ");
  REQUIRE(doctor);
  CHECK(axis_value(*doctor, "pct_male") == doctest::Approx(100.0 - 36.7));
  CHECK(ref.find_occupation("astronaut") == nullptr);
}

TEST_CASE("award percentages derive from laureate counts") {
  const ReferenceData ref = load_reference_data(VEAT_REFERENCE_DIR);
  const auto* turing = ref.find_award("turing award");
  REQUIRE(turing);
  CHECK(axis_value(*turing, "pct_non_black") == 100.0);
  const auto* peace = ref.find_award("nobel peace prize");
  REQUIRE(peace);
  CHECK(axis_value(*peace, "pct_male") == doctest::Approx((111.0 - 19.0) / 111.0 * 100.0));
  CHECK_THROWS_AS(axis_value(*peace, "pct_women_in_stem"), ValidationError);
  CHECK_THROWS_AS(axis_value(*peace, "pct_white"), ValidationError);
}

TEST_CASE("OASIS valence means correlate with the tabulated effect sizes") {
  const ReferenceData ref = load_reference_data(VEAT_REFERENCE_DIR);
  std::vector<double> valence, d;
  for (const auto& t : ref.oasis) {
    valence.push_back(t.valence_mean);
    d.push_back(t.effect_size);
  }
  const double r = pearson_r(valence, d);
  CHECK(r == doctest::Approx(0.91174151).epsilon(1e-7));
  CHECK(std::abs(r - 0.91) <= 0.03);
}

TEST_CASE("tampered reference files are refused") {
  testing::TempDir dir("ref");
  for (const auto& entry : std::filesystem::directory_iterator(VEAT_REFERENCE_DIR)) {
    std::filesystem::copy_file(entry.path(), dir / entry.path().filename().string());
  }
  CHECK_NOTHROW(load_reference_data(dir.path()));
  {
    std::ofstream out(dir / "oasis.json", std::ios::app);
    out << " ";
  }
  CHECK_THROWS_WITH_AS(load_reference_data(dir.path()), doctest::Contains("checksum"), ValidationError);
  std::filesystem::remove(dir / "oasis.json");
  CHECK_THROWS_AS(load_reference_data(dir.path()), IoError);
}

TEST_CASE("label normalization") {
  CHECK(normalize_label("  Postal   Service Worker ") == "postal service worker");
  CHECK(normalize_label("Nobel\tPeace Prize") == "nobel peace prize");
}

TEST_CASE("sha256 of known inputs") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("record validation") {
  DemographicRecord r{"X", "x", "Male", 120.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(r.validate(), ValidationError);
  DemographicRecord c{"Y", "y", "STEM", std::nullopt, std::nullopt, std::nullopt, 10, 0, 5};
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

}  // TEST_SUITE
