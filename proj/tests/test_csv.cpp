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

#include <cmath>
#include <limits>
#include <sstream>

#include "veat/annotations.hpp"
#include "veat/csv.hpp"
#include "veat/errors.hpp"

using namespace veat;

TEST_SUITE("csv") {

TEST_CASE("fields are quoted only when needed") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv::escape("two\nlines") == "\"two\nlines\"");
  CHECK(csv::format_row({"a", "b,c", ""}) == "a,\"b,c\",\r\n");
}

TEST_CASE("parse inverts format") {
  const std::vector<csv::Row> rows{{"test", "d"},
                                   {"Eur-Americans vs Afr-Americans", "1.13"},
                                   {"quote \" inside, and comma", "multi\r\nline"},
                                   {"", "trailing"}};
  std::string text;
  for (const auto& r : rows) text += csv::format_row(r);
  CHECK(csv::parse(text) == rows);
  CHECK(csv::parse("a,b\nc,d\n") == std::vector<csv::Row>{{"a", "b"}, {"c", "d"}});
  CHECK_THROWS_AS(csv::parse("\"open"), ParseError);
}

TEST_CASE("doubles round-trip through their shortest form") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1.7320508075688772, 123456789.0, 5e-324,
                   std::numeric_limits<double>::max()}) {
    const std::string s = csv::format_double(v);
    CHECK(csv::parse_double(s) == v);
  }
  CHECK(csv::format_double(0.5) == "0.5");
  CHECK_THROWS_AS(csv::parse_double("1.5x"), ValidationError);
  CHECK_THROWS_AS(csv::parse_double(""), ValidationError);
}

TEST_CASE("annotations reader") {
  std::istringstream good(
      "category,video_id,annotator_id\nMan,v1,r1\nWoman,v1,r2\n\"Can't answer\",v2,r1\n");
  const auto records = read_annotations(good, "ann.csv");
  REQUIRE(records.size() == 3);
  CHECK(records[0] == AnnotationRecord{"v1", "r1", "Man"});
  CHECK(records[2].category == kCantAnswer);

  std::istringstream dup("video_id,annotator_id,category\nv1,r1,Man\nv1,r1,Woman\n");
  CHECK_THROWS_WITH_AS(read_annotations(dup, "ann.csv"), doctest::Contains("ann.csv:3"), ParseError);
  std::istringstream header("video,annotator,category\n");
  CHECK_THROWS_AS(read_annotations(header, "ann.csv"), ParseError);
  std::istringstream short_row("video_id,annotator_id,category\nv1,r1\n");
  CHECK_THROWS_AS(read_annotations(short_row, "ann.csv"), ParseError);
  CHECK_THROWS_AS(read_annotations(std::filesystem::path("/nonexistent/ann.csv")), IoError);
}

}  // TEST_SUITE
