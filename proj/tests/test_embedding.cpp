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

#include "helpers.hpp"
#include "veat/embedding.hpp"
#include "veat/errors.hpp"

using namespace veat;

TEST_SUITE("embedding") {

TEST_CASE("five second clip sampled every quarter second gives twenty frames") {
  const auto schedule = sampling_schedule(5.0, 0.25);
  REQUIRE(schedule.size() == 20);
  CHECK(schedule.front() == 0.0);
  CHECK(schedule.back() == doctest::Approx(4.75));
  CHECK(sampling_schedule(0.1, 1.0).size() == 1);
  CHECK_THROWS_AS(sampling_schedule(5.0, 0.0), ValidationError);
  CHECK_THROWS_AS(sampling_schedule(0.0, 0.25), ValidationError);
}

TEST_CASE("pooling is the component-wise mean") {
  FrameSequence seq{"v1", {0.0, 0.25, 0.5}, {}};
  seq.frames.push_back(Eigen::Vector3d(1, 2, 3));
  seq.frames.push_back(Eigen::Vector3d(3, 2, 1));
  seq.frames.push_back(Eigen::Vector3d(2, 5, 2));
  const VideoEmbedding e = pool_frames(seq, "flower");
  CHECK(e.video_id() == "v1");
  CHECK(e.concept_label() == "flower");
  CHECK(e.n_frames() == 3);
  CHECK(e.vector().isApprox(Eigen::Vector3d(2, 3, 2), 1e-15));
}

TEST_CASE("single frame pools to itself") {
  FrameSequence seq{"still", {0.0}, {Eigen::Vector2d(0.3, -0.7)}};
  CHECK(pool_frames(seq, "c").vector() == Eigen::Vector2d(0.3, -0.7));
}

TEST_CASE("normalized pooling averages unit frames") {
  FrameSequence seq{"v", {0.0, 1.0}, {Eigen::Vector2d(10, 0), Eigen::Vector2d(0, 2)}};
  PoolOptions options;
  options.normalize_frames = true;
  CHECK(pool_frames(seq, "c", options).vector().isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK(pool_frames(seq, "c").vector().isApprox(Eigen::Vector2d(5, 1)));
}

TEST_CASE("frames that cancel out are rejected") {
  FrameSequence seq{"v", {0.0, 1.0}, {Eigen::Vector2d(1, -1), Eigen::Vector2d(-1, 1)}};
  CHECK_THROWS_AS(pool_frames(seq, "c"), ValidationError);
}

TEST_CASE("malformed frame sequences") {
  FrameSequence empty{"v", {}, {}};
  CHECK_THROWS_AS(pool_frames(empty, "c"), ValidationError);
  FrameSequence ragged{"v", {0.0, 1.0}, {Eigen::Vector2d(1, 0), Eigen::Vector3d(1, 0, 0)}};
  CHECK_THROWS_AS(pool_frames(ragged, "c"), ValidationError);
  FrameSequence unordered{"v", {1.0, 0.5}, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}};
  CHECK_THROWS_AS(pool_frames(unordered, "c"), ValidationError);
  FrameSequence mismatched{"v", {0.0}, {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}};
  CHECK_THROWS_AS(pool_frames(mismatched, "c"), ValidationError);
}

TEST_CASE("video embeddings validate their contents") {
  CHECK_THROWS_AS(VideoEmbedding("", "c", Eigen::Vector2d(1, 0), 1, std::nullopt), ValidationError);
  CHECK_THROWS_AS(VideoEmbedding("v", "", Eigen::Vector2d(1, 0), 1, std::nullopt), ValidationError);
  CHECK_THROWS_AS(VideoEmbedding("v", "c", Eigen::VectorXd(), 1, std::nullopt), ValidationError);
  CHECK_THROWS_AS(VideoEmbedding("v", "c", Eigen::Vector2d(1, 0), 0, std::nullopt), ValidationError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(VideoEmbedding("v", "c", Eigen::Vector2d(nan, 0), 1, std::nullopt), ValidationError);
  CHECK(VideoEmbedding("v", "c", Eigen::Vector2d(0, 0), 1, std::nullopt).is_zero());
}

TEST_CASE("concept sets enforce size, dimension and non-zero members") {
  using testing::concept_set;
  using testing::cols;
  CHECK_NOTHROW(concept_set("x", cols({{1, 0}, {0, 1}})));
  CHECK_THROWS_AS(concept_set("x", cols({{1, 0}})), ValidationError);
  CHECK_THROWS_AS(concept_set("x", cols({{1, 0}, {0, 0}})), ValidationError);

  std::vector<VideoEmbedding> mixed{
      VideoEmbedding("a", "x", Eigen::Vector2d(1, 0), 1, std::nullopt),
      VideoEmbedding("b", "x", Eigen::Vector3d(1, 0, 0), 1, std::nullopt)};
  CHECK_THROWS_AS(ConceptSet("x", Role::target, mixed), ValidationError);

  std::vector<VideoEmbedding> dup{VideoEmbedding("a", "x", Eigen::Vector2d(1, 0), 1, std::nullopt),
                                  VideoEmbedding("a", "x", Eigen::Vector2d(0, 1), 1, std::nullopt)};
  CHECK_THROWS_AS(ConceptSet("x", Role::target, dup), ValidationError);
}

TEST_CASE("concept matrix has one column per member") {
  const ConceptSet s = testing::concept_set("x", testing::cols({{1, 2, 3}, {4, 5, 6}}));
  CHECK(s.matrix().rows() == 3);
  CHECK(s.matrix().cols() == 2);
  CHECK(s.matrix()(2, 1) == 6);
  CHECK(s.with_role(Role::attribute).role() == Role::attribute);
}

TEST_CASE("grouping sorts members so archive order does not matter") {
  std::vector<VideoEmbedding> e{
      VideoEmbedding("v2", "flower", Eigen::Vector2d(1, 1), 1, std::nullopt),
      VideoEmbedding("v9", "insect", Eigen::Vector2d(1, -1), 1, std::nullopt),
      VideoEmbedding("v1", "flower", Eigen::Vector2d(1, 0), 1, std::nullopt),
      VideoEmbedding("v3", "insect", Eigen::Vector2d(0, 1), 1, std::nullopt)};
  auto groups = group_by_concept(e);
  REQUIRE(groups.size() == 2);
  CHECK(groups.at("flower").members()[0].video_id() == "v1");
  CHECK(groups.at("insect").members()[0].video_id() == "v3");

  std::reverse(e.begin(), e.end());
  auto again = group_by_concept(e);
  CHECK(again.at("flower").matrix() == groups.at("flower").matrix());
}

}  // TEST_SUITE
