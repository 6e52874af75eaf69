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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace veat {

// Raw per-frame embeddings sampled from one video.
struct FrameSequence {
  std::string video_id;
  std::vector<double> timestamps;          // seconds, strictly increasing
  std::vector<Eigen::VectorXd> frames;     // one embedding per timestamp

  // Throws ValidationError when the sequence breaks its invariants.
  void validate() const;
};

// A pooled, per-video embedding with its concept label.
class VideoEmbedding {
 public:
  VideoEmbedding(std::string video_id, std::string concept_label,
                 Eigen::VectorXd vector, std::size_t n_frames,
                 std::optional<std::string> source_path = std::nullopt);

  const std::string& video_id() const noexcept { return video_id_; }
  const std::string& concept_label() const noexcept { return concept_; }
  Eigen::Index dim() const noexcept { return vector_.size(); }
  const Eigen::VectorXd& vector() const noexcept { return vector_; }
  std::size_t n_frames() const noexcept { return n_frames_; }
  const std::optional<std::string>& source_path() const noexcept { return source_path_; }

  bool is_zero() const { return (vector_.array() == 0.0).all(); }

  friend bool operator==(const VideoEmbedding&, const VideoEmbedding&) = default;

 private:
  std::string video_id_;
  std::string concept_;
  Eigen::VectorXd vector_;
  std::size_t n_frames_;
  std::optional<std::string> source_path_;
};

enum class Role { target, attribute };

// A named collection of same-dimension embeddings playing one role in a test.
//
// Members are held in the order given; group_by_concept() sorts them by
// video_id so that archive line order never reaches the statistics.
class ConceptSet {
 public:
  ConceptSet(std::string name, Role role, std::vector<VideoEmbedding> members);

  const std::string& name() const noexcept { return name_; }
  Role role() const noexcept { return role_; }
  const std::vector<VideoEmbedding>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  Eigen::Index dim() const noexcept { return members_.front().dim(); }

  // Column-per-member matrix (dim x size).
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  ConceptSet with_role(Role role) const;

 private:
  std::string name_;
  Role role_;
  std::vector<VideoEmbedding> members_;
  Eigen::MatrixXd matrix_;
};

struct PoolOptions {
  // L2-normalize each frame before averaging. Off by default.
  bool normalize_frames = false;
};

// Component-wise arithmetic mean of the frames.
VideoEmbedding pool_frames(const FrameSequence& seq, const std::string& concept_label,
                           const PoolOptions& options = {});

// Timestamps k * interval for k = 0, 1, ... while k * interval < duration.
std::vector<double> sampling_schedule(double duration, double interval);

// Groups embeddings by concept label; members sorted by video_id.
std::map<std::string, ConceptSet> group_by_concept(const std::vector<VideoEmbedding>& embeddings,
                                                   Role role = Role::target);

}  // namespace veat
