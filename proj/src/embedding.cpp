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

#include "veat/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "veat/errors.hpp"

namespace veat {

void FrameSequence::validate() const {
  if (frames.empty()) {
    throw ValidationError("frame sequence '" + video_id + "' has no frames");
  }
  if (timestamps.size() != frames.size()) {
    throw ValidationError("frame sequence '" + video_id + "' has " +
                          std::to_string(timestamps.size()) + " timestamps but " +
                          std::to_string(frames.size()) + " frames");
  }
  const Eigen::Index dim = frames.front().size();
  if (dim < 1) {
    throw ValidationError("frame sequence '" + video_id + "' has zero-dimension frames");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].size() != dim) {
      throw ValidationError("frame sequence '" + video_id + "': frame " + std::to_string(i) +
                            " has dimension " + std::to_string(frames[i].size()) +
                            ", expected " + std::to_string(dim));
    }
    if (!frames[i].allFinite()) {
      throw ValidationError("frame sequence '" + video_id + "': frame " + std::to_string(i) +
                            " is not finite");
    }
  }
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    if (!(timestamps[i] >= 0.0) || !std::isfinite(timestamps[i])) {
      throw ValidationError("frame sequence '" + video_id + "': negative timestamp");
    }
    if (i > 0 && !(timestamps[i] > timestamps[i - 1])) {
      throw ValidationError("frame sequence '" + video_id +
                            "': timestamps are not strictly increasing");
    }
  }
}

VideoEmbedding::VideoEmbedding(std::string video_id, std::string concept_label,
                               Eigen::VectorXd vector, std::size_t n_frames,
                               std::optional<std::string> source_path)
    : video_id_(std::move(video_id)),
      concept_(std::move(concept_label)),
      vector_(std::move(vector)),
      n_frames_(n_frames),
      source_path_(std::move(source_path)) {
  if (video_id_.empty()) {
    throw ValidationError("video embedding has an empty video_id");
  }
  if (concept_.empty()) {
    throw ValidationError("video embedding '" + video_id_ + "' has an empty concept label");
  }
  if (vector_.size() < 1) {
    throw ValidationError("video embedding '" + video_id_ + "' has dimension 0");
  }
  if (n_frames_ < 1) {
    throw ValidationError("video embedding '" + video_id_ + "' has n_frames = 0");
  }
  if (!vector_.allFinite()) {
    throw ValidationError("video embedding '" + video_id_ + "' contains non-finite values");
  }
}

ConceptSet::ConceptSet(std::string name, Role role, std::vector<VideoEmbedding> members)
    : name_(std::move(name)), role_(role), members_(std::move(members)) {
  if (members_.size() < 2) {
    throw ValidationError("concept set '" + name_ + "' needs at least 2 members, has " +
                          std::to_string(members_.size()));
  }
  const Eigen::Index dim = members_.front().dim();
  std::set<std::string> ids;
  for (const auto& m : members_) {
    if (m.dim() != dim) {
      throw ValidationError("concept set '" + name_ + "': member '" + m.video_id() +
                            "' has dimension " + std::to_string(m.dim()) + ", expected " +
                            std::to_string(dim));
    }
    if (m.is_zero()) {
      throw ValidationError("concept set '" + name_ + "': member '" + m.video_id() +
                            "' is the zero vector");
    }
    if (!ids.insert(m.video_id()).second) {
      throw ValidationError("concept set '" + name_ + "': duplicate video_id '" +
                            m.video_id() + "'");
    }
  }
  matrix_.resize(dim, static_cast<Eigen::Index>(members_.size()));
  for (std::size_t j = 0; j < members_.size(); ++j) {
    matrix_.col(static_cast<Eigen::Index>(j)) = members_[j].vector();
  }
}

ConceptSet ConceptSet::with_role(Role role) const {
  ConceptSet copy = *this;
  copy.role_ = role;
  return copy;
}

VideoEmbedding pool_frames(const FrameSequence& seq, const std::string& concept_label,
                           const PoolOptions& options) {
  seq.validate();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(seq.frames.front().size());
  for (const auto& frame : seq.frames) {
    if (options.normalize_frames) {
      const double norm = frame.norm();
      if (norm == 0.0) {
        throw ValidationError("frame sequence '" + seq.video_id +
                              "': cannot normalize a zero frame");
      }
      sum += frame / norm;
    } else {
      sum += frame;
    }
  }
  Eigen::VectorXd mean = sum / static_cast<double>(seq.frames.size());
  if ((mean.array() == 0.0).all()) {
    throw ValidationError("frame sequence '" + seq.video_id + "' pools to the zero vector");
  }
  return VideoEmbedding(seq.video_id, concept_label, std::move(mean), seq.frames.size());
}

std::vector<double> sampling_schedule(double duration, double interval) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("sampling duration must be positive");
  }
  if (!(interval > 0.0) || !std::isfinite(interval)) {
    throw ValidationError("sampling interval must be positive");
  }
  // k * interval that lands within rounding of duration counts as reaching it.
  const double slack = 1e-9 * interval;
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * interval;
    if (!(t < duration - slack)) break;
    out.push_back(t);
  }
  return out;
}

std::map<std::string, ConceptSet> group_by_concept(const std::vector<VideoEmbedding>& embeddings,
                                                   Role role) {
  std::map<std::string, std::vector<VideoEmbedding>> buckets;
  for (const auto& e : embeddings) buckets[e.concept_label()].push_back(e);

  std::map<std::string, ConceptSet> out;
  for (auto& [name, members] : buckets) {
    std::sort(members.begin(), members.end(),
              [](const VideoEmbedding& a, const VideoEmbedding& b) {
                return a.video_id() < b.video_id();
              });
    out.emplace(name, ConceptSet(name, role, std::move(members)));
  }
  return out;
}

}  // namespace veat
