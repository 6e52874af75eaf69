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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "veat/embedding.hpp"

namespace veat {

// JSON Lines embedding archive. One record per line with the fields
// video_id, concept, dim, n_frames, vector, source_path.

std::vector<VideoEmbedding> read_archive(const std::filesystem::path& path);
std::vector<VideoEmbedding> read_archive(std::istream& in, const std::string& source_name);

void write_archive(const std::vector<VideoEmbedding>& embeddings,
                   const std::filesystem::path& path);
void write_archive(const std::vector<VideoEmbedding>& embeddings, std::ostream& out);

// Per-frame input for pooling: JSON Lines with video_id, concept, frames
// (array of equal-length arrays) and optional timestamps / source_path.
// Missing timestamps default to the 0.25 s sampling schedule.
struct FrameRecord {
  std::string concept_label;
  FrameSequence sequence;
  std::optional<std::string> source_path;
};

std::vector<FrameRecord> read_frame_records(std::istream& in, const std::string& source_name);
std::vector<FrameRecord> read_frame_records(const std::filesystem::path& path);

// Loads every archive and groups the union by concept.
std::map<std::string, ConceptSet> load_concepts(const std::vector<std::filesystem::path>& archives);

}  // namespace veat
