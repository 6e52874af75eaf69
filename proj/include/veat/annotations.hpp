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
#include <string>
#include <vector>

namespace veat {

inline constexpr const char* kCantAnswer = "Can't answer";
inline constexpr const char* kOther = "Other";

struct AnnotationRecord {
  std::string video_id;
  std::string annotator_id;
  std::string category;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

// CSV with header video_id,annotator_id,category. Rejects a second record
// for the same (video_id, annotator_id).
std::vector<AnnotationRecord> read_annotations(std::istream& in, const std::string& source_name);
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);

}  // namespace veat
