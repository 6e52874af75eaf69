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

#include "veat/annotations.hpp"

#include <fstream>
#include <set>
#include <utility>

#include "veat/csv.hpp"
#include "veat/errors.hpp"

namespace veat {

std::vector<AnnotationRecord> read_annotations(std::istream& in, const std::string& source_name) {
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(in);
  } catch (const ParseError& e) {
    throw ParseError(source_name, e.line(), e.what());
  }
  if (rows.empty()) throw ParseError(source_name, 1, "missing header");

  const csv::Row& header = rows.front();
  int col_video = -1, col_annotator = -1, col_category = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "video_id") col_video = static_cast<int>(i);
    if (header[i] == "annotator_id") col_annotator = static_cast<int>(i);
    if (header[i] == "category") col_category = static_cast<int>(i);
  }
  if (col_video < 0 || col_annotator < 0 || col_category < 0) {
    throw ParseError(source_name, 1, "header must contain video_id,annotator_id,category");
  }

  std::vector<AnnotationRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw ParseError(source_name, r + 1,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(row.size()));
    }
    AnnotationRecord rec{row[col_video], row[col_annotator], row[col_category]};
    if (rec.video_id.empty() || rec.annotator_id.empty()) {
      throw ParseError(source_name, r + 1, "empty video_id or annotator_id");
    }
    if (!seen.emplace(rec.video_id, rec.annotator_id).second) {
      throw ParseError(source_name, r + 1,
                       "annotator '" + rec.annotator_id + "' rated video '" + rec.video_id +
                           "' more than once");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotations " + path.string());
  return read_annotations(in, path.string());
}

}  // namespace veat
