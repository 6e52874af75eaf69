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

#include "veat/archive.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include <json.hpp>

#include "veat/errors.hpp"

namespace veat {

using nlohmann::json;

namespace {

const json& require(const json& record, const char* field, const std::string& source,
                    std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw ParseError(source, line, std::string("missing field '") + field + "'");
  }
  return *it;
}

VideoEmbedding parse_record(const std::string& text, const std::string& source,
                            std::size_t line) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(source, line, "record is not a JSON object");

  const json& id = require(record, "video_id", source, line);
  const json& concept_label = require(record, "concept", source, line);
  const json& dim = require(record, "dim", source, line);
  const json& n_frames = require(record, "n_frames", source, line);
  const json& vector = require(record, "vector", source, line);

  if (!id.is_string()) throw ParseError(source, line, "video_id must be a string");
  if (!concept_label.is_string()) throw ParseError(source, line, "concept must be a string");
  if (!dim.is_number_unsigned() || dim.get<std::uint64_t>() == 0) {
    throw ParseError(source, line, "dim must be a positive integer");
  }
  if (!n_frames.is_number_unsigned() || n_frames.get<std::uint64_t>() == 0) {
    throw ParseError(source, line, "n_frames must be a positive integer");
  }
  if (!vector.is_array()) throw ParseError(source, line, "vector must be an array");
  const auto expected = dim.get<std::uint64_t>();
  if (vector.size() != expected) {
    throw ParseError(source, line,
                     "vector has " + std::to_string(vector.size()) + " entries but dim is " +
                         std::to_string(expected));
  }

  Eigen::VectorXd values(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < vector.size(); ++i) {
    if (!vector[i].is_number()) {
      throw ParseError(source, line, "vector entry " + std::to_string(i) + " is not a number");
    }
    values(static_cast<Eigen::Index>(i)) = vector[i].get<double>();
  }

  std::optional<std::string> source_path;
  if (auto it = record.find("source_path"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(source, line, "source_path must be a string or null");
    source_path = it->get<std::string>();
  }

  try {
    return VideoEmbedding(id.get<std::string>(), concept_label.get<std::string>(),
                          std::move(values), n_frames.get<std::size_t>(),
                          std::move(source_path));
  } catch (const ValidationError& e) {
    throw ParseError(source, line, e.what());
  }
}

FrameRecord parse_frame_record(const std::string& text, const std::string& source,
                               std::size_t line) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(source, line, "record is not a JSON object");
  const json& id = require(record, "video_id", source, line);
  const json& concept_label = require(record, "concept", source, line);
  const json& frames = require(record, "frames", source, line);
  if (!id.is_string()) throw ParseError(source, line, "video_id must be a string");
  if (!concept_label.is_string()) throw ParseError(source, line, "concept must be a string");
  if (!frames.is_array() || frames.empty()) {
    throw ParseError(source, line, "frames must be a non-empty array");
  }

  FrameRecord out;
  out.concept_label = concept_label.get<std::string>();
  out.sequence.video_id = id.get<std::string>();
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const json& frame = frames[f];
    if (!frame.is_array()) throw ParseError(source, line, "frame " + std::to_string(f) + " is not an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(frame.size()));
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (!frame[i].is_number()) {
        throw ParseError(source, line, "frame " + std::to_string(f) + " entry " +
                                           std::to_string(i) + " is not a number");
      }
      v(static_cast<Eigen::Index>(i)) = frame[i].get<double>();
    }
    out.sequence.frames.push_back(std::move(v));
  }
  if (auto it = record.find("timestamps"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(source, line, "timestamps must be an array");
    for (const auto& t : *it) {
      if (!t.is_number()) throw ParseError(source, line, "timestamps must be numbers");
      out.sequence.timestamps.push_back(t.get<double>());
    }
  } else {
    for (std::size_t f = 0; f < frames.size(); ++f) out.sequence.timestamps.push_back(0.25 * static_cast<double>(f));
  }
  if (auto it = record.find("source_path"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(source, line, "source_path must be a string or null");
    out.source_path = it->get<std::string>();
  }
  try {
    out.sequence.validate();
  } catch (const ValidationError& e) {
    throw ParseError(source, line, e.what());
  }
  return out;
}

}  // namespace

std::vector<VideoEmbedding> read_archive(std::istream& in, const std::string& source_name) {
  std::vector<VideoEmbedding> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    VideoEmbedding e = parse_record(text, source_name, line);
    if (!seen.emplace(e.video_id(), e.concept_label()).second) {
      throw ParseError(source_name, line,
                       "duplicate record for video_id '" + e.video_id() + "' in concept '" +
                           e.concept_label() + "'");
    }
    out.push_back(std::move(e));
  }
  if (in.bad()) throw IoError("failed reading " + source_name);
  return out;
}

std::vector<FrameRecord> read_frame_records(std::istream& in, const std::string& source_name) {
  std::vector<FrameRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_frame_record(text, source_name, line));
  }
  if (in.bad()) throw IoError("failed reading " + source_name);
  return out;
}

std::vector<FrameRecord> read_frame_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open frame file " + path.string());
  return read_frame_records(in, path.string());
}

std::vector<VideoEmbedding> read_archive(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open archive " + path.string());
  return read_archive(in, path.string());
}

void write_archive(const std::vector<VideoEmbedding>& embeddings, std::ostream& out) {
  if (embeddings.empty()) throw ValidationError("refusing to write an empty archive");

  std::map<std::string, Eigen::Index> dims;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : embeddings) {
    auto [it, inserted] = dims.emplace(e.concept_label(), e.dim());
    if (!inserted && it->second != e.dim()) {
      throw ValidationError("concept '" + e.concept_label() +
                            "' mixes embedding dimensions " + std::to_string(it->second) +
                            " and " + std::to_string(e.dim()));
    }
    if (!seen.emplace(e.video_id(), e.concept_label()).second) {
      throw ValidationError("duplicate record for video_id '" + e.video_id() +
                            "' in concept '" + e.concept_label() + "'");
    }
  }

  for (const auto& e : embeddings) {
    json record;
    record["video_id"] = e.video_id();
    record["concept"] = e.concept_label();
    record["dim"] = e.dim();
    record["n_frames"] = e.n_frames();
    record["vector"] = std::vector<double>(e.vector().begin(), e.vector().end());
    record["source_path"] = e.source_path() ? json(*e.source_path()) : json(nullptr);
    // nlohmann emits the shortest decimal that round-trips to the same double.
    out << record.dump() << '\n';
  }
}

void write_archive(const std::vector<VideoEmbedding>& embeddings,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write archive " + path.string());
  write_archive(embeddings, out);
  out.flush();
  if (!out) throw IoError("failed writing archive " + path.string());
}

std::map<std::string, ConceptSet> load_concepts(
    const std::vector<std::filesystem::path>& archives) {
  std::vector<VideoEmbedding> all;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& path : archives) {
    for (auto& e : read_archive(path)) {
      if (!seen.emplace(e.video_id(), e.concept_label()).second) {
        throw ValidationError("duplicate record for video_id '" + e.video_id() +
                              "' in concept '" + e.concept_label() + "' across archives");
      }
      all.push_back(std::move(e));
    }
  }
  return group_by_concept(all);
}

}  // namespace veat
