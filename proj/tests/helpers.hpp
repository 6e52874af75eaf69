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
#include <random>
#include <string>

#include <Eigen/Dense>

#include "veat/embedding.hpp"

namespace veat::testing {

// Columns are members.
inline Eigen::MatrixXd cols(std::initializer_list<std::initializer_list<double>> members) {
  const auto n = static_cast<Eigen::Index>(members.size());
  const auto dim = static_cast<Eigen::Index>(members.begin()->size());
  Eigen::MatrixXd m(dim, n);
  Eigen::Index j = 0;
  for (const auto& member : members) {
    Eigen::Index i = 0;
    for (double v : member) m(i++, j) = v;
    ++j;
  }
  return m;
}

inline Eigen::MatrixXd random_set(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(dim, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = normal(rng);
  return m;
}

inline ConceptSet concept_set(const std::string& name, const Eigen::MatrixXd& m) {
  std::vector<VideoEmbedding> members;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    members.emplace_back(name + "-" + std::to_string(j), name, m.col(j), 20, std::nullopt);
  }
  return ConceptSet(name, Role::target, std::move(members));
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            ("veat-" + tag + "-" + std::to_string(rng() % 1000000000ull));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace veat::testing
