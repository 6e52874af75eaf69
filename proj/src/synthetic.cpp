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

#include "veat/synthetic.hpp"

#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "veat/errors.hpp"

namespace veat {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string slug(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (alnum) {
      out += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "concept" : out;
}

}  // namespace

void SyntheticOptions::validate() const {
  if (dim < 1) throw ValidationError("synthetic dim must be >= 1");
  if (members < 2) throw ValidationError("synthetic sets need at least 2 members");
  if (n_frames < 1) throw ValidationError("synthetic n_frames must be >= 1");
  if (!(noise >= 0.0)) throw ValidationError("synthetic noise must be >= 0");
  for (const auto& p : planted) {
    if (!(p.weight >= 0.0 && p.weight <= 1.0)) {
      throw ValidationError("planted weight for '" + p.target + "' must be in [0, 1]");
    }
  }
}

std::vector<VideoEmbedding> synthesize_archive(std::span<const std::string> concepts,
                                               const SyntheticOptions& options) {
  options.validate();
  if (concepts.empty()) throw ValidationError("no concepts to synthesize");
  std::set<std::string> seen;
  for (const auto& c : concepts) {
    if (c.empty()) throw ValidationError("empty concept name");
    if (!seen.insert(c).second) throw ValidationError("duplicate concept '" + c + "'");
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  auto generator = [&](const std::string& name) {
    const std::uint64_t key = fnv1a(name);
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    return std::mt19937_64(seq);
  };

  // Centroids are drawn first so planting never shifts any noise stream.
  std::map<std::string, std::mt19937_64> rngs;
  std::map<std::string, Eigen::VectorXd> centroids;
  for (const auto& name : concepts) {
    auto rng = generator(name);
    Eigen::VectorXd c(options.dim);
    for (Eigen::Index i = 0; i < options.dim; ++i) c[i] = normal(rng);
    centroids.emplace(name, std::move(c));
    rngs.emplace(name, std::move(rng));
  }
  std::map<std::string, Eigen::VectorXd> shifted = centroids;
  for (const auto& p : options.planted) {
    if (!centroids.count(p.target) || !centroids.count(p.attribute)) {
      throw ValidationError("planted association '" + p.target + "' -> '" + p.attribute +
                            "' names a concept that is not generated");
    }
    shifted[p.target] = (1.0 - p.weight) * shifted[p.target] + p.weight * centroids[p.attribute];
  }

  std::vector<VideoEmbedding> out;
  out.reserve(concepts.size() * options.members);
  for (const auto& name : concepts) {
    auto& rng = rngs.at(name);
    const Eigen::VectorXd& centroid = shifted.at(name);
    const std::string prefix = slug(name);
    for (std::size_t m = 0; m < options.members; ++m) {
      Eigen::VectorXd v = centroid;
      for (Eigen::Index i = 0; i < options.dim; ++i) v[i] += options.noise * normal(rng);
      std::ostringstream id;
      id << prefix << '-' << std::setw(3) << std::setfill('0') << m;
      out.emplace_back(id.str(), name, std::move(v), options.n_frames, std::nullopt);
    }
  }
  return out;
}

}  // namespace veat
