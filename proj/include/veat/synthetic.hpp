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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "veat/embedding.hpp"

namespace veat {

// Seeded stand-in for a real embedding archive. Each concept gets a centroid
// drawn from a generator keyed on (seed, concept name), so adding or removing
// a concept leaves every other concept's vectors unchanged; members are the
// centroid plus isotropic Gaussian noise.
// Pulls `target`'s centroid toward `attribute`'s: (1 - weight) * own +
// weight * attribute. Gives fixtures a known, detectable association.
struct PlantedAssociation {
  std::string target;
  std::string attribute;
  double weight = 0.5;
};

struct SyntheticOptions {
  std::uint64_t seed = 0;
  Eigen::Index dim = 64;
  std::size_t members = 30;
  std::size_t n_frames = 20;
  double noise = 0.75;  // per-coordinate noise sd; centroids are unit-sd
  std::vector<PlantedAssociation> planted;

  void validate() const;
};

std::vector<VideoEmbedding> synthesize_archive(std::span<const std::string> concepts,
                                               const SyntheticOptions& options = {});

}  // namespace veat
