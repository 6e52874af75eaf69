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
#include <string>
#include <vector>

#include "veat/association.hpp"

// Independent verification path: direct nested loops over plain vectors, no
// similarity cache, no Eigen, and no code shared with the fast path.
namespace veat::oracle {

using Vectors = std::vector<std::vector<double>>;

struct Statistics {
  double statistic = 0.0;
  double effect_size = 0.0;
};

struct ExactP {
  std::uint64_t count = 0;
  std::uint64_t partitions = 0;
  double p_value = 0.0;
};

Statistics veat(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                StdDivisor divisor = StdDivisor::sample);
Statistics scveat(const Vectors& x, const Vectors& a, const Vectors& b,
                  StdDivisor divisor = StdDivisor::sample);

// Full enumeration with the statistic recomputed from scratch for each
// partition. Intended for |X| + |Y| (or |A| + |B|) up to about 16.
ExactP veat_exact_p(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                    TieRule rule);
ExactP scveat_exact_p(const Vectors& x, const Vectors& a, const Vectors& b, TieRule rule);

Vectors columns(const Eigen::MatrixXd& m);

struct CheckReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_statistic_error = 0.0;
  double max_effect_size_error = 0.0;
  std::vector<std::string> messages;

  bool ok() const { return failures == 0; }
};

// Compares fast path and oracle on randomized instances (dims 2-8, set sizes
// 2-6): statistics and effect sizes within 1e-12 relative to max(1, |oracle|),
// exact p-values identical.
CheckReport run_check(std::size_t trials, std::uint64_t seed);

}  // namespace veat::oracle
