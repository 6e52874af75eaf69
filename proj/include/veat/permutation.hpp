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
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace veat {

enum class TieRule {
  strict,    // count of permuted statistics strictly greater than observed
  plus_one,  // count of permuted statistics >= observed (observed split included)
};

enum class PValueMethod { exact, monte_carlo };

std::string_view to_string(TieRule rule);
std::string_view to_string(PValueMethod method);
TieRule parse_tie_rule(std::string_view text);
PValueMethod parse_method(std::string_view text);

struct PermutationConfig {
  std::uint64_t seed = 0;
  std::uint64_t iterations = 100000;
  std::uint64_t exact_threshold = 200000;
  TieRule tie_rule = TieRule::strict;

  void validate() const;
  friend bool operator==(const PermutationConfig&, const PermutationConfig&) = default;
};

struct PermutationOutcome {
  double p_value = 1.0;
  PValueMethod method = PValueMethod::exact;
  std::uint64_t iterations = 0;     // Monte Carlo draws; 0 when exact
  std::uint64_t partitions = 0;     // enumerated splits; 0 when Monte Carlo
  std::uint64_t count = 0;          // numerator before smoothing
  double observed = 0.0;            // observed split statistic in reduced form
};

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Reduced split statistic 2 * sum(values[subset]) - sum(values).
//
// Both sums run in ascending index order, so the same subset always yields
// the same bits. `subset` must be sorted.
double split_statistic(std::span<const double> values, std::span<const std::size_t> subset,
                       double total);
double ordered_sum(std::span<const double> values);

// One-sided permutation test over all ways to put `k` of the n = values.size()
// elements on the positive side of the statistic. The observed split is the
// first `k` elements.
//
// Exact enumeration when C(n, k) <= exact_threshold, p = count / C(n, k) with
// the count chosen by the tie rule. Otherwise seeded Monte Carlo with
// p = (count(>=) + 1) / (iterations + 1).
//
// Draws are grouped into fixed blocks, each with its own generator seeded from
// (seed, block index); `threads` only changes which worker runs a block.
PermutationOutcome equal_split_test(std::span<const double> values, std::size_t k,
                                    const PermutationConfig& config, unsigned threads = 1);

inline constexpr std::uint64_t kDrawsPerBlock = 1024;

// Replays the Monte Carlo draws used by equal_split_test. The callback gets
// the draw index and the sorted subset.
void for_each_sampled_split(
    std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t iterations,
    const std::function<void(std::uint64_t, std::span<const std::size_t>)>& visit);

// Calls `visit` with every sorted k-subset of {0, ..., n-1} in lexicographic order.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(std::span<const std::size_t>)>& visit);

}  // namespace veat
