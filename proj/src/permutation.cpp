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

#include "veat/permutation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "veat/errors.hpp"

namespace veat {

std::string_view to_string(TieRule rule) {
  return rule == TieRule::strict ? "strict" : "plus_one";
}

std::string_view to_string(PValueMethod method) {
  return method == PValueMethod::exact ? "exact" : "monte_carlo";
}

TieRule parse_tie_rule(std::string_view text) {
  if (text == "strict") return TieRule::strict;
  if (text == "plus_one" || text == "plus-one") return TieRule::plus_one;
  throw ValidationError("unknown tie rule '" + std::string(text) +
                        "' (expected strict or plus_one)");
}

PValueMethod parse_method(std::string_view text) {
  if (text == "exact") return PValueMethod::exact;
  if (text == "monte_carlo") return PValueMethod::monte_carlo;
  throw ValidationError("unknown p-value method '" + std::string(text) + "'");
}

void PermutationConfig::validate() const {
  if (iterations < 1) throw ValidationError("permutation iterations must be >= 1");
  if (exact_threshold < 1) throw ValidationError("exact threshold must be >= 1");
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t d = i / g;
    const std::uint64_t m = num / d;  // d divides num * r and gcd(r, d) == 1
    if (r != 0 && m > kMax / r) return kMax;
    result = r * m;
  }
  return result;
}

double ordered_sum(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

double split_statistic(std::span<const double> values, std::span<const std::size_t> subset,
                       double total) {
  double sum = 0.0;
  for (std::size_t i : subset) sum += values[i];
  return 2.0 * sum - total;
}

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(std::span<const std::size_t>)>& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    visit(idx);
    // Advance to the next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

namespace {

std::mt19937_64 block_generator(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

// Uniform k-subset by partial Fisher-Yates; the first k slots of `perm` are
// sorted on return.
void draw_subset(std::mt19937_64& gen, std::vector<std::size_t>& perm, std::size_t k) {
  const std::size_t n = perm.size();
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(perm[i], perm[pick(gen)]);
  }
  std::sort(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
}

template <typename Visit>
void run_block(std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t block,
               std::uint64_t iterations, std::vector<std::size_t>& perm, Visit&& visit) {
  auto gen = block_generator(seed, block);
  const std::uint64_t first = block * kDrawsPerBlock;
  const std::uint64_t last = std::min(iterations, first + kDrawsPerBlock);
  perm.resize(n);
  for (std::uint64_t draw = first; draw < last; ++draw) {
    draw_subset(gen, perm, k);
    visit(draw, std::span<const std::size_t>(perm.data(), k));
  }
}

}  // namespace

void for_each_sampled_split(
    std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t iterations,
    const std::function<void(std::uint64_t, std::span<const std::size_t>)>& visit) {
  std::vector<std::size_t> perm;
  const std::uint64_t blocks = (iterations + kDrawsPerBlock - 1) / kDrawsPerBlock;
  for (std::uint64_t b = 0; b < blocks; ++b) run_block(n, k, seed, b, iterations, perm, visit);
}

PermutationOutcome equal_split_test(std::span<const double> values, std::size_t k,
                                    const PermutationConfig& config, unsigned threads) {
  config.validate();
  const std::size_t n = values.size();
  if (k == 0 || k >= n) {
    throw ValidationError("permutation test needs both sides non-empty (n = " +
                          std::to_string(n) + ", k = " + std::to_string(k) + ")");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("permutation test received a non-finite value");
  }

  const double total = ordered_sum(values);
  std::vector<std::size_t> observed_subset(k);
  std::iota(observed_subset.begin(), observed_subset.end(), std::size_t{0});
  const double observed = split_statistic(values, observed_subset, total);

  PermutationOutcome out;
  out.observed = observed;

  const std::uint64_t partitions = binomial(n, k);
  if (partitions <= config.exact_threshold) {
    std::uint64_t count = 0;
    const bool strict = config.tie_rule == TieRule::strict;
    for_each_combination(n, k, [&](std::span<const std::size_t> subset) {
      const double s = split_statistic(values, subset, total);
      if (strict ? s > observed : s >= observed) ++count;
    });
    out.method = PValueMethod::exact;
    out.partitions = partitions;
    out.iterations = 0;
    out.count = count;
    out.p_value = static_cast<double>(count) / static_cast<double>(partitions);
    return out;
  }

  const std::uint64_t iterations = config.iterations;
  const std::uint64_t blocks = (iterations + kDrawsPerBlock - 1) / kDrawsPerBlock;
  std::vector<std::uint64_t> block_counts(blocks, 0);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    std::vector<std::size_t> perm;
    for (std::uint64_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      std::uint64_t count = 0;
      run_block(n, k, config.seed, b, iterations, perm,
                [&](std::uint64_t, std::span<const std::size_t> subset) {
                  if (split_statistic(values, subset, total) >= observed) ++count;
                });
      block_counts[b] = count;
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), blocks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  const std::uint64_t count = std::accumulate(block_counts.begin(), block_counts.end(),
                                              std::uint64_t{0});
  out.method = PValueMethod::monte_carlo;
  out.partitions = 0;
  out.iterations = iterations;
  out.count = count;
  out.p_value = static_cast<double>(count + 1) / static_cast<double>(iterations + 1);
  return out;
}

}  // namespace veat
