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

#include "veat/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "veat/errors.hpp"

namespace veat::oracle {

namespace {

// Extended-precision accumulation; the score is rounded to double once.
long double cos_naive(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw ValidationError("oracle: dimension mismatch");
  long double dot = 0.0L, uu = 0.0L, vv = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const long double ui = u[i], vi = v[i];
    dot += ui * vi;
    uu += ui * ui;
    vv += vi * vi;
  }
  if (uu == 0.0L || vv == 0.0L) throw ValidationError("oracle: zero vector");
  long double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  if (c > 1.0L) c = 1.0L;
  if (c < -1.0L) c = -1.0L;
  return c;
}

double s_naive(const std::vector<double>& e, const Vectors& a, const Vectors& b) {
  if (a.empty() || b.empty()) throw ValidationError("oracle: empty attribute set");
  long double sa = 0.0L;
  for (const auto& v : a) sa += cos_naive(e, v);
  long double sb = 0.0L;
  for (const auto& v : b) sb += cos_naive(e, v);
  return static_cast<double>(sa / static_cast<long double>(a.size()) -
                             sb / static_cast<long double>(b.size()));
}

double mean_naive(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double std_naive(const std::vector<double>& xs, StdDivisor divisor) {
  const double m = mean_naive(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double denom = divisor == StdDivisor::sample ? static_cast<double>(xs.size()) - 1.0
                                                     : static_cast<double>(xs.size());
  return std::sqrt(ss / denom);
}

double veat_stat_naive(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b) {
  double sum = 0.0;
  for (const auto& e : x) sum += s_naive(e, a, b);
  double other = 0.0;
  for (const auto& e : y) other += s_naive(e, a, b);
  return sum - other;
}

double scveat_stat_naive(const Vectors& x, const Vectors& a, const Vectors& b) {
  double sum = 0.0;
  for (const auto& e : x) sum += s_naive(e, a, b);
  return sum;
}

std::uint64_t choose(unsigned n, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <typename Stat>
ExactP enumerate_splits(const Vectors& pool, std::size_t k, TieRule rule, Stat&& stat) {
  const auto n = static_cast<unsigned>(pool.size());
  if (n > 24) throw ValidationError("oracle: instance too large to enumerate");
  Vectors first(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  Vectors second(pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end());
  const double observed = stat(first, second);

  ExactP out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    Vectors lhs, rhs;
    for (unsigned i = 0; i < n; ++i) ((mask >> i) & 1u ? lhs : rhs).push_back(pool[i]);
    const double s = stat(lhs, rhs);
    ++out.partitions;
    if (rule == TieRule::strict ? s > observed : s >= observed) ++out.count;
  }
  if (out.partitions != choose(n, static_cast<unsigned>(k))) {
    throw Error("oracle: partition count mismatch");
  }
  out.p_value = static_cast<double>(out.count) / static_cast<double>(out.partitions);
  return out;
}

}  // namespace

Statistics veat(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                StdDivisor divisor) {
  if (x.size() != y.size()) throw ValidationError("oracle: target sets must have equal size");
  std::vector<double> sx, sy, all;
  for (const auto& e : x) sx.push_back(s_naive(e, a, b));
  for (const auto& e : y) sy.push_back(s_naive(e, a, b));
  all = sx;
  all.insert(all.end(), sy.begin(), sy.end());
  const double sd = std_naive(all, divisor);
  if (!(sd > 0.0)) throw DegenerateError("oracle: zero standard deviation");
  return {veat_stat_naive(x, y, a, b), (mean_naive(sx) - mean_naive(sy)) / sd};
}

Statistics scveat(const Vectors& x, const Vectors& a, const Vectors& b, StdDivisor divisor) {
  std::vector<double> sx;
  for (const auto& e : x) sx.push_back(s_naive(e, a, b));
  const double sd = std_naive(sx, divisor);
  if (!(sd > 0.0)) throw DegenerateError("oracle: zero standard deviation");
  return {scveat_stat_naive(x, a, b), mean_naive(sx) / sd};
}

ExactP veat_exact_p(const Vectors& x, const Vectors& y, const Vectors& a, const Vectors& b,
                    TieRule rule) {
  if (x.size() != y.size()) throw ValidationError("oracle: target sets must have equal size");
  Vectors pool = x;
  pool.insert(pool.end(), y.begin(), y.end());
  return enumerate_splits(pool, x.size(), rule, [&](const Vectors& xi, const Vectors& yi) {
    return veat_stat_naive(xi, yi, a, b);
  });
}

ExactP scveat_exact_p(const Vectors& x, const Vectors& a, const Vectors& b, TieRule rule) {
  if (a.size() != b.size()) throw ValidationError("oracle: attribute sets must have equal size");
  Vectors pool = a;
  pool.insert(pool.end(), b.begin(), b.end());
  return enumerate_splits(pool, a.size(), rule, [&](const Vectors& ai, const Vectors& bi) {
    return scveat_stat_naive(x, ai, bi);
  });
}

Vectors columns(const Eigen::MatrixXd& m) {
  Vectors out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out.emplace_back(m.col(j).data(), m.col(j).data() + m.rows());
  }
  return out;
}

namespace {

Eigen::MatrixXd random_set(std::mt19937_64& gen, int dim, int count) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(dim, count);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = normal(gen);
  }
  return m;
}

double rel_error(double fast, double slow) {
  return std::abs(fast - slow) / std::max(1.0, std::abs(slow));
}

}  // namespace

CheckReport run_check(std::size_t trials, std::uint64_t seed) {
  constexpr double kTolerance = 1e-12;
  CheckReport report;
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> dim_dist(2, 8), size_dist(2, 6), coin(0, 1);
  PermutationConfig cfg;
  cfg.seed = seed;

  auto fail = [&](std::size_t trial, const std::string& what) {
    ++report.failures;
    std::ostringstream os;
    os << "trial " << trial << ": " << what;
    report.messages.push_back(os.str());
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const int dim = dim_dist(gen);
    const int nx = size_dist(gen);
    const int na = size_dist(gen);
    const int nb = coin(gen) ? na : size_dist(gen);
    const Eigen::MatrixXd x = random_set(gen, dim, nx);
    const Eigen::MatrixXd y = random_set(gen, dim, nx);
    const Eigen::MatrixXd a = random_set(gen, dim, na);
    const Eigen::MatrixXd b = random_set(gen, dim, nb);
    const Vectors vx = columns(x), vy = columns(y), va = columns(a), vb = columns(b);
    ++report.trials;

    const auto slow = veat(vx, vy, va, vb);
    const double stat_err = rel_error(veat_statistic(x, y, a, b), slow.statistic);
    const double d_err = rel_error(veat_effect_size(x, y, a, b), slow.effect_size);
    const auto slow_sc = scveat(vx, va, vb);
    const double sc_stat_err = rel_error(scveat_statistic(x, a, b), slow_sc.statistic);
    const double sc_d_err = rel_error(scveat_effect_size(x, a, b), slow_sc.effect_size);

    report.max_statistic_error = std::max({report.max_statistic_error, stat_err, sc_stat_err});
    report.max_effect_size_error = std::max({report.max_effect_size_error, d_err, sc_d_err});
    if (stat_err > kTolerance) fail(t, "veat statistic differs from oracle");
    if (d_err > kTolerance) fail(t, "veat effect size differs from oracle");
    if (sc_stat_err > kTolerance) fail(t, "scveat statistic differs from oracle");
    if (sc_d_err > kTolerance) fail(t, "scveat effect size differs from oracle");

    for (TieRule rule : {TieRule::strict, TieRule::plus_one}) {
      cfg.tie_rule = rule;
      const auto fast_p = veat_p_value(x, y, a, b, cfg);
      const auto slow_p = veat_exact_p(vx, vy, va, vb, rule);
      if (fast_p.method != PValueMethod::exact || fast_p.count != slow_p.count ||
          fast_p.partitions != slow_p.partitions) {
        fail(t, "veat exact p-value (" + std::string(to_string(rule)) + ") differs: " +
                    std::to_string(fast_p.count) + "/" + std::to_string(fast_p.partitions) +
                    " vs " + std::to_string(slow_p.count) + "/" +
                    std::to_string(slow_p.partitions));
      }
      if (na == nb) {
        const auto fast_sc = scveat_p_value(x, a, b, cfg);
        const auto slow_sc_p = scveat_exact_p(vx, va, vb, rule);
        if (fast_sc.method != PValueMethod::exact || fast_sc.count != slow_sc_p.count ||
            fast_sc.partitions != slow_sc_p.partitions) {
          fail(t, "scveat exact p-value (" + std::string(to_string(rule)) + ") differs");
        }
      }
    }
  }
  return report;
}

}  // namespace veat::oracle
