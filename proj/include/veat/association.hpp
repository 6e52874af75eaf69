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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "veat/embedding.hpp"
#include "veat/errors.hpp"
#include "veat/permutation.hpp"
#include "veat/similarity.hpp"

namespace veat {

// Embedding sets below are column-per-member matrices (dim x count).

enum class StdDivisor {
  sample,      // n - 1
  population,  // n
};

std::string_view to_string(StdDivisor divisor);
StdDivisor parse_std_divisor(std::string_view text);

template <typename Derived>
typename Derived::Scalar standard_deviation(const Eigen::MatrixBase<Derived>& values,
                                            StdDivisor divisor = StdDivisor::sample) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = values.size();
  const Eigen::Index denom = divisor == StdDivisor::sample ? n - 1 : n;
  if (n < 2 || denom < 1) {
    throw ValidationError("standard deviation needs at least 2 values, got " +
                          std::to_string(n));
  }
  const Scalar mean = values.mean();
  const Scalar ss = (values.array() - mean).square().sum();
  return std::sqrt(ss / Scalar(denom));
}

namespace detail {

template <typename DerivedA, typename DerivedB>
void check_attributes(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() == 0 || b.cols() == 0) throw ValidationError("attribute set is empty");
  if (a.rows() != b.rows()) {
    throw ValidationError("attribute sets have different dimensions (" +
                          std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
  }
}

template <typename DerivedX, typename DerivedY>
void check_targets(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  if (x.cols() != y.cols()) {
    throw ValidationError("target sets must have equal size (" + std::to_string(x.cols()) +
                          " vs " + std::to_string(y.cols()) + ")");
  }
  if (x.cols() == 0) throw ValidationError("target set is empty");
}

}  // namespace detail

// s(e, A, B) for every column e of `targets`: mean cosine to A minus mean
// cosine to B. Accumulates in long double and rounds once, so near-equal
// scores (and the small pooled std they produce) keep full double accuracy.
template <typename DerivedE, typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedE::Scalar, Eigen::Dynamic, 1> item_scores(
    const Eigen::MatrixBase<DerivedE>& targets, const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedE::Scalar;
  using Wide = long double;
  detail::check_attributes(a, b);
  const auto t = targets.template cast<Wide>();
  const Eigen::Matrix<Wide, Eigen::Dynamic, 1> s =
      cosine_matrix(t, a.template cast<Wide>()).rowwise().mean() -
      cosine_matrix(t, b.template cast<Wide>()).rowwise().mean();
  return s.template cast<Scalar>();
}

template <typename DerivedE, typename DerivedA, typename DerivedB>
typename DerivedE::Scalar item_score(const Eigen::MatrixBase<DerivedE>& embedding,
                                     const Eigen::MatrixBase<DerivedA>& a,
                                     const Eigen::MatrixBase<DerivedB>& b) {
  if (embedding.cols() != 1) throw ValidationError("item_score expects a single column vector");
  return item_scores(embedding, a, b)(0);
}

// sum_x s(x, A, B) - sum_y s(y, A, B)
template <typename DerivedX, typename DerivedY, typename DerivedA, typename DerivedB>
typename DerivedX::Scalar veat_statistic(const Eigen::MatrixBase<DerivedX>& x,
                                         const Eigen::MatrixBase<DerivedY>& y,
                                         const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  detail::check_targets(x, y);
  return item_scores(x, a, b).sum() - item_scores(y, a, b).sum();
}

// (mean_x s - mean_y s) / std over the pooled scores of X and Y.
template <typename DerivedSX, typename DerivedSY>
typename DerivedSX::Scalar veat_effect_size_from_scores(const Eigen::MatrixBase<DerivedSX>& sx,
                                                        const Eigen::MatrixBase<DerivedSY>& sy,
                                                        StdDivisor divisor = StdDivisor::sample) {
  using Scalar = typename DerivedSX::Scalar;
  if (sx.size() == 0 || sy.size() == 0) throw ValidationError("effect size needs non-empty groups");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pooled(sx.size() + sy.size());
  pooled << sx, sy;
  const Scalar sd = standard_deviation(pooled, divisor);
  if (!(sd > Scalar(0))) {
    throw DegenerateError("effect size undefined: all item association scores are identical");
  }
  return (sx.mean() - sy.mean()) / sd;
}

template <typename DerivedS>
typename DerivedS::Scalar scveat_effect_size_from_scores(const Eigen::MatrixBase<DerivedS>& sx,
                                                         StdDivisor divisor = StdDivisor::sample) {
  using Scalar = typename DerivedS::Scalar;
  const Scalar sd = standard_deviation(sx, divisor);
  if (!(sd > Scalar(0))) {
    throw DegenerateError("effect size undefined: all item association scores are identical");
  }
  return sx.mean() / sd;
}

template <typename DerivedX, typename DerivedY, typename DerivedA, typename DerivedB>
typename DerivedX::Scalar veat_effect_size(const Eigen::MatrixBase<DerivedX>& x,
                                           const Eigen::MatrixBase<DerivedY>& y,
                                           const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b,
                                           StdDivisor divisor = StdDivisor::sample) {
  detail::check_targets(x, y);
  return veat_effect_size_from_scores(item_scores(x, a, b), item_scores(y, a, b), divisor);
}

// sum_x s(x, A, B)
template <typename DerivedX, typename DerivedA, typename DerivedB>
typename DerivedX::Scalar scveat_statistic(const Eigen::MatrixBase<DerivedX>& x,
                                           const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  if (x.cols() == 0) throw ValidationError("target set is empty");
  return item_scores(x, a, b).sum();
}

template <typename DerivedX, typename DerivedA, typename DerivedB>
typename DerivedX::Scalar scveat_effect_size(const Eigen::MatrixBase<DerivedX>& x,
                                             const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b,
                                             StdDivisor divisor = StdDivisor::sample) {
  return scveat_effect_size_from_scores(item_scores(x, a, b), divisor);
}

// Permutation p-value over equal-size re-partitions of X and Y. Item scores
// are computed once; each partition costs one subset sum.
PermutationOutcome veat_p_value(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                const PermutationConfig& config, unsigned threads = 1);

// Permutation p-value for the single-category statistic. The null shuffles
// A and B together into equal-size pseudo-attribute sets; permuting X alone
// would leave the sum unchanged.
PermutationOutcome scveat_p_value(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b, const PermutationConfig& config,
                                  unsigned threads = 1);

struct AssociationScore {
  std::string video_id;
  double score = 0.0;

  friend bool operator==(const AssociationScore&, const AssociationScore&) = default;
};

enum class TestKind { veat, scveat };

std::string_view to_string(TestKind kind);
TestKind parse_test_kind(std::string_view text);

struct TestResult {
  TestKind kind = TestKind::veat;
  double statistic = 0.0;
  double effect_size = 0.0;
  double p_value = 1.0;
  PValueMethod method = PValueMethod::exact;
  std::uint64_t iterations = 0;
  std::uint64_t partitions = 0;
  std::uint64_t seed = 0;
  TieRule tie_rule = TieRule::strict;
  StdDivisor std_divisor = StdDivisor::sample;
  std::vector<AssociationScore> item_scores;  // X members, then Y members
  double mean_x = 0.0;
  std::optional<double> mean_y;  // absent for single-category tests
  double pooled_std = 0.0;

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

struct TestOptions {
  PermutationConfig permutation;
  StdDivisor std_divisor = StdDivisor::sample;
  unsigned threads = 1;
};

TestResult run_veat(const ConceptSet& x, const ConceptSet& y, const ConceptSet& a,
                    const ConceptSet& b, const TestOptions& options = {});

TestResult run_scveat(const ConceptSet& x, const ConceptSet& a, const ConceptSet& b,
                      const TestOptions& options = {});

}  // namespace veat
