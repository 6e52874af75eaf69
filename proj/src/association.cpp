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

#include "veat/association.hpp"

#include <string>
#include <vector>

namespace veat {

std::string_view to_string(StdDivisor divisor) {
  return divisor == StdDivisor::sample ? "sample" : "population";
}

StdDivisor parse_std_divisor(std::string_view text) {
  if (text == "sample") return StdDivisor::sample;
  if (text == "population") return StdDivisor::population;
  throw ValidationError("unknown std divisor '" + std::string(text) +
                        "' (expected sample or population)");
}

std::string_view to_string(TestKind kind) { return kind == TestKind::veat ? "veat" : "scveat"; }

TestKind parse_test_kind(std::string_view text) {
  if (text == "veat") return TestKind::veat;
  if (text == "scveat") return TestKind::scveat;
  throw ValidationError("unknown test kind '" + std::string(text) + "'");
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.begin(), v.end()}; }

void check_same_dim(std::initializer_list<const Eigen::MatrixXd*> sets) {
  const Eigen::Index dim = (*sets.begin())->rows();
  for (const auto* s : sets) {
    if (s->rows() != dim) {
      throw ValidationError("embedding dimension mismatch (" + std::to_string(dim) + " vs " +
                            std::to_string(s->rows()) + ")");
    }
  }
}

void check_same_dim(std::initializer_list<const ConceptSet*> sets) {
  const ConceptSet* first = *sets.begin();
  for (const auto* s : sets) {
    if (s->dim() != first->dim()) {
      throw ValidationError("concept sets '" + first->name() + "' and '" + s->name() +
                            "' have different dimensions (" + std::to_string(first->dim()) +
                            " vs " + std::to_string(s->dim()) + ")");
    }
  }
}

void append_scores(std::vector<AssociationScore>& out, const ConceptSet& set,
                   const Eigen::VectorXd& scores) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    out.push_back({set.members()[i].video_id(), scores(static_cast<Eigen::Index>(i))});
  }
}

}  // namespace

PermutationOutcome veat_p_value(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                const PermutationConfig& config, unsigned threads) {
  detail::check_targets(x, y);
  check_same_dim({&x, &y, &a, &b});
  Eigen::MatrixXd targets(x.rows(), x.cols() + y.cols());
  targets << x, y;
  const std::vector<double> scores = to_std(item_scores(targets, a, b));
  return equal_split_test(scores, static_cast<std::size_t>(x.cols()), config, threads);
}

PermutationOutcome scveat_p_value(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b, const PermutationConfig& config,
                                  unsigned threads) {
  detail::check_attributes(a, b);
  if (a.cols() != b.cols()) {
    throw ValidationError("attribute-shuffle null needs equal attribute sizes (" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.cols()) + ")");
  }
  if (x.cols() == 0) throw ValidationError("target set is empty");
  check_same_dim({&x, &a, &b});
  Eigen::MatrixXd attributes(a.rows(), a.cols() + b.cols());
  attributes << a, b;
  // Column sums of the target-by-attribute cosines; the statistic for a
  // shuffle is proportional to 2 * sum(shuffled A side) - total.
  using Wide = long double;
  const Eigen::VectorXd column_sums =
      cosine_matrix(x.cast<Wide>(), attributes.cast<Wide>()).colwise().sum().transpose().cast<double>();
  return equal_split_test(to_std(column_sums), static_cast<std::size_t>(a.cols()), config,
                          threads);
}

TestResult run_veat(const ConceptSet& x, const ConceptSet& y, const ConceptSet& a,
                    const ConceptSet& b, const TestOptions& options) {
  check_same_dim({&x, &y, &a, &b});
  detail::check_targets(x.matrix(), y.matrix());

  const Eigen::VectorXd sx = item_scores(x.matrix(), a.matrix(), b.matrix());
  const Eigen::VectorXd sy = item_scores(y.matrix(), a.matrix(), b.matrix());
  Eigen::VectorXd pooled(sx.size() + sy.size());
  pooled << sx, sy;

  TestResult r;
  r.kind = TestKind::veat;
  r.statistic = sx.sum() - sy.sum();
  r.effect_size = veat_effect_size_from_scores(sx, sy, options.std_divisor);
  r.pooled_std = standard_deviation(pooled, options.std_divisor);
  r.mean_x = sx.mean();
  r.mean_y = sy.mean();

  const auto p = equal_split_test(to_std(pooled), x.size(), options.permutation, options.threads);
  r.p_value = p.p_value;
  r.method = p.method;
  r.iterations = p.iterations;
  r.partitions = p.partitions;
  r.seed = options.permutation.seed;
  r.tie_rule = options.permutation.tie_rule;
  r.std_divisor = options.std_divisor;
  append_scores(r.item_scores, x, sx);
  append_scores(r.item_scores, y, sy);
  return r;
}

TestResult run_scveat(const ConceptSet& x, const ConceptSet& a, const ConceptSet& b,
                      const TestOptions& options) {
  check_same_dim({&x, &a, &b});
  const Eigen::VectorXd sx = item_scores(x.matrix(), a.matrix(), b.matrix());

  TestResult r;
  r.kind = TestKind::scveat;
  r.statistic = sx.sum();
  r.effect_size = scveat_effect_size_from_scores(sx, options.std_divisor);
  r.pooled_std = standard_deviation(sx, options.std_divisor);
  r.mean_x = sx.mean();

  const auto p = scveat_p_value(x.matrix(), a.matrix(), b.matrix(), options.permutation,
                                options.threads);
  r.p_value = p.p_value;
  r.method = p.method;
  r.iterations = p.iterations;
  r.partitions = p.partitions;
  r.seed = options.permutation.seed;
  r.tie_rule = options.permutation.tie_rule;
  r.std_divisor = options.std_divisor;
  append_scores(r.item_scores, x, sx);
  return r;
}

}  // namespace veat
