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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "veat/annotations.hpp"

namespace veat {

struct CorrelationPair {
  std::string label;
  double effect_size = 0.0;
  double statistic_pct = 0.0;

  friend bool operator==(const CorrelationPair&, const CorrelationPair&) = default;
};

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  std::vector<CorrelationPair> pairs;

  friend bool operator==(const CorrelationResult&, const CorrelationResult&) = default;
};

// Pearson product-moment correlation. Needs n >= 3 and non-zero variance in
// both inputs.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

// r between the effect sizes and the demographic statistics of `pairs`.
CorrelationResult correlate(std::vector<CorrelationPair> pairs);

enum class EffectClass { neutral, small, medium, large };

std::string_view to_string(EffectClass c);

// |d| < 0.2 neutral, < 0.5 small, < 0.8 medium, otherwise large.
EffectClass classify_effect(double d);

enum class Condition { control, debias1, debias2 };

std::string_view to_string(Condition c);
Condition parse_condition(std::string_view text);

struct ConditionEffect {
  std::string scenario;
  Condition condition = Condition::control;
  double effect_size = 0.0;
};

struct ComparisonResult {
  std::string scenario;
  double d_control = 0.0;
  std::optional<double> d_debias1;
  std::optional<double> d_debias2;
  std::optional<double> delta1;  // d_debias1 - d_control
  std::optional<double> delta2;
  bool sign_flip1 = false;
  bool sign_flip2 = false;
  EffectClass class_control = EffectClass::neutral;
  std::optional<EffectClass> class_debias1;
  std::optional<EffectClass> class_debias2;

  friend bool operator==(const ComparisonResult&, const ComparisonResult&) = default;
};

// Effects with magnitude below this are never counted as a sign flip.
inline constexpr double kSignFlipTolerance = 1e-9;

bool sign_flip(double d_control, double d_other);

// One result per scenario, ordered by scenario name.
std::vector<ComparisonResult> compare_conditions(std::span<const ConditionEffect> effects);

// Fleiss' kappa from an item x category count matrix; every row must sum to
// the same number of raters n >= 2.
double fleiss_kappa(const Eigen::MatrixXd& counts);
double fleiss_kappa(std::span<const AnnotationRecord> annotations);

// Label with a unique highest vote count per video; ties map to kCantAnswer.
std::map<std::string, std::string> majority_labels(std::span<const AnnotationRecord> annotations);

enum class Coherence { aligned, misaligned, not_applicable };

std::string_view to_string(Coherence c);

// Whether the sign of `d` agrees with which group wins more majority votes.
// Neutral effects (|d| < 0.2) and tied vote counts are not applicable.
Coherence directionality_coherence(double d, std::span<const AnnotationRecord> annotations,
                                   std::string_view group_a, std::string_view group_b);

}  // namespace veat
