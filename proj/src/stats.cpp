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

#include "veat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "veat/errors.hpp"

namespace veat {

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ValidationError("pearson_r: length mismatch (" + std::to_string(xs.size()) + " vs " +
                          std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 3) throw ValidationError("pearson_r: need at least 3 pairs");
  const auto n = static_cast<Eigen::Index>(xs.size());
  const Eigen::Map<const Eigen::VectorXd> x(xs.data(), n);
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), n);
  if (!x.allFinite() || !y.allFinite()) throw ValidationError("pearson_r: non-finite input");
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double sxx = dx.squaredNorm();
  const double syy = dy.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) throw DegenerateError("pearson_r: zero variance");
  return std::clamp(dx.dot(dy) / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationResult correlate(std::vector<CorrelationPair> pairs) {
  std::vector<double> d, pct;
  for (const auto& p : pairs) {
    d.push_back(p.effect_size);
    pct.push_back(p.statistic_pct);
  }
  CorrelationResult out;
  out.r = pearson_r(d, pct);
  out.n = pairs.size();
  out.pairs = std::move(pairs);
  return out;
}

std::string_view to_string(EffectClass c) {
  switch (c) {
    case EffectClass::neutral: return "neutral";
    case EffectClass::small: return "small";
    case EffectClass::medium: return "medium";
    case EffectClass::large: return "large";
  }
  return "?";
}

EffectClass classify_effect(double d) {
  if (!std::isfinite(d)) throw ValidationError("classify_effect: effect size is not finite");
  const double m = std::abs(d);
  if (m < 0.2) return EffectClass::neutral;
  if (m < 0.5) return EffectClass::small;
  if (m < 0.8) return EffectClass::medium;
  return EffectClass::large;
}

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::control: return "control";
    case Condition::debias1: return "debias1";
    case Condition::debias2: return "debias2";
  }
  return "?";
}

Condition parse_condition(std::string_view text) {
  if (text == "control") return Condition::control;
  if (text == "debias1") return Condition::debias1;
  if (text == "debias2") return Condition::debias2;
  throw ValidationError("unknown condition '" + std::string(text) +
                        "' (expected control, debias1 or debias2)");
}

bool sign_flip(double d_control, double d_other) {
  if (std::abs(d_control) < kSignFlipTolerance || std::abs(d_other) < kSignFlipTolerance) {
    return false;
  }
  return std::signbit(d_control) != std::signbit(d_other);
}

std::vector<ComparisonResult> compare_conditions(std::span<const ConditionEffect> effects) {
  struct Slots {
    std::optional<double> d[3];
  };
  std::map<std::string, Slots> by_scenario;
  for (const auto& e : effects) {
    if (!std::isfinite(e.effect_size)) {
      throw ValidationError("scenario '" + e.scenario + "' has a non-finite effect size");
    }
    auto& slot = by_scenario[e.scenario].d[static_cast<int>(e.condition)];
    if (slot) {
      throw ValidationError("scenario '" + e.scenario + "' has more than one " +
                            std::string(to_string(e.condition)) + " result");
    }
    slot = e.effect_size;
  }

  std::vector<ComparisonResult> out;
  for (const auto& [scenario, slots] : by_scenario) {
    if (!slots.d[0]) {
      throw ValidationError("scenario '" + scenario + "' has no control result");
    }
    ComparisonResult c;
    c.scenario = scenario;
    c.d_control = *slots.d[0];
    c.class_control = classify_effect(c.d_control);
    if (slots.d[1]) {
      c.d_debias1 = slots.d[1];
      c.delta1 = *slots.d[1] - c.d_control;
      c.sign_flip1 = sign_flip(c.d_control, *slots.d[1]);
      c.class_debias1 = classify_effect(*slots.d[1]);
    }
    if (slots.d[2]) {
      c.d_debias2 = slots.d[2];
      c.delta2 = *slots.d[2] - c.d_control;
      c.sign_flip2 = sign_flip(c.d_control, *slots.d[2]);
      c.class_debias2 = classify_effect(*slots.d[2]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

double fleiss_kappa(const Eigen::MatrixXd& counts) {
  const Eigen::Index items = counts.rows();
  const Eigen::Index categories = counts.cols();
  if (items < 2) throw ValidationError("fleiss_kappa: need at least 2 items");
  if (categories < 1) throw ValidationError("fleiss_kappa: need at least 1 category");
  if ((counts.array() < 0).any()) throw ValidationError("fleiss_kappa: negative count");

  const Eigen::VectorXd raters = counts.rowwise().sum();
  const double n = raters(0);
  if ((raters.array() != n).any()) {
    throw ValidationError("fleiss_kappa: every item must be rated by the same number of raters");
  }
  if (n < 2) throw ValidationError("fleiss_kappa: need at least 2 raters per item");

  // Per-item agreement and its mean.
  const Eigen::VectorXd agreement =
      (counts.array().square().rowwise().sum() - n) / (n * (n - 1.0));
  const double p_bar = agreement.mean();

  // Chance agreement from the category marginals.
  const Eigen::RowVectorXd p = counts.colwise().sum() / (static_cast<double>(items) * n);
  const double p_e = p.squaredNorm();
  if (p_e >= 1.0) {
    throw DegenerateError("fleiss_kappa: undefined when all ratings fall in one category");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

double fleiss_kappa(std::span<const AnnotationRecord> annotations) {
  std::map<std::string, std::size_t> item_index, category_index;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& a : annotations) {
    if (!seen.emplace(a.video_id, a.annotator_id).second) {
      throw ValidationError("annotator '" + a.annotator_id + "' rated video '" + a.video_id +
                            "' more than once");
    }
    item_index.emplace(a.video_id, 0);
    category_index.emplace(a.category, 0);
  }
  std::size_t i = 0;
  for (auto& [_, idx] : item_index) idx = i++;
  i = 0;
  for (auto& [_, idx] : category_index) idx = i++;

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(item_index.size()),
                                                 static_cast<Eigen::Index>(category_index.size()));
  for (const auto& a : annotations) {
    counts(static_cast<Eigen::Index>(item_index[a.video_id]),
           static_cast<Eigen::Index>(category_index[a.category])) += 1.0;
  }
  return fleiss_kappa(counts);
}

std::map<std::string, std::string> majority_labels(
    std::span<const AnnotationRecord> annotations) {
  std::map<std::string, std::map<std::string, int>> votes;
  for (const auto& a : annotations) ++votes[a.video_id][a.category];

  std::map<std::string, std::string> out;
  for (const auto& [video, tally] : votes) {
    int best = 0;
    int holders = 0;
    std::string label;
    for (const auto& [category, count] : tally) {
      if (count > best) {
        best = count;
        holders = 1;
        label = category;
      } else if (count == best) {
        ++holders;
      }
    }
    out[video] = holders == 1 ? label : std::string(kCantAnswer);
  }
  return out;
}

std::string_view to_string(Coherence c) {
  switch (c) {
    case Coherence::aligned: return "aligned";
    case Coherence::misaligned: return "misaligned";
    case Coherence::not_applicable: return "not_applicable";
  }
  return "?";
}

Coherence directionality_coherence(double d, std::span<const AnnotationRecord> annotations,
                                   std::string_view group_a, std::string_view group_b) {
  if (!std::isfinite(d)) throw ValidationError("directionality_coherence: effect size not finite");
  if (classify_effect(d) == EffectClass::neutral) return Coherence::not_applicable;

  int count_a = 0, count_b = 0;
  for (const auto& [_, label] : majority_labels(annotations)) {
    if (label == group_a) ++count_a;
    else if (label == group_b) ++count_b;
  }
  if (count_a == count_b) return Coherence::not_applicable;
  const bool a_wins = count_a > count_b;
  return (d > 0) == a_wins ? Coherence::aligned : Coherence::misaligned;
}

}  // namespace veat
