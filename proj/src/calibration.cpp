// Copyright 2026 The cxrharmon Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cxrharmon/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cxrharmon/log.hpp"

namespace cxrharmon {

namespace {

constexpr double kOptClamp = 1e-6;

struct ClassCountsByScore {
  size_t positives = 0;
  size_t negatives = 0;
};

void validate(const ScoredSet& set) {
  if (set.scores.size() != set.labels.size()) {
    throw LengthMismatch("scores and labels differ in length");
  }
  size_t positives = 0;
  for (size_t i = 0; i < set.scores.size(); ++i) {
    const double s = set.scores[i];
    if (!(s >= 0.0 && s <= 1.0)) {
      throw DomainError("score out of [0, 1]: " + std::to_string(s));
    }
    if (set.labels[i] != 0 && set.labels[i] != 1) {
      throw DomainError("labels must be 0 or 1");
    }
    positives += static_cast<size_t>(set.labels[i]);
  }
  if (positives == 0 || positives == set.labels.size()) {
    throw SingleClass("need at least one positive and one negative label");
  }
}

// Unique scores descending with per-score class counts.
std::vector<std::pair<double, ClassCountsByScore>> score_groups(const ScoredSet& set) {
  std::vector<size_t> order(set.scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return set.scores[a] > set.scores[b];
  });

  std::vector<std::pair<double, ClassCountsByScore>> groups;
  for (size_t idx : order) {
    if (groups.empty() || groups.back().first != set.scores[idx]) {
      groups.push_back({set.scores[idx], {}});
    }
    auto& counts = groups.back().second;
    if (set.labels[idx] == 1) {
      ++counts.positives;
    } else {
      ++counts.negatives;
    }
  }
  return groups;
}

}  // namespace

RocCurve roc(const ScoredSet& set) {
  validate(set);
  const auto groups = score_groups(set);
  size_t total_pos = 0;
  size_t total_neg = 0;
  for (const auto& [score, counts] : groups) {
    total_pos += counts.positives;
    total_neg += counts.negatives;
  }

  RocCurve curve;
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  curve.tpr.push_back(0.0);
  curve.fpr.push_back(0.0);

  size_t pos_at_or_above = 0;
  size_t neg_at_or_above = 0;
  for (const auto& [score, counts] : groups) {
    pos_at_or_above += counts.positives;
    neg_at_or_above += counts.negatives;
    curve.thresholds.push_back(score);
    curve.tpr.push_back(static_cast<double>(pos_at_or_above) / static_cast<double>(total_pos));
    curve.fpr.push_back(static_cast<double>(neg_at_or_above) / static_cast<double>(total_neg));
  }

  curve.thresholds.push_back(-std::numeric_limits<double>::infinity());
  curve.tpr.push_back(1.0);
  curve.fpr.push_back(1.0);
  return curve;
}

double auc(const ScoredSet& set) {
  validate(set);
  const auto groups = score_groups(set);

  // Integer pair statistic: 2 * wins + ties over all positive-negative
  // pairs, walking scores from the lowest group up.
  size_t total_pos = 0;
  size_t total_neg = 0;
  for (const auto& [score, counts] : groups) {
    total_pos += counts.positives;
    total_neg += counts.negatives;
  }

  unsigned long long numerator = 0;
  size_t negatives_below = 0;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    const auto& counts = it->second;
    numerator += 2ULL * counts.positives * negatives_below;
    numerator += 1ULL * counts.positives * counts.negatives;  // ties at this score
    negatives_below += counts.negatives;
  }
  return static_cast<double>(numerator) /
         (2.0 * static_cast<double>(total_pos) * static_cast<double>(total_neg));
}

double trapezoid_auc(const RocCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.fpr.size(); ++i) {
    area += (curve.fpr[i] - curve.fpr[i - 1]) * (curve.tpr[i] + curve.tpr[i - 1]) / 2.0;
  }
  return area;
}

double op_point(const ScoredSet& set) {
  validate(set);
  const auto groups = score_groups(set);
  size_t total_pos = 0;
  size_t total_neg = 0;
  for (const auto& [score, counts] : groups) {
    total_pos += counts.positives;
    total_neg += counts.negatives;
  }

  // Candidates are the observed scores; groups are descending, so taking a
  // strict improvement keeps the largest threshold among J-maximizers.
  double best_threshold = groups.front().first;
  double best_j = -std::numeric_limits<double>::infinity();
  size_t pos_at_or_above = 0;
  size_t neg_at_or_above = 0;
  for (const auto& [score, counts] : groups) {
    pos_at_or_above += counts.positives;
    neg_at_or_above += counts.negatives;
    const double tpr = static_cast<double>(pos_at_or_above) / static_cast<double>(total_pos);
    const double fpr = static_cast<double>(neg_at_or_above) / static_cast<double>(total_neg);
    const double j = tpr - fpr;
    if (j > best_j) {
      best_j = j;
      best_threshold = score;
    }
  }

  if (best_threshold < kOptClamp) {
    log::warn("operating point " + std::to_string(best_threshold) + " clamped to " +
              std::to_string(kOptClamp));
    return kOptClamp;
  }
  if (best_threshold > 1.0 - kOptClamp) {
    log::warn("operating point " + std::to_string(best_threshold) + " clamped to " +
              std::to_string(1.0 - kOptClamp));
    return 1.0 - kOptClamp;
  }
  return best_threshold;
}

double apply_opt(double x, double opt) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("apply_opt requires x in [0, 1], got " + std::to_string(x));
  }
  if (!(opt > 0.0 && opt < 1.0)) {
    throw DomainError("apply_opt requires opt in (0, 1), got " + std::to_string(opt));
  }
  if (x <= opt) {
    return x / (2.0 * opt);
  }
  return 1.0 - (1.0 - x) / (2.0 * (1.0 - opt));
}

void CalibrationParams::set(const Pathology& pathology, double opt) {
  if (!(opt > 0.0 && opt < 1.0)) {
    throw DomainError("operating point for " + pathology.name() +
                      " must lie strictly inside (0, 1)");
  }
  for (auto& [existing, value] : entries_) {
    if (existing == pathology) {
      value = opt;
      return;
    }
  }
  entries_.emplace_back(pathology, opt);
}

std::optional<double> CalibrationParams::get(std::string_view canonical_name) const {
  for (const auto& [pathology, value] : entries_) {
    if (pathology.name() == canonical_name) return value;
  }
  return std::nullopt;
}

nlohmann::json CalibrationParams::to_json() const {
  nlohmann::json points = nlohmann::json::object();
  for (const auto& [pathology, value] : entries_) points[pathology.name()] = value;
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["operating_points"] = std::move(points);
  return doc;
}

CalibrationParams CalibrationParams::from_json(const nlohmann::json& doc) {
  if (!doc.contains("operating_points") || !doc.at("operating_points").is_object()) {
    throw FormatError("calibration params JSON needs an operating_points object");
  }
  CalibrationParams params;
  for (const auto& [name, value] : doc.at("operating_points").items()) {
    if (!value.is_number()) {
      throw FormatError("operating point for " + name + " must be a number");
    }
    params.set(Pathology::canonical(name), value.get<double>());
  }
  return params;
}

std::vector<std::pair<Pathology, double>> align_outputs(
    const std::vector<Pathology>& pathologies, const std::vector<double>& predictions,
    const Taxonomy& target_taxonomy) {
  if (pathologies.size() != predictions.size()) {
    throw LengthMismatch("model pathology list length " + std::to_string(pathologies.size()) +
                         " does not match prediction vector length " +
                         std::to_string(predictions.size()));
  }
  std::vector<std::pair<Pathology, double>> out;
  out.reserve(target_taxonomy.size());
  for (const auto& target : target_taxonomy) {
    double value = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 0; i < pathologies.size(); ++i) {
      if (pathologies[i] == target) {
        value = predictions[i];
        break;
      }
    }
    out.emplace_back(target, value);
  }
  return out;
}

}  // namespace cxrharmon
