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

#ifndef CXRHARMON_CALIBRATION_HPP_
#define CXRHARMON_CALIBRATION_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cxrharmon/taxonomy.hpp"

namespace cxrharmon {

// Scores in [0, 1] with definite binary labels; rows with Unknown labels are
// excluded before a ScoredSet is formed.
struct ScoredSet {
  std::vector<double> scores;
  std::vector<int> labels;  // 0 or 1
};

// ROC curve points at descending thresholds, with (0,0) and (1,1) sentinels
// at threshold +inf / -inf.
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<double> tpr;
  std::vector<double> fpr;
};

// Thresholds are the unique scores in descending order; at threshold t,
// TPR = |{s_i >= t, y_i = 1}| / P and FPR likewise over negatives. Requires
// at least one positive and one negative (SingleClass).
RocCurve roc(const ScoredSet& set);

// Rank-based AUC with ties counted 1/2, computed as an exact integer pair
// statistic divided once at the end: equals the trapezoidal area under roc().
double auc(const ScoredSet& set);

// Trapezoidal area under an ROC curve; the cross-checking second route to
// the same quantity as auc().
double trapezoid_auc(const RocCurve& curve);

// The score threshold maximizing TPR - FPR (informedness). Ties break toward
// the largest threshold; the result is clamped into [1e-6, 1 - 1e-6] (with a
// warning) because the calibration transform divides by opt and 1 - opt.
double op_point(const ScoredSet& set);

// Piecewise-linear calibration map pinning opt to 0.5:
//   x <= opt:  x / (2 * opt)
//   x >  opt:  1 - (1 - x) / (2 * (1 - opt))
// Strictly increasing, fixes 0 and 1, and therefore preserves score order
// (and AUC). DomainError outside x in [0,1], opt in (0,1).
double apply_opt(double x, double opt);

// Per-pathology operating points. Every opt is strictly inside (0, 1).
class CalibrationParams {
 public:
  void set(const Pathology& pathology, double opt);
  std::optional<double> get(std::string_view canonical_name) const;
  const std::vector<std::pair<Pathology, double>>& entries() const { return entries_; }

  // {"format_version": 1, "operating_points": {"<pathology>": opt, ...}}
  nlohmann::json to_json() const;
  static CalibrationParams from_json(const nlohmann::json& doc);

 private:
  std::vector<std::pair<Pathology, double>> entries_;
};

// Aligns a model's output vector to a target taxonomy: one entry per target
// pathology, NaN for pathologies the model does not predict. Lengths of
// `pathologies` and `predictions` must match (LengthMismatch).
std::vector<std::pair<Pathology, double>> align_outputs(
    const std::vector<Pathology>& pathologies, const std::vector<double>& predictions,
    const Taxonomy& target_taxonomy);

}  // namespace cxrharmon

#endif  // CXRHARMON_CALIBRATION_HPP_
