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

#ifndef CXRHARMON_COVARIATE_HPP_
#define CXRHARMON_COVARIATE_HPP_

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "cxrharmon/dataset.hpp"

namespace cxrharmon {

enum class SplitMode { kTrain, kValid, kTest };

SplitMode split_mode_from_string(std::string_view text);  // DomainError on junk
std::string_view split_mode_name(SplitMode mode);

struct PoolFractions {
  double train = 0.7;
  double valid = 0.1;
  double test = 0.2;
};

// Target labels for one source: a pathology name resolved against the
// dataset, or an explicit per-row tri-state vector.
using TargetSpec = std::variant<Pathology, std::vector<TriState>>;

// Controlled-shift split definition over two sources. The ratio correlates
// sample origin with the target label: in the train split, low ratios draw
// positives predominantly from d1; valid/test invert the correlation
// (effective ratio 1 - ratio).
struct CovariateSpec {
  Dataset d1;
  Dataset d2;
  TargetSpec d1_target;
  TargetSpec d2_target;
  SplitMode mode = SplitMode::kTrain;
  double ratio = 0.5;  // strictly inside (0, 1)
  uint64_t seed = 0;
  PoolFractions pool_fractions;
};

struct Pools {
  std::vector<size_t> train;
  std::vector<size_t> valid;
  std::vector<size_t> test;
};

// Deterministic patient-level train/valid/test assignment. Rows with Unknown
// target are excluded first; the rest are bucketed by
// hash(patientid-or-index, seed) mod 100 against the cumulative fraction
// thresholds, so all images of one patient land in one pool and the pools
// partition the usable rows.
Pools partition_pools(const Dataset& ds, const std::vector<TriState>& target, uint64_t seed,
                      const PoolFractions& fractions = {});

// Builds the split: n = min over the four (source x class) pool cells,
// round((1-rho) * n) positives from d1 and the rest from d2, negatives
// mirrored, sampled without replacement and deterministically shuffled. The
// result has a single pathology "target", exactly n positives and n
// negatives, and the same size for every ratio given fixed sources, mode and
// seed. Throws InfeasiblePool when any cell is empty.
Dataset build_covariate(const CovariateSpec& spec);

// Mean of crop+resize(res)-preprocessed images with the target Present minus
// the mean with the target Absent. Throws EmptyClass when a side is empty.
Image class_mean_difference(const Dataset& ds, const Pathology& target, size_t res);

// Writes a difference grid as a 16-bit PNG, affinely mapped to the full
// pixel range, with the mapping recorded in a JSON sidecar.
void export_difference_png(const Image& grid, const std::filesystem::path& png_path,
                           const std::filesystem::path& sidecar_path);

}  // namespace cxrharmon

#endif  // CXRHARMON_COVARIATE_HPP_
