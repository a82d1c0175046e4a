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

#include "cxrharmon/covariate.hpp"

#include <cmath>

#include <json.hpp>

#include "cxrharmon/io.hpp"
#include "cxrharmon/png_io.hpp"
#include "cxrharmon/rng.hpp"

namespace cxrharmon {

namespace {

std::vector<TriState> resolve_target(const Dataset& ds, const TargetSpec& target) {
  if (const auto* pathology = std::get_if<Pathology>(&target)) {
    const auto col = ds.pathologies().index_of(pathology->name());
    if (!col.has_value()) {
      throw DomainError("dataset '" + ds.name() + "' has no pathology '" + pathology->name() +
                        "'");
    }
    return ds.labels().column(*col);
  }
  const auto& vec = std::get<std::vector<TriState>>(target);
  if (vec.size() != ds.num_samples()) {
    throw DomainError("explicit target vector length " + std::to_string(vec.size()) +
                      " does not match dataset size " + std::to_string(ds.num_samples()));
  }
  return vec;
}

const std::vector<size_t>& pool_for_mode(const Pools& pools, SplitMode mode) {
  switch (mode) {
    case SplitMode::kTrain:
      return pools.train;
    case SplitMode::kValid:
      return pools.valid;
    case SplitMode::kTest:
      return pools.test;
  }
  throw DomainError("invalid split mode");
}

// Half-away-from-zero rounding; counts must be reproducible, so the rule is
// pinned rather than left to std::round's environment defaults (identical
// here, but explicit).
size_t round_half_away(double x) {
  return static_cast<size_t>(std::floor(x + 0.5));
}

struct Member {
  size_t source = 0;  // 0 = d1, 1 = d2
  size_t index = 0;   // row in that source
  TriState label = TriState::kUnknown;
};

}  // namespace

SplitMode split_mode_from_string(std::string_view text) {
  if (text == "train") return SplitMode::kTrain;
  if (text == "valid") return SplitMode::kValid;
  if (text == "test") return SplitMode::kTest;
  throw DomainError("mode must be train, valid, or test; got '" + std::string(text) + "'");
}

std::string_view split_mode_name(SplitMode mode) {
  switch (mode) {
    case SplitMode::kTrain:
      return "train";
    case SplitMode::kValid:
      return "valid";
    case SplitMode::kTest:
      return "test";
  }
  throw DomainError("invalid split mode");
}

Pools partition_pools(const Dataset& ds, const std::vector<TriState>& target, uint64_t seed,
                      const PoolFractions& fractions) {
  if (target.size() != ds.num_samples()) {
    throw DomainError("target vector length does not match dataset size");
  }
  if (fractions.train < 0 || fractions.valid < 0 || fractions.test < 0 ||
      std::abs(fractions.train + fractions.valid + fractions.test - 1.0) > 1e-9) {
    throw DomainError("pool fractions must be non-negative and sum to 1");
  }

  const bool has_patientid = ds.csv().has_column(kPatientIdColumn);
  const double train_threshold = fractions.train * 100.0;
  const double valid_threshold = (fractions.train + fractions.valid) * 100.0;

  Pools pools;
  for (size_t r = 0; r < ds.num_samples(); ++r) {
    if (is_unknown(target[r])) continue;
    std::string key;
    if (has_patientid) key = ds.csv().cell(r, kPatientIdColumn);
    if (key.empty()) key = std::to_string(r);
    const uint64_t bucket = mix64(stable_hash64(key), seed) % 100;
    const double b = static_cast<double>(bucket);
    if (b < train_threshold) {
      pools.train.push_back(r);
    } else if (b < valid_threshold) {
      pools.valid.push_back(r);
    } else {
      pools.test.push_back(r);
    }
  }
  return pools;
}

Dataset build_covariate(const CovariateSpec& spec) {
  if (!(spec.ratio > 0.0 && spec.ratio < 1.0)) {
    throw DomainError("ratio must lie strictly inside (0, 1)");
  }

  const std::vector<TriState> target1 = resolve_target(spec.d1, spec.d1_target);
  const std::vector<TriState> target2 = resolve_target(spec.d2, spec.d2_target);

  const Pools pools1 = partition_pools(spec.d1, target1, spec.seed, spec.pool_fractions);
  const Pools pools2 = partition_pools(spec.d2, target2, spec.seed, spec.pool_fractions);

  // The four pool cells: (source, class) within this mode's pool.
  std::vector<size_t> pos1, neg1, pos2, neg2;
  for (size_t r : pool_for_mode(pools1, spec.mode)) {
    (target1[r] == TriState::kPresent ? pos1 : neg1).push_back(r);
  }
  for (size_t r : pool_for_mode(pools2, spec.mode)) {
    (target2[r] == TriState::kPresent ? pos2 : neg2).push_back(r);
  }
  if (pos1.empty() || neg1.empty() || pos2.empty() || neg2.empty()) {
    throw InfeasiblePool("each source needs at least one positive and one negative in the " +
                         std::string(split_mode_name(spec.mode)) + " pool (got P1=" +
                         std::to_string(pos1.size()) + " N1=" + std::to_string(neg1.size()) +
                         " P2=" + std::to_string(pos2.size()) + " N2=" +
                         std::to_string(neg2.size()) + ")");
  }

  // n is ratio-independent by construction, which pins the split size across
  // ratios for controlled comparisons.
  const size_t n = std::min(std::min(pos1.size(), neg1.size()),
                            std::min(pos2.size(), neg2.size()));
  const double rho = spec.mode == SplitMode::kTrain ? spec.ratio : 1.0 - spec.ratio;
  const size_t pos_from_d1 = round_half_away((1.0 - rho) * static_cast<double>(n));
  const size_t pos_from_d2 = n - pos_from_d1;
  const size_t neg_from_d1 = round_half_away(rho * static_cast<double>(n));
  const size_t neg_from_d2 = n - neg_from_d1;

  Xoshiro256pp rng(spec.seed);
  auto draw = [&rng](std::vector<size_t> pool, size_t count) {
    rng.shuffle(pool);
    pool.resize(count);
    return pool;
  };

  std::vector<Member> members;
  members.reserve(2 * n);
  for (size_t r : draw(pos1, pos_from_d1)) members.push_back({0, r, TriState::kPresent});
  for (size_t r : draw(neg1, neg_from_d1)) members.push_back({0, r, TriState::kAbsent});
  for (size_t r : draw(pos2, pos_from_d2)) members.push_back({1, r, TriState::kPresent});
  for (size_t r : draw(neg2, neg_from_d2)) members.push_back({1, r, TriState::kAbsent});
  rng.shuffle(members);

  const Dataset* sources[2] = {&spec.d1, &spec.d2};
  LabelMatrix labels(members.size(), 1);
  Table csv(std::vector<std::string>{kSourceNameColumn, kSourceIndexColumn});
  std::vector<ImageRef> images;
  const bool both_have_images = spec.d1.has_images() && spec.d2.has_images();
  if (both_have_images) images.reserve(members.size());

  for (size_t i = 0; i < members.size(); ++i) {
    const Member& m = members[i];
    labels.set(i, 0, m.label);
    csv.append_row({sources[m.source]->name(), std::to_string(m.index)});
    if (both_have_images) images.push_back(sources[m.source]->images()[m.index]);
  }

  Taxonomy pathologies{std::vector<Pathology>{Pathology::canonical("target")}};
  return Dataset("CovariateDataset", std::move(pathologies), std::move(labels), std::move(csv),
                 std::move(images), DatasetKind::kCovariate,
                 {spec.d1.header(), spec.d2.header()});
}

Image class_mean_difference(const Dataset& ds, const Pathology& target, size_t res) {
  if (res == 0) throw DomainError("resolution must be >= 1");
  const auto col = ds.pathologies().index_of(target.name());
  if (!col.has_value()) {
    throw DomainError("dataset '" + ds.name() + "' has no pathology '" + target.name() + "'");
  }

  TransformChain chain;
  chain.crop().resize(res);

  Image positive_sum(res, res, 0.0);
  Image negative_sum(res, res, 0.0);
  size_t positives = 0;
  size_t negatives = 0;
  for (size_t r = 0; r < ds.num_samples(); ++r) {
    const TriState label = ds.labels().at(r, *col);
    if (is_unknown(label)) continue;
    const Sample s = ds.sample(r, &chain);
    Image& sum = label == TriState::kPresent ? positive_sum : negative_sum;
    for (size_t k = 0; k < sum.size(); ++k) sum.data()[k] += s.img.data()[k];
    ++(label == TriState::kPresent ? positives : negatives);
  }
  if (positives == 0 || negatives == 0) {
    throw EmptyClass("class-mean difference needs at least one Present and one Absent row for " +
                     target.name());
  }

  Image out(res, res);
  for (size_t k = 0; k < out.size(); ++k) {
    out.data()[k] = positive_sum.data()[k] / static_cast<double>(positives) -
                    negative_sum.data()[k] / static_cast<double>(negatives);
  }
  return out;
}

void export_difference_png(const Image& grid, const std::filesystem::path& png_path,
                           const std::filesystem::path& sidecar_path) {
  if (grid.empty()) throw DomainError("difference grid is empty");
  const double lo = grid.min_value();
  const double hi = grid.max_value();
  const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;

  RawImage png;
  png.width = grid.width();
  png.height = grid.height();
  png.bit_depth = 16;
  png.pixels.resize(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) {
    png.pixels[k] = static_cast<uint16_t>(std::lround((grid.data()[k] - lo) * scale));
  }
  const std::filesystem::path tmp = png_path.string() + ".tmp";
  encode_png_gray(tmp, png);
  std::error_code ec;
  std::filesystem::rename(tmp, png_path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("rename to " + png_path.string() + " failed");
  }

  nlohmann::json sidecar;
  sidecar["format_version"] = 1;
  sidecar["min"] = lo;
  sidecar["max"] = hi;
  sidecar["width"] = grid.width();
  sidecar["height"] = grid.height();
  sidecar["mapping"] = "pixel = round((value - min) / (max - min) * 65535)";
  atomic_write_text(sidecar_path, sidecar.dump(2) + "\n");
}

}  // namespace cxrharmon
