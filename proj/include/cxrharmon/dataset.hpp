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

#ifndef CXRHARMON_DATASET_HPP_
#define CXRHARMON_DATASET_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cxrharmon/csv.hpp"
#include "cxrharmon/image.hpp"
#include "cxrharmon/labels.hpp"
#include "cxrharmon/masks.hpp"
#include "cxrharmon/taxonomy.hpp"
#include "cxrharmon/transforms.hpp"

namespace cxrharmon {

// Standardized metadata column names shared by every adapter and preserved by
// all dataset algebra.
inline constexpr const char* kPatientIdColumn = "patientid";
inline constexpr const char* kViewColumn = "view";
inline constexpr const char* kOffsetColumn = "offset_day_int";
inline constexpr const char* kHasMasksColumn = "has_masks";
inline constexpr const char* kSourceNameColumn = "source_name";
inline constexpr const char* kSourceIndexColumn = "source_index";

// Provides decoded, possible-range-scaled images (and optionally raw mask
// geometries) for the rows of one source dataset. Implementations must be
// pure per index so datasets stay safe for concurrent reads.
class ImageSource {
 public:
  virtual ~ImageSource() = default;

  // Scaled image for a row, values in [-1024, 1024].
  virtual Image load(size_t index) const = 0;

  // Raw mask geometries for a row keyed by canonical pathology name; a
  // pathology may carry several geometries (OR-merged at rasterization).
  virtual std::vector<std::pair<std::string, MaskGeometry>> mask_geometries(size_t index) const {
    (void)index;
    return {};
  }

  virtual bool has_mask_source() const { return false; }
};

// In-memory images, used by synthetic fixtures and tests.
class InMemorySource : public ImageSource {
 public:
  explicit InMemorySource(std::vector<Image> images) : images_(std::move(images)) {}

  InMemorySource(std::vector<Image> images,
                 std::map<size_t, std::vector<std::pair<std::string, MaskGeometry>>> masks)
      : images_(std::move(images)), masks_(std::move(masks)), has_masks_(true) {}

  Image load(size_t index) const override { return images_.at(index); }

  std::vector<std::pair<std::string, MaskGeometry>> mask_geometries(size_t index) const override {
    const auto it = masks_.find(index);
    return it == masks_.end() ? std::vector<std::pair<std::string, MaskGeometry>>{} : it->second;
  }

  bool has_mask_source() const override { return has_masks_; }

  size_t size() const { return images_.size(); }

 private:
  std::vector<Image> images_;
  std::map<size_t, std::vector<std::pair<std::string, MaskGeometry>>> masks_;
  bool has_masks_ = false;
};

// One row's image handle: the providing source plus the row's index within it.
struct ImageRef {
  std::shared_ptr<const ImageSource> source;
  size_t index = 0;
};

// One dataset item. The image is [1, H, W] (channel axis implicit in Image);
// pathology_masks is keyed by the pathology's index in the dataset's
// pathology list and is empty when the sample has no masks.
struct Sample {
  size_t index = 0;
  Image img;
  std::vector<TriState> lab;
  std::map<size_t, Image> pathology_masks;
  std::map<std::string, std::string> metadata;
};

enum class DatasetKind { kSource, kMerge, kSubset, kCovariate };

// Immutable harmonized record collection: an ordered pathology list, a
// tri-state label matrix, a metadata table, and per-row image handles. Row i
// of the table describes row i of the labels and sample i, always. All
// composition tools return new Dataset values and never mutate their inputs.
class Dataset {
 public:
  Dataset(std::string name, Taxonomy pathologies, LabelMatrix labels, Table csv,
          std::vector<ImageRef> images = {}, DatasetKind kind = DatasetKind::kSource,
          std::vector<std::string> child_headers = {}, bool masks_enabled = false);

  const std::string& name() const { return name_; }
  const Taxonomy& pathologies() const { return pathologies_; }
  const LabelMatrix& labels() const { return labels_; }
  const Table& csv() const { return csv_; }
  size_t num_samples() const { return labels_.rows(); }
  DatasetKind kind() const { return kind_; }
  const std::vector<std::string>& child_headers() const { return child_headers_; }
  const std::vector<ImageRef>& images() const { return images_; }
  bool masks_enabled() const { return masks_enabled_; }

  // Metadata-only datasets (loaded from manifests) cannot serve samples.
  bool has_images() const { return !images_.empty(); }

  // Decodes and scales the row's image, attaches masks when enabled, applies
  // the transform chain (identical augmentation to image and masks, keyed by
  // seed), and returns the aligned sample. Pure given (index, chain, seed).
  Sample sample(size_t index, const TransformChain* transform = nullptr,
                std::optional<uint64_t> seed = std::nullopt) const;

  // Per-pathology counts of 0/1 labels; Unknown counted in neither.
  LabelTotals totals() const;

  // "<Name> num_samples=<N>" plus a views clause for source datasets with
  // view information.
  std::string header() const;

  // header + child tree lines (merge/subset wrappers) + totals block.
  std::string summary() const;

  // Distinct non-empty views in first-appearance order.
  std::vector<std::string> distinct_views() const;

 private:
  std::string name_;
  Taxonomy pathologies_;
  LabelMatrix labels_;
  Table csv_;
  std::vector<ImageRef> images_;
  DatasetKind kind_;
  std::vector<std::string> child_headers_;
  bool masks_enabled_ = false;
};

// Re-renders the totals map in the summary style:
// {'Atelectasis': {0.0: 2, 1.0: 3},
//  'Effusion': {0.0: 1, 1.0: 0}}
std::string render_totals(const LabelTotals& totals);

// Returns a copy with per-sample pathology masks switched on or off. Enabling
// requires the dataset's sources to declare a mask source (NoMaskSource).
Dataset attach_masks(const Dataset& ds, bool enabled);

// Manifest export: source_name, source_index, the standardized columns the
// dataset carries, then one label column per pathology with cells {0,1,NaN}.
Table manifest_table(const Dataset& ds);

}  // namespace cxrharmon

#endif  // CXRHARMON_DATASET_HPP_
