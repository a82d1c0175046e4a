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

#include "cxrharmon/dataset.hpp"

#include <algorithm>

#include "cxrharmon/log.hpp"

namespace cxrharmon {

Dataset::Dataset(std::string name, Taxonomy pathologies, LabelMatrix labels, Table csv,
                 std::vector<ImageRef> images, DatasetKind kind,
                 std::vector<std::string> child_headers, bool masks_enabled)
    : name_(std::move(name)),
      pathologies_(std::move(pathologies)),
      labels_(std::move(labels)),
      csv_(std::move(csv)),
      images_(std::move(images)),
      kind_(kind),
      child_headers_(std::move(child_headers)),
      masks_enabled_(masks_enabled) {
  if (labels_.rows() != csv_.num_rows()) {
    throw DomainError("label rows (" + std::to_string(labels_.rows()) +
                      ") do not match metadata rows (" + std::to_string(csv_.num_rows()) + ")");
  }
  if (labels_.cols() != pathologies_.size()) {
    throw DomainError("label columns (" + std::to_string(labels_.cols()) +
                      ") do not match pathology count (" + std::to_string(pathologies_.size()) +
                      ")");
  }
  if (!images_.empty() && images_.size() != labels_.rows()) {
    throw DomainError("image handles (" + std::to_string(images_.size()) +
                      ") do not match sample count (" + std::to_string(labels_.rows()) + ")");
  }
}

Sample Dataset::sample(size_t index, const TransformChain* transform,
                       std::optional<uint64_t> seed) const {
  if (index >= num_samples()) {
    throw IndexOutOfRange("sample index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(num_samples()) + ")");
  }
  if (!has_images()) {
    throw DomainError("dataset '" + name_ + "' is metadata-only and cannot serve samples");
  }

  Sample out;
  out.index = index;
  out.lab = labels_.row(index);
  out.metadata = csv_.row_map(index);

  const ImageRef& ref = images_[index];
  out.img = ref.source->load(ref.index);

  if (masks_enabled_) {
    // Geometries are keyed by pathology name at the source; resolve to this
    // dataset's column indexes here so relabeled datasets stay consistent.
    std::map<size_t, std::vector<Image>> grids;
    for (const auto& [pathology_name, geometry] : ref.source->mask_geometries(ref.index)) {
      const auto col = pathologies_.index_of(pathology_name);
      if (!col.has_value()) {
        log::warn("dropping mask for pathology not in dataset: " + pathology_name);
        continue;
      }
      grids[*col].push_back(rasterize(geometry, out.img.height(), out.img.width()));
    }
    for (auto& [col, list] : grids) {
      out.pathology_masks.emplace(col, merge_or(list));
    }
  }

  if (transform != nullptr) {
    out.img = transform->apply(std::move(out.img), &out.pathology_masks, seed);
  }
  return out;
}

LabelTotals Dataset::totals() const {
  LabelTotals out;
  out.reserve(pathologies_.size());
  for (size_t c = 0; c < pathologies_.size(); ++c) {
    ClassCounts counts;
    for (size_t r = 0; r < labels_.rows(); ++r) {
      switch (labels_.at(r, c)) {
        case TriState::kAbsent:
          ++counts.absent;
          break;
        case TriState::kPresent:
          ++counts.present;
          break;
        case TriState::kUnknown:
          break;
      }
    }
    out.emplace_back(pathologies_.at(c), counts);
  }
  return out;
}

std::vector<std::string> Dataset::distinct_views() const {
  std::vector<std::string> views;
  if (!csv_.has_column(kViewColumn)) return views;
  for (const auto& v : csv_.column(kViewColumn)) {
    if (v.empty()) continue;
    if (std::find(views.begin(), views.end(), v) == views.end()) views.push_back(v);
  }
  return views;
}

std::string Dataset::header() const {
  std::string out = name_ + " num_samples=" + std::to_string(num_samples());
  if (kind_ == DatasetKind::kSource) {
    const auto views = distinct_views();
    if (!views.empty()) {
      out += " views=[";
      for (size_t i = 0; i < views.size(); ++i) {
        if (i > 0) out += ", ";
        out += "'" + views[i] + "'";
      }
      out += "]";
    }
  }
  return out;
}

std::string Dataset::summary() const {
  std::string out = header();
  if (kind_ == DatasetKind::kSubset && !child_headers_.empty()) {
    out += "\n└ of " + child_headers_.front();
  } else if (!child_headers_.empty()) {
    for (size_t i = 0; i < child_headers_.size(); ++i) {
      const char* branch = (i + 1 == child_headers_.size()) ? "└" : "├";
      out += "\n" + std::string(branch) + std::to_string(i) + " " + child_headers_[i];
    }
  }
  out += "\n" + render_totals(totals());
  return out;
}

std::string render_totals(const LabelTotals& totals) {
  // Mirrors the printed dictionary style: float keys 0.0/1.0, one pathology
  // per line, continuation lines indented by one space.
  std::string out = "{";
  for (size_t i = 0; i < totals.size(); ++i) {
    if (i > 0) out += ",\n ";
    const auto& [pathology, counts] = totals[i];
    out += "'" + pathology.name() + "': {0.0: " + std::to_string(counts.absent) +
           ", 1.0: " + std::to_string(counts.present) + "}";
  }
  out += "}";
  return out;
}

Dataset attach_masks(const Dataset& ds, bool enabled) {
  if (enabled) {
    bool any_source_has_masks = false;
    for (const auto& ref : ds.images()) {
      if (ref.source != nullptr && ref.source->has_mask_source()) {
        any_source_has_masks = true;
        break;
      }
    }
    if (!any_source_has_masks) {
      throw NoMaskSource("dataset '" + ds.name() + "' has no mask source declared");
    }
  }
  return Dataset(ds.name(), ds.pathologies(), ds.labels(), ds.csv(), ds.images(), ds.kind(),
                 ds.child_headers(), enabled);
}

Table manifest_table(const Dataset& ds) {
  Table out;
  const size_t n = ds.num_samples();

  std::vector<std::string> source_names(n);
  std::vector<std::string> source_indexes(n);
  const bool has_own_provenance =
      ds.csv().has_column(kSourceNameColumn) && ds.csv().has_column(kSourceIndexColumn);
  for (size_t r = 0; r < n; ++r) {
    if (has_own_provenance) {
      source_names[r] = ds.csv().cell(r, kSourceNameColumn);
      source_indexes[r] = ds.csv().cell(r, kSourceIndexColumn);
    } else {
      source_names[r] = ds.name();
      source_indexes[r] = std::to_string(r);
    }
  }
  out.set_column(kSourceNameColumn, std::move(source_names));
  out.set_column(kSourceIndexColumn, std::move(source_indexes));

  for (const char* column : {kPatientIdColumn, kViewColumn, kOffsetColumn, kHasMasksColumn}) {
    if (ds.csv().has_column(column)) out.set_column(column, ds.csv().column(column));
  }

  for (size_t c = 0; c < ds.pathologies().size(); ++c) {
    std::vector<std::string> cells(n);
    for (size_t r = 0; r < n; ++r) cells[r] = std::string(tri_cell(ds.labels().at(r, c)));
    out.set_column(ds.pathologies().at(c).name(), std::move(cells));
  }
  return out;
}

}  // namespace cxrharmon
