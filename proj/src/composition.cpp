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

#include "cxrharmon/composition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <unordered_set>

#include "cxrharmon/log.hpp"

namespace cxrharmon {

namespace {

std::string trim(std::string_view s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])) != 0) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])) != 0) --end;
  return std::string(s.substr(begin, end - begin));
}

bool parse_number(std::string_view text, double& out) {
  const std::string buf(text);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && !buf.empty();
}

}  // namespace

Dataset relabel(const Dataset& ds, const std::vector<Pathology>& target_list,
                std::vector<std::string>* dropped) {
  {
    std::set<std::string> seen;
    for (const auto& p : target_list) {
      if (!seen.insert(p.name()).second) {
        throw DuplicateTarget("duplicate pathology in relabel target: " + p.name());
      }
    }
  }
  return relabel(ds, Taxonomy(target_list), dropped);
}

Dataset relabel(const Dataset& ds, const Taxonomy& target, std::vector<std::string>* dropped) {
  const size_t n = ds.num_samples();
  LabelMatrix labels(n, target.size(), TriState::kUnknown);
  for (size_t c = 0; c < target.size(); ++c) {
    const auto old_col = ds.pathologies().index_of(target.at(c).name());
    if (!old_col.has_value()) continue;  // stays all-Unknown
    for (size_t r = 0; r < n; ++r) labels.set(r, c, ds.labels().at(r, *old_col));
  }

  for (const auto& old_pathology : ds.pathologies()) {
    if (!target.contains(old_pathology.name())) {
      log::warn("relabel drops pathology: " + old_pathology.name());
      if (dropped != nullptr) dropped->push_back(old_pathology.name());
    }
  }

  return Dataset(ds.name(), target, std::move(labels), ds.csv(), ds.images(), ds.kind(),
                 ds.child_headers(), ds.masks_enabled());
}

Dataset merge(const std::vector<Dataset>& children) {
  if (children.empty()) throw DomainError("merge needs at least one child dataset");
  const Taxonomy& pathologies = children.front().pathologies();
  for (size_t i = 1; i < children.size(); ++i) {
    if (children[i].pathologies() != pathologies) {
      throw PathologyMismatch(
          "children have different pathology lists (child 0 vs child " + std::to_string(i) +
          "); relabel them to a shared taxonomy first");
    }
  }

  size_t total = 0;
  for (const auto& child : children) total += child.num_samples();

  // Union of metadata columns, in first-appearance order across children.
  std::vector<std::string> merged_columns;
  for (const auto& child : children) {
    for (const auto& column : child.csv().columns()) {
      if (std::find(merged_columns.begin(), merged_columns.end(), column) ==
          merged_columns.end()) {
        merged_columns.push_back(column);
      }
    }
  }
  const bool add_provenance =
      std::find(merged_columns.begin(), merged_columns.end(), kSourceNameColumn) ==
      merged_columns.end();
  if (add_provenance) {
    merged_columns.push_back(kSourceNameColumn);
    merged_columns.push_back(kSourceIndexColumn);
  }

  Table csv(merged_columns);
  LabelMatrix labels(total, pathologies.size());
  std::vector<ImageRef> images;
  const bool all_children_have_images =
      std::all_of(children.begin(), children.end(),
                  [](const Dataset& d) { return d.has_images(); });
  if (all_children_have_images) images.reserve(total);

  size_t row = 0;
  for (const auto& child : children) {
    const bool child_has_provenance = child.csv().has_column(kSourceNameColumn) &&
                                      child.csv().has_column(kSourceIndexColumn);
    for (size_t r = 0; r < child.num_samples(); ++r, ++row) {
      std::vector<std::string> cells;
      cells.reserve(merged_columns.size());
      for (const auto& column : merged_columns) {
        if (column == kSourceNameColumn && !child_has_provenance) {
          cells.push_back(child.name());
        } else if (column == kSourceIndexColumn && !child_has_provenance) {
          cells.push_back(std::to_string(r));
        } else if (child.csv().has_column(column)) {
          cells.push_back(child.csv().cell(r, column));
        } else {
          cells.emplace_back();  // explicit missing marker: empty cell
        }
      }
      csv.append_row(std::move(cells));
      for (size_t c = 0; c < pathologies.size(); ++c) {
        labels.set(row, c, child.labels().at(r, c));
      }
      if (all_children_have_images) images.push_back(child.images()[r]);
    }
  }

  std::vector<std::string> child_headers;
  child_headers.reserve(children.size());
  for (const auto& child : children) child_headers.push_back(child.header());

  const bool masks_enabled = std::any_of(children.begin(), children.end(),
                                         [](const Dataset& d) { return d.masks_enabled(); });
  return Dataset("MergeDataset", pathologies, std::move(labels), std::move(csv),
                 std::move(images), DatasetKind::kMerge, std::move(child_headers), masks_enabled);
}

Dataset subset(const Dataset& ds, const std::vector<size_t>& indexes) {
  for (size_t idx : indexes) {
    if (idx >= ds.num_samples()) {
      throw IndexOutOfRange("subset index " + std::to_string(idx) + " out of range [0, " +
                            std::to_string(ds.num_samples()) + ")");
    }
  }

  LabelMatrix labels(indexes.size(), ds.pathologies().size());
  for (size_t r = 0; r < indexes.size(); ++r) {
    for (size_t c = 0; c < ds.pathologies().size(); ++c) {
      labels.set(r, c, ds.labels().at(indexes[r], c));
    }
  }
  std::vector<ImageRef> images;
  if (ds.has_images()) {
    images.reserve(indexes.size());
    for (size_t idx : indexes) images.push_back(ds.images()[idx]);
  }

  Table csv = ds.csv().select_rows(indexes);
  // Stamp provenance at the first selection so manifests keep pointing at the
  // original source rows; parents that already carry it pass through above.
  if (!csv.has_column(kSourceNameColumn) || !csv.has_column(kSourceIndexColumn)) {
    std::vector<std::string> names(indexes.size(), ds.name());
    std::vector<std::string> rows(indexes.size());
    for (size_t r = 0; r < indexes.size(); ++r) rows[r] = std::to_string(indexes[r]);
    csv.set_column(kSourceNameColumn, std::move(names));
    csv.set_column(kSourceIndexColumn, std::move(rows));
  }

  return Dataset("SubsetDataset", ds.pathologies(), std::move(labels), std::move(csv),
                 std::move(images), DatasetKind::kSubset, {ds.header()}, ds.masks_enabled());
}

Dataset filter_views(const Dataset& ds, const std::vector<std::string>& views) {
  if (!ds.csv().has_column(kViewColumn)) {
    throw NoViewColumn("dataset '" + ds.name() + "' has no view column");
  }
  std::vector<size_t> keep;
  const auto column = ds.csv().column(kViewColumn);
  for (size_t r = 0; r < column.size(); ++r) {
    if (std::find(views.begin(), views.end(), column[r]) != views.end()) {
      keep.push_back(r);
    }
  }
  return subset(ds, keep);
}

Dataset unique_patients(const Dataset& ds) {
  if (!ds.csv().has_column(kPatientIdColumn)) {
    throw NoPatientIdColumn("dataset '" + ds.name() + "' has no patientid column");
  }
  std::vector<size_t> keep;
  std::unordered_set<std::string> seen;
  const auto column = ds.csv().column(kPatientIdColumn);
  for (size_t r = 0; r < column.size(); ++r) {
    if (seen.insert(column[r]).second) keep.push_back(r);
  }
  return subset(ds, keep);
}

std::vector<size_t> where_indexes(const Dataset& ds, std::string_view predicate) {
  // Longest operators first so "<=" is not parsed as "<".
  static constexpr std::string_view kOps[] = {"<=", ">=", "==", "!=", "<", ">"};
  std::string_view op;
  size_t op_pos = std::string_view::npos;
  for (const auto candidate : kOps) {
    const std::string padded = " " + std::string(candidate) + " ";
    const size_t pos = predicate.find(padded);
    if (pos != std::string_view::npos) {
      op = candidate;
      op_pos = pos;
      break;
    }
  }
  if (op_pos == std::string_view::npos) {
    throw FormatError("predicate must look like 'column op value' with op in "
                      "{== != < <= > >=}: '" + std::string(predicate) + "'");
  }
  const std::string column = trim(predicate.substr(0, op_pos));
  std::string value = trim(predicate.substr(op_pos + op.size() + 2));
  if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                            (value.front() == '\'' && value.back() == '\''))) {
    value = value.substr(1, value.size() - 2);
  }
  if (!ds.csv().has_column(column)) {
    throw DomainError("predicate references missing column: " + column);
  }

  double rhs_number = 0.0;
  const bool rhs_numeric = parse_number(value, rhs_number);

  std::vector<size_t> out;
  const auto cells = ds.csv().column(column);
  for (size_t r = 0; r < cells.size(); ++r) {
    const std::string cell = trim(cells[r]);
    int cmp;
    double lhs_number = 0.0;
    if (rhs_numeric && parse_number(cell, lhs_number)) {
      cmp = lhs_number < rhs_number ? -1 : (lhs_number > rhs_number ? 1 : 0);
    } else {
      cmp = cell.compare(value);
      cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
    }
    const bool match = (op == "==" && cmp == 0) || (op == "!=" && cmp != 0) ||
                       (op == "<" && cmp < 0) || (op == "<=" && cmp <= 0) ||
                       (op == ">" && cmp > 0) || (op == ">=" && cmp >= 0);
    if (match) out.push_back(r);
  }
  return out;
}

std::vector<size_t> read_index_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open index file: " + path.string());
  std::vector<size_t> out;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string token = trim(line);
    if (token.empty()) continue;
    size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_number) +
                        ": not a non-negative integer: '" + token + "'");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace cxrharmon
