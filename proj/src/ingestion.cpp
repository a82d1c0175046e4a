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

#include "cxrharmon/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

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

// Either a box in source-pixel coordinates or a path to a bitmap PNG decoded
// on demand.
struct MaskIndexEntry {
  std::string pathology;  // canonical
  std::optional<BoxGeometry> box;
  std::filesystem::path bitmap_path;
};

using MaskIndex = std::map<std::string, std::vector<MaskIndexEntry>>;

int64_t parse_int_cell(const std::string& cell, const std::string& what) {
  const std::string trimmed = trim(cell);
  int64_t value = 0;
  const auto* begin = trimmed.data();
  const auto* end = trimmed.data() + trimmed.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("cannot parse " + what + " from '" + cell + "'");
  }
  return value;
}

MaskIndex build_mask_index(const AdapterProfile& profile) {
  MaskIndex index;
  if (!profile.mask_source.has_value()) return index;
  const auto& decl = *profile.mask_source;

  if (decl.type == MaskSourceDecl::Type::kSidecarCsv) {
    if (!std::filesystem::exists(decl.path)) {
      throw ProfileError("mask sidecar CSV not found: " + decl.path.string());
    }
    const CsvData csv = read_csv_file(decl.path);
    for (const char* required : {"image", "pathology", "x", "y", "w", "h"}) {
      if (std::find(csv.header.begin(), csv.header.end(), required) == csv.header.end()) {
        throw ProfileError("mask sidecar CSV missing column: " + std::string(required));
      }
    }
    const Table table = Table::from_csv(csv);
    for (size_t r = 0; r < table.num_rows(); ++r) {
      MaskIndexEntry entry;
      entry.pathology = normalize_name(table.cell(r, "pathology")).name();
      entry.box = BoxGeometry{parse_int_cell(table.cell(r, "x"), "mask x"),
                              parse_int_cell(table.cell(r, "y"), "mask y"),
                              parse_int_cell(table.cell(r, "w"), "mask w"),
                              parse_int_cell(table.cell(r, "h"), "mask h")};
      index[table.cell(r, "image")].push_back(std::move(entry));
    }
    return index;
  }

  // Bitmap directory: files named "<image stem>__<pathology>.png" where the
  // pathology part uses underscores for spaces.
  if (!std::filesystem::is_directory(decl.path)) {
    throw ProfileError("mask bitmap directory not found: " + decl.path.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(decl.path)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const std::string stem = entry.path().stem().string();
    const size_t sep = stem.rfind("__");
    if (sep == std::string::npos) {
      log::warn("ignoring mask bitmap without '__' separator: " + entry.path().string());
      continue;
    }
    MaskIndexEntry mask;
    mask.pathology = normalize_name(stem.substr(sep + 2)).name();
    mask.bitmap_path = entry.path();
    index[stem.substr(0, sep)].push_back(std::move(mask));
  }
  return index;
}

// Image provider for a directory of grayscale PNGs, one per kept row.
class PngDirectorySource : public ImageSource {
 public:
  PngDirectorySource(std::filesystem::path dir, std::vector<std::string> filenames,
                     int bit_depth, MaskIndex mask_index, bool has_mask_source)
      : dir_(std::move(dir)),
        filenames_(std::move(filenames)),
        bit_depth_(bit_depth),
        mask_index_(std::move(mask_index)),
        has_mask_source_(has_mask_source) {}

  Image load(size_t index) const override {
    return scale_pixels(decode_image(dir_ / filenames_.at(index), bit_depth_));
  }

  std::vector<std::pair<std::string, MaskGeometry>> mask_geometries(size_t index) const override {
    std::vector<std::pair<std::string, MaskGeometry>> out;
    const std::string& filename = filenames_.at(index);
    auto it = mask_index_.find(filename);
    if (it == mask_index_.end()) {
      // Bitmap indexes are keyed by stem, box indexes by full filename.
      it = mask_index_.find(std::filesystem::path(filename).stem().string());
      if (it == mask_index_.end()) return out;
    }
    for (const auto& entry : it->second) {
      if (entry.box.has_value()) {
        out.emplace_back(entry.pathology, *entry.box);
      } else {
        const RawImage raw = decode_png_gray(entry.bitmap_path, 0);
        Image grid(raw.height, raw.width);
        for (size_t i = 0; i < raw.pixels.size(); ++i) {
          grid.data()[i] = raw.pixels[i] != 0 ? 1.0 : 0.0;
        }
        out.emplace_back(entry.pathology, BitmapGeometry{std::move(grid)});
      }
    }
    return out;
  }

  bool has_mask_source() const override { return has_mask_source_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> filenames_;
  int bit_depth_;
  MaskIndex mask_index_;
  bool has_mask_source_;
};

std::vector<TriState> decode_labels_per_column(
    const AdapterProfile& profile, const Table& table, size_t row) {
  std::vector<TriState> out;
  out.reserve(profile.pathologies.size());
  for (const auto& pathology : profile.pathologies) {
    const PerColumnRule& rule = profile.per_column->at(pathology.name());
    const std::string value = trim(table.cell(row, rule.column));
    if (rule.positive.count(value) > 0) {
      out.push_back(TriState::kPresent);
    } else if (rule.negative.count(value) > 0) {
      out.push_back(TriState::kAbsent);
    } else if (rule.unknown.count(value) > 0) {
      out.push_back(TriState::kUnknown);
    } else {
      log::debug("unmapped label cell '" + value + "' for " + pathology.name() +
                 "; treating as Unknown");
      out.push_back(TriState::kUnknown);
    }
  }
  return out;
}

std::vector<TriState> decode_labels_delimited(
    const AdapterProfile& profile, const Table& table, size_t row) {
  const DelimitedRule& rule = *profile.delimited;
  const std::string cell = table.cell(row, rule.column);

  std::set<std::string> mentioned;
  size_t pos = 0;
  const std::string negation = rule.negation_token.empty()
                                   ? std::string()
                                   : normalize_name(rule.negation_token).name();
  while (pos <= cell.size()) {
    const size_t next = rule.delimiter.empty()
                            ? std::string::npos
                            : cell.find(rule.delimiter, pos);
    const size_t end = next == std::string::npos ? cell.size() : next;
    const std::string token = trim(std::string_view(cell).substr(pos, end - pos));
    if (!token.empty()) {
      const std::string canonical = normalize_name(token).name();
      if (canonical != negation) {
        mentioned.insert(canonical);
      }
    }
    if (next == std::string::npos) break;
    pos = next + rule.delimiter.size();
  }

  std::vector<TriState> out;
  out.reserve(profile.pathologies.size());
  for (const auto& pathology : profile.pathologies) {
    out.push_back(mentioned.count(pathology.name()) > 0 ? TriState::kPresent
                                                        : TriState::kAbsent);
  }
  for (const auto& token : mentioned) {
    if (std::find_if(profile.pathologies.begin(), profile.pathologies.end(),
                     [&](const Pathology& p) { return p.name() == token; }) ==
        profile.pathologies.end()) {
      log::debug("finding token not in declared pathologies: " + token);
    }
  }
  return out;
}

void require_column(const Table& table, const std::string& column, const std::string& role) {
  if (!table.has_column(column)) {
    throw ProfileError("profile references missing CSV column '" + column + "' (" + role + ")");
  }
}

}  // namespace

void AdapterProfile::validate() const {
  if (name.empty()) throw ProfileError("profile name must be non-empty");
  if (bit_depth != 8 && bit_depth != 16) {
    throw ProfileError("bit_depth must be 8 or 16, got " + std::to_string(bit_depth));
  }
  if (per_column.has_value() == delimited.has_value()) {
    throw ProfileError("exactly one label mode (per_column or delimited_string) must be set");
  }
  if (image_column.empty()) throw ProfileError("image_column must be set");
  if (pathologies.empty()) throw ProfileError("profile declares no pathologies");
  {
    std::set<std::string> seen;
    for (const auto& p : pathologies) {
      if (!seen.insert(p.name()).second) {
        throw ProfileError("duplicate pathology in profile: " + p.name());
      }
    }
  }
  if (per_column.has_value()) {
    for (const auto& pathology : pathologies) {
      const auto it = per_column->find(pathology.name());
      if (it == per_column->end()) {
        throw ProfileError("per_column mode lacks a rule for pathology: " + pathology.name());
      }
      const PerColumnRule& rule = it->second;
      auto overlaps = [](const std::set<std::string>& a, const std::set<std::string>& b) {
        return std::any_of(a.begin(), a.end(),
                           [&](const std::string& v) { return b.count(v) > 0; });
      };
      if (overlaps(rule.positive, rule.negative) || overlaps(rule.positive, rule.unknown) ||
          overlaps(rule.negative, rule.unknown)) {
        throw ProfileError("per_column value sets overlap for pathology: " + pathology.name());
      }
    }
  }
}

AdapterProfile AdapterProfile::from_json(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir) {
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) throw FormatError(std::string("profile missing field: ") + key);
    return doc.at(key);
  };
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  AdapterProfile profile;
  profile.name = require("name").get<std::string>();
  profile.imgpath = resolve(require("imgpath").get<std::string>());
  profile.csvpath = resolve(require("csvpath").get<std::string>());
  profile.image_column = require("image_column").get<std::string>();
  profile.bit_depth = require("bit_depth").get<int>();
  for (const auto& entry : require("pathologies")) {
    profile.pathologies.push_back(normalize_name(entry.get<std::string>()));
  }

  const nlohmann::json& labels = require("labels");
  const std::string mode = labels.at("mode").get<std::string>();
  if (mode == "per_column") {
    std::map<std::string, PerColumnRule> rules;
    for (const auto& [raw_name, body] : labels.at("columns").items()) {
      PerColumnRule rule;
      rule.column = body.at("column").get<std::string>();
      for (const auto& v : body.value("positive", nlohmann::json::array()))
        rule.positive.insert(v.get<std::string>());
      for (const auto& v : body.value("negative", nlohmann::json::array()))
        rule.negative.insert(v.get<std::string>());
      for (const auto& v : body.value("unknown", nlohmann::json::array()))
        rule.unknown.insert(v.get<std::string>());
      rules[normalize_name(raw_name).name()] = std::move(rule);
    }
    profile.per_column = std::move(rules);
  } else if (mode == "delimited_string") {
    DelimitedRule rule;
    rule.column = labels.at("column").get<std::string>();
    rule.delimiter = labels.value("delimiter", "|");
    rule.negation_token = labels.value("negation_token", "");
    profile.delimited = std::move(rule);
  } else {
    throw FormatError("unknown label mode: " + mode);
  }

  if (doc.contains("patientid_column")) {
    profile.patientid_column = doc.at("patientid_column").get<std::string>();
  }
  if (doc.contains("view_column")) {
    profile.view_column = doc.at("view_column").get<std::string>();
  }
  if (doc.contains("view_map")) {
    for (const auto& [raw, canonical] : doc.at("view_map").items()) {
      profile.view_map[raw] = canonical.get<std::string>();
    }
  }
  if (doc.contains("offset_column")) {
    profile.offset_column = doc.at("offset_column").get<std::string>();
  }
  if (doc.contains("mask_source")) {
    const auto& ms = doc.at("mask_source");
    MaskSourceDecl decl;
    const std::string type = ms.at("type").get<std::string>();
    if (type == "sidecar_csv") {
      decl.type = MaskSourceDecl::Type::kSidecarCsv;
    } else if (type == "bitmap_dir") {
      decl.type = MaskSourceDecl::Type::kBitmapDir;
    } else {
      throw FormatError("unknown mask_source type: " + type);
    }
    decl.path = resolve(ms.at("path").get<std::string>());
    profile.mask_source = decl;
  }
  return profile;
}

AdapterProfile AdapterProfile::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("profile " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return from_json(doc, path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("profile " + path.string() + ": " + e.what());
  }
}

Dataset load_dataset(const AdapterProfile& profile, LoadStats* stats) {
  profile.validate();
  if (!std::filesystem::exists(profile.csvpath)) {
    throw ProfileError("csvpath does not exist: " + profile.csvpath.string());
  }
  if (!std::filesystem::is_directory(profile.imgpath)) {
    throw ProfileError("imgpath is not a directory: " + profile.imgpath.string());
  }

  const Table raw = Table::from_csv(read_csv_file(profile.csvpath));
  require_column(raw, profile.image_column, "image_column");
  if (profile.per_column.has_value()) {
    for (const auto& [name, rule] : *profile.per_column) {
      require_column(raw, rule.column, "label column for " + name);
    }
  } else {
    require_column(raw, profile.delimited->column, "delimited label column");
  }
  if (profile.patientid_column.has_value()) {
    require_column(raw, *profile.patientid_column, "patientid_column");
  }
  if (profile.view_column.has_value()) {
    require_column(raw, *profile.view_column, "view_column");
  }
  if (profile.offset_column.has_value()) {
    require_column(raw, *profile.offset_column, "offset_column");
  }

  const MaskIndex mask_index = build_mask_index(profile);
  auto has_mask_entry = [&](const std::string& filename) {
    if (mask_index.count(filename) > 0) return true;
    return mask_index.count(std::filesystem::path(filename).stem().string()) > 0;
  };

  std::vector<size_t> kept_rows;
  std::vector<std::string> filenames;
  size_t dropped = 0;
  for (size_t r = 0; r < raw.num_rows(); ++r) {
    const std::string filename = trim(raw.cell(r, profile.image_column));
    if (filename.empty() || !std::filesystem::exists(profile.imgpath / filename)) {
      log::warn("dropping row " + std::to_string(r) + ": missing image file '" + filename + "'");
      ++dropped;
      continue;
    }
    kept_rows.push_back(r);
    filenames.push_back(filename);
  }
  if (stats != nullptr) {
    stats->csv_rows = raw.num_rows();
    stats->usable_rows = kept_rows.size();
    stats->dropped_missing_image = dropped;
  }
  if (kept_rows.empty()) {
    throw EmptyDataset("no usable rows in " + profile.csvpath.string());
  }

  Table csv = raw.select_rows(kept_rows);
  LabelMatrix labels(kept_rows.size(), profile.pathologies.size());
  for (size_t i = 0; i < kept_rows.size(); ++i) {
    const std::vector<TriState> row = profile.per_column.has_value()
                                          ? decode_labels_per_column(profile, csv, i)
                                          : decode_labels_delimited(profile, csv, i);
    for (size_t c = 0; c < row.size(); ++c) labels.set(i, c, row[c]);
  }

  const size_t n = kept_rows.size();
  if (profile.patientid_column.has_value()) {
    std::vector<std::string> cells(n);
    for (size_t i = 0; i < n; ++i) cells[i] = trim(csv.cell(i, *profile.patientid_column));
    csv.set_column(kPatientIdColumn, std::move(cells));
  }
  if (profile.view_column.has_value()) {
    std::vector<std::string> cells(n);
    for (size_t i = 0; i < n; ++i) {
      const std::string raw_view = trim(csv.cell(i, *profile.view_column));
      const auto it = profile.view_map.find(raw_view);
      cells[i] = it != profile.view_map.end() ? it->second : raw_view;
    }
    csv.set_column(kViewColumn, std::move(cells));
  }
  if (profile.offset_column.has_value()) {
    std::vector<std::string> cells(n);
    for (size_t i = 0; i < n; ++i) {
      const std::string value = trim(csv.cell(i, *profile.offset_column));
      if (value.empty()) continue;
      try {
        cells[i] = std::to_string(parse_int_cell(value, "offset_day_int"));
      } catch (const FormatError&) {
        log::warn("row " + std::to_string(i) + ": offset value '" + value +
                  "' is not an integer; leaving empty");
      }
    }
    csv.set_column(kOffsetColumn, std::move(cells));
  }
  {
    std::vector<std::string> cells(n);
    for (size_t i = 0; i < n; ++i) {
      cells[i] = has_mask_entry(filenames[i]) ? "true" : "false";
    }
    csv.set_column(kHasMasksColumn, std::move(cells));
  }

  auto source = std::make_shared<PngDirectorySource>(profile.imgpath, filenames,
                                                     profile.bit_depth, mask_index,
                                                     profile.mask_source.has_value());
  std::vector<ImageRef> refs;
  refs.reserve(n);
  for (size_t i = 0; i < n; ++i) refs.push_back(ImageRef{source, i});

  Taxonomy taxonomy{std::vector<Pathology>(profile.pathologies.begin(),
                                           profile.pathologies.end())};
  return Dataset(profile.name, std::move(taxonomy), std::move(labels), std::move(csv),
                 std::move(refs));
}

RawImage decode_image(const std::filesystem::path& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw DomainError("bit_depth must be 8 or 16");
  }
  return decode_png_gray(path, bit_depth);
}

Image scale_pixels(const RawImage& img) {
  if (img.bit_depth != 8 && img.bit_depth != 16) {
    throw DomainError("RawImage bit depth must be 8 or 16");
  }
  const double denom = img.bit_depth == 8 ? 255.0 : 65535.0;
  Image out(img.height, img.width);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    out.data()[i] = static_cast<double>(img.pixels[i]) / denom * 2048.0 - 1024.0;
  }
  return out;
}

Dataset load_manifest(const std::filesystem::path& path) {
  const Table table = Table::from_csv(read_csv_file(path));
  for (const char* required : {kSourceNameColumn, kSourceIndexColumn}) {
    if (!table.has_column(required)) {
      throw FormatError("manifest " + path.string() + " missing column: " + required);
    }
  }

  const std::set<std::string> metadata_columns = {kSourceNameColumn, kSourceIndexColumn,
                                                  kPatientIdColumn, kViewColumn, kOffsetColumn,
                                                  kHasMasksColumn};
  std::vector<Pathology> pathologies;
  Table csv;
  for (const auto& column : table.columns()) {
    if (metadata_columns.count(column) > 0) {
      csv.set_column(column, table.column(column));
    } else {
      pathologies.push_back(Pathology::canonical(column));
    }
  }

  LabelMatrix labels(table.num_rows(), pathologies.size());
  for (size_t c = 0; c < pathologies.size(); ++c) {
    const auto cells = table.column(pathologies[c].name());
    for (size_t r = 0; r < cells.size(); ++r) {
      try {
        labels.set(r, c, tri_from_cell(trim(cells[r])));
      } catch (const DomainError& e) {
        throw FormatError("manifest " + path.string() + " row " + std::to_string(r) + ": " +
                          e.what());
      }
    }
  }

  return Dataset(path.stem().string(), Taxonomy(std::move(pathologies)), std::move(labels),
                 std::move(csv));
}

Dataset load_input(const std::filesystem::path& path, LoadStats* stats) {
  const std::string ext = path.extension().string();
  if (ext == ".json") return load_dataset(AdapterProfile::from_file(path), stats);
  if (ext == ".csv") return load_manifest(path);
  throw FormatError("input must be a profile (.json) or manifest (.csv): " + path.string());
}

}  // namespace cxrharmon
