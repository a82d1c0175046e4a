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

#ifndef CXRHARMON_INGESTION_HPP_
#define CXRHARMON_INGESTION_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cxrharmon/dataset.hpp"
#include "cxrharmon/png_io.hpp"

namespace cxrharmon {

// Per-pathology label decoding for per-column sources (CheXpert style):
// match a cell against explicit value sets. The three sets must be pairwise
// disjoint. Cells matching none of them decode as Unknown.
struct PerColumnRule {
  std::string column;
  std::set<std::string> positive;
  std::set<std::string> negative;
  std::set<std::string> unknown;
};

// Token-list label decoding (NIH "Finding Labels" style): a cell holds
// delimiter-separated finding names; a declared pathology decodes Present
// when mentioned and Absent otherwise. The negation token ("No Finding") is
// recognized so it is not reported as an unknown finding.
struct DelimitedRule {
  std::string column;
  std::string delimiter = "|";
  std::string negation_token;
};

struct MaskSourceDecl {
  enum class Type { kSidecarCsv, kBitmapDir };
  Type type = Type::kSidecarCsv;
  std::filesystem::path path;
};

// Declarative description of one source dataset: where the files live, how
// the CSV encodes labels, and how raw metadata maps onto the standardized
// columns. Profiles are JSON documents; see docs/adapter-profile.md.
struct AdapterProfile {
  std::string name;
  std::filesystem::path imgpath;
  std::filesystem::path csvpath;
  std::string image_column;
  int bit_depth = 8;
  std::vector<Pathology> pathologies;

  // Exactly one of the two label modes is configured.
  std::optional<std::map<std::string, PerColumnRule>> per_column;  // key: canonical name
  std::optional<DelimitedRule> delimited;

  std::optional<std::string> patientid_column;
  std::optional<std::string> view_column;
  std::map<std::string, std::string> view_map;  // raw -> canonical
  std::optional<std::string> offset_column;
  std::optional<MaskSourceDecl> mask_source;

  // Structural checks independent of any CSV: bit depth, label-mode
  // exclusivity, per-column value-set disjointness. Throws ProfileError.
  void validate() const;

  static AdapterProfile from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir);
  static AdapterProfile from_file(const std::filesystem::path& path);
};

struct LoadStats {
  size_t csv_rows = 0;
  size_t usable_rows = 0;
  size_t dropped_missing_image = 0;
};

// Loads a source dataset: parses the metadata CSV, decodes labels per the
// profile, drops rows whose image file is missing (warned and counted), and
// adds the standardized columns. Throws CsvParseError / ProfileError /
// EmptyDataset.
Dataset load_dataset(const AdapterProfile& profile, LoadStats* stats = nullptr);

// Decodes a grayscale PNG with the declared bit depth; pixels exactly as
// stored.
RawImage decode_image(const std::filesystem::path& path, int bit_depth);

// Possible-range scaling: out = p / (2^bit_depth - 1) * 2048 - 1024. The
// mapping depends only on the bit depth, never on the image's own min/max,
// so identical pixel content always scales identically.
Image scale_pixels(const RawImage& img);

// Loads a metadata-only dataset from a manifest CSV previously produced by
// manifest_table(). Columns other than source_name/source_index and the
// standardized metadata columns are read as pathology label columns.
Dataset load_manifest(const std::filesystem::path& path);

// Dispatch on extension: .json loads a profile, .csv loads a manifest.
Dataset load_input(const std::filesystem::path& path, LoadStats* stats = nullptr);

}  // namespace cxrharmon

#endif  // CXRHARMON_INGESTION_HPP_
