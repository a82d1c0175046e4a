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

#ifndef CXRHARMON_TESTS_SUPPORT_FIXTURES_HPP_
#define CXRHARMON_TESTS_SUPPORT_FIXTURES_HPP_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cxrharmon/covariate.hpp"
#include "cxrharmon/dataset.hpp"
#include "cxrharmon/png_io.hpp"

namespace cxrharmon::testing {

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Rows of '0' / '1' / 'N' characters, one column per pathology.
LabelMatrix labels_from_strings(const std::vector<std::string>& rows, size_t cols);

struct MemorySpec {
  std::string name = "fixture";
  std::vector<std::string> pathologies;  // canonical names
  std::vector<std::string> label_rows;   // e.g. {"1N0", "011"}
  std::vector<std::string> patientids;   // optional, same length as rows
  std::vector<std::string> views;        // optional
  std::vector<Image> images;             // optional; deterministic defaults otherwise
  size_t image_side = 16;
  std::map<size_t, std::vector<std::pair<std::string, MaskGeometry>>> masks;
  bool masks_enabled = false;
};

// In-memory dataset with standardized columns for whatever the spec carries.
Dataset make_memory_dataset(MemorySpec spec);

// Deterministic image content for row `index`: a mild gradient offset by the
// index so every row is distinct, values well inside [-1024, 1024].
Image gradient_image(size_t index, size_t side);

// Grayscale PNG written from a pixel function.
void write_png(const std::filesystem::path& path, size_t width, size_t height,
               const std::function<uint16_t(size_t row, size_t col)>& pixel, int bit_depth = 8);

// NIH-style on-disk fixture: 12 images, pipe-delimited "Finding Labels",
// patient ids, views, follow-up offsets, plus a sidecar box-mask CSV for two
// of the images. Returns the profile path.
std::filesystem::path write_nih_style_fixture(const std::filesystem::path& dir);

// CheXpert-style per-column fixture with -1 uncertainty codes and blanks.
std::filesystem::path write_chexpert_style_fixture(const std::filesystem::path& dir);

// Class-difference fixture: single pathology "Lesion"; positive rows carry a
// bright square patch at rows/cols [8, 16) of a 32x32 frame.
std::filesystem::path write_patch_fixture(const std::filesystem::path& dir, size_t positives = 4,
                                          size_t negatives = 4);

// Single-pathology ("target") in-memory dataset whose `mode` pool contains
// exactly per_cell Present and per_cell Absent rows under (seed, fractions).
// Patient ids are unique per row and prefixed so two sources decorrelate.
Dataset make_covariate_source(const std::string& name, const std::string& patient_prefix,
                              size_t per_cell, uint64_t seed, SplitMode mode,
                              const PoolFractions& fractions = {});

// On-disk equivalent for CLI runs: adapter profile over 8x8 PNGs with a
// per-column "Pneumonia" label and a patientid column, engineered the same
// way. Returns the profile path.
std::filesystem::path write_covariate_cli_fixture(const std::filesystem::path& dir,
                                                  const std::string& name,
                                                  const std::string& patient_prefix,
                                                  size_t per_cell, uint64_t seed, SplitMode mode);

}  // namespace cxrharmon::testing

#endif  // CXRHARMON_TESTS_SUPPORT_FIXTURES_HPP_
