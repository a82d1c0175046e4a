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

#ifndef CXRHARMON_IO_HPP_
#define CXRHARMON_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cxrharmon/dataset.hpp"

namespace cxrharmon {

// All file outputs go through temp-file + rename so a crashed run never
// leaves a half-written artifact for downstream jobs to pick up.
void atomic_write_text(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Manifest CSV, written atomically.
void write_manifest(const Dataset& ds, const std::filesystem::path& path);

// {"format_version":1, "name":..., "num_samples":N, "views":[...],
//  "totals": {"<pathology>": {"0": n0, "1": n1}, ...}}
nlohmann::json stats_json(const Dataset& ds);

// Sample tensor export: raw little-endian float32 (row-major) next to a JSON
// header {"format_version":1,"dtype":"float32","byte_order":"little",
// "shape":[1,H,W],"range":[-1024.0,1024.0]}.
void write_tensor_f32(const Image& img, const std::filesystem::path& bin_path,
                      const std::filesystem::path& header_path);

}  // namespace cxrharmon

#endif  // CXRHARMON_IO_HPP_
