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

#include "cxrharmon/io.hpp"

#include <unistd.h>

#include <atomic>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace cxrharmon {

namespace {

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  static std::atomic<uint64_t> counter{0};
  const uint64_t id = counter.fetch_add(1);
  return path.parent_path() /
         (path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
          std::to_string(id));
}

void atomic_write_impl(const std::filesystem::path& path, const char* data, size_t size) {
  const std::filesystem::path tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(data, static_cast<std::streamsize>(size));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("rename to " + path.string() + " failed: " + ec.message());
  }
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path, std::string_view content) {
  atomic_write_impl(path, content.data(), content.size());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + " is not valid JSON: " + e.what());
  }
}

void write_manifest(const Dataset& ds, const std::filesystem::path& path) {
  atomic_write_text(path, write_csv(manifest_table(ds).to_csv()));
}

nlohmann::json stats_json(const Dataset& ds) {
  nlohmann::json totals = nlohmann::json::object();
  for (const auto& [pathology, counts] : ds.totals()) {
    totals[pathology.name()] = {{"0", counts.absent}, {"1", counts.present}};
  }
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["name"] = ds.name();
  doc["num_samples"] = ds.num_samples();
  doc["views"] = ds.distinct_views();
  doc["totals"] = std::move(totals);
  return doc;
}

void write_tensor_f32(const Image& img, const std::filesystem::path& bin_path,
                      const std::filesystem::path& header_path) {
  std::string bytes;
  bytes.reserve(img.size() * 4);
  for (double v : img.data()) {
    const auto bits = std::bit_cast<uint32_t>(static_cast<float>(v));
    bytes.push_back(static_cast<char>(bits & 0xFF));
    bytes.push_back(static_cast<char>((bits >> 8) & 0xFF));
    bytes.push_back(static_cast<char>((bits >> 16) & 0xFF));
    bytes.push_back(static_cast<char>((bits >> 24) & 0xFF));
  }
  atomic_write_impl(bin_path, bytes.data(), bytes.size());

  nlohmann::json header;
  header["format_version"] = 1;
  header["dtype"] = "float32";
  header["byte_order"] = "little";
  header["shape"] = {1, img.height(), img.width()};
  header["range"] = {-1024.0, 1024.0};
  atomic_write_text(header_path, header.dump(2) + "\n");
}

}  // namespace cxrharmon
