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

#ifndef CXRHARMON_PNG_IO_HPP_
#define CXRHARMON_PNG_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace cxrharmon {

// Pixels exactly as stored in the file: integer, row-major, no rescaling and
// no contrast change. Grayscale only.
struct RawImage {
  size_t width = 0;
  size_t height = 0;
  int bit_depth = 0;  // 8 or 16
  std::vector<uint16_t> pixels;

  uint16_t at(size_t row, size_t col) const { return pixels[row * width + col]; }
};

// Decodes a grayscale PNG. Color, palette and alpha files raise DecodeError.
// When expected_bit_depth is 8 or 16 the stored depth must match exactly
// (BitDepthMismatch otherwise); pass 0 to accept either (sub-8-bit files are
// expanded to 8).
RawImage decode_png_gray(const std::filesystem::path& path, int expected_bit_depth);

// Writes a grayscale PNG of the given depth. Pixel values must fit the depth.
void encode_png_gray(const std::filesystem::path& path, const RawImage& img);

}  // namespace cxrharmon

#endif  // CXRHARMON_PNG_IO_HPP_
