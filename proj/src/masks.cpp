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

#include "cxrharmon/masks.hpp"

#include <algorithm>
#include <cmath>

#include "cxrharmon/errors.hpp"

namespace cxrharmon {

namespace {

Image rasterize_box(const BoxGeometry& box, size_t height, size_t width) {
  if (box.w < 1 || box.h < 1) {
    throw DomainError("box width and height must be >= 1");
  }
  const int64_t h = static_cast<int64_t>(height);
  const int64_t w = static_cast<int64_t>(width);
  const int64_t row0 = std::max<int64_t>(box.y, 0);
  const int64_t row1 = std::min<int64_t>(box.y + box.h, h);
  const int64_t col0 = std::max<int64_t>(box.x, 0);
  const int64_t col1 = std::min<int64_t>(box.x + box.w, w);
  if (row0 >= row1 || col0 >= col1) {
    throw DegenerateBox("box lies fully outside the image");
  }
  Image out(height, width, 0.0);
  for (int64_t r = row0; r < row1; ++r) {
    for (int64_t c = col0; c < col1; ++c) {
      out.at(static_cast<size_t>(r), static_cast<size_t>(c)) = 1.0;
    }
  }
  return out;
}

Image resample_nearest(const Image& grid, size_t height, size_t width) {
  Image out(height, width);
  const double sy = static_cast<double>(grid.height()) / static_cast<double>(height);
  const double sx = static_cast<double>(grid.width()) / static_cast<double>(width);
  for (size_t r = 0; r < height; ++r) {
    auto src_r = static_cast<size_t>(std::min(
        std::floor((static_cast<double>(r) + 0.5) * sy), static_cast<double>(grid.height() - 1)));
    for (size_t c = 0; c < width; ++c) {
      auto src_c = static_cast<size_t>(std::min(
          std::floor((static_cast<double>(c) + 0.5) * sx), static_cast<double>(grid.width() - 1)));
      out.at(r, c) = grid.at(src_r, src_c);
    }
  }
  return out;
}

}  // namespace

Image rasterize(const MaskGeometry& geom, size_t height, size_t width) {
  if (height == 0 || width == 0) throw DomainError("mask target shape must be >= 1x1");
  if (const auto* box = std::get_if<BoxGeometry>(&geom)) {
    return rasterize_box(*box, height, width);
  }
  const auto& bitmap = std::get<BitmapGeometry>(geom);
  if (bitmap.grid.empty()) throw DomainError("bitmap mask is empty");
  if (bitmap.grid.height() == height && bitmap.grid.width() == width) {
    return bitmap.grid;
  }
  return resample_nearest(bitmap.grid, height, width);
}

Image merge_or(const std::vector<Image>& masks) {
  if (masks.empty()) throw DomainError("merge_or needs at least one mask");
  Image out = masks.front();
  for (size_t i = 1; i < masks.size(); ++i) {
    if (!masks[i].same_shape(out)) {
      throw ShapeMismatch("merge_or masks must share a shape");
    }
    for (size_t k = 0; k < out.size(); ++k) {
      out.data()[k] = std::max(out.data()[k], masks[i].data()[k]);
    }
  }
  return out;
}

}  // namespace cxrharmon
