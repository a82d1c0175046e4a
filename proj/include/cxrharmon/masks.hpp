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

#ifndef CXRHARMON_MASKS_HPP_
#define CXRHARMON_MASKS_HPP_

#include <cstdint>
#include <variant>
#include <vector>

#include "cxrharmon/image.hpp"

namespace cxrharmon {

// Axis-aligned rectangle in source-image pixel units. Fills the half-open
// rectangle [y, y+h) x [x, x+w), so area is exactly w * h before clipping.
struct BoxGeometry {
  int64_t x = 0;
  int64_t y = 0;
  int64_t w = 0;
  int64_t h = 0;
};

// Pre-painted binary grid; passed through, resampled nearest-neighbor when
// the target shape differs.
struct BitmapGeometry {
  Image grid;
};

using MaskGeometry = std::variant<BoxGeometry, BitmapGeometry>;

// Renders a geometry onto an H x W binary grid. A box that is fully outside
// the image after clipping raises DegenerateBox.
Image rasterize(const MaskGeometry& geom, size_t height, size_t width);

// Elementwise maximum over the list; binary inputs stay binary. All grids
// must share a shape (ShapeMismatch) and the list must be non-empty.
Image merge_or(const std::vector<Image>& masks);

}  // namespace cxrharmon

#endif  // CXRHARMON_MASKS_HPP_
