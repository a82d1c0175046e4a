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

#ifndef CXRHARMON_IMAGE_HPP_
#define CXRHARMON_IMAGE_HPP_

#include <cstddef>
#include <vector>

#include "cxrharmon/errors.hpp"

namespace cxrharmon {

// Single-channel image grid, row-major, double precision. The channel axis is
// implicit (always 1), so a sample tensor [1, H, W] is an Image of H x W.
// Scaled radiographs hold values in [-1024, 1024]; masks reuse the same
// container with values in [0, 1]. Exports downcast to float32 at the edge.
class Image {
 public:
  Image() = default;

  Image(size_t height, size_t width, double fill = 0.0)
      : height_(height), width_(width), data_(height * width, fill) {}

  size_t height() const { return height_; }
  size_t width() const { return width_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double at(size_t row, size_t col) const { return data_[row * width_ + col]; }
  double& at(size_t row, size_t col) { return data_[row * width_ + col]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  double min_value() const {
    check_nonempty();
    double m = data_[0];
    for (double v : data_) m = v < m ? v : m;
    return m;
  }

  double max_value() const {
    check_nonempty();
    double m = data_[0];
    for (double v : data_) m = v > m ? v : m;
    return m;
  }

  // Bit-exact equality; determinism tests rely on it.
  bool operator==(const Image& other) const = default;

 private:
  void check_nonempty() const {
    if (data_.empty()) throw DomainError("empty image has no extrema");
  }

  size_t height_ = 0;
  size_t width_ = 0;
  std::vector<double> data_;
};

}  // namespace cxrharmon

#endif  // CXRHARMON_IMAGE_HPP_
