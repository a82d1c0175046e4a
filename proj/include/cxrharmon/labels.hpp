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

#ifndef CXRHARMON_LABELS_HPP_
#define CXRHARMON_LABELS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cxrharmon/errors.hpp"
#include "cxrharmon/taxonomy.hpp"

namespace cxrharmon {

// Tri-state label. Unknown means "no information", not negative. In numeric
// exports the states render as 1, 0, NaN; NaN never compares equal to itself,
// so code that needs to detect the state uses is_unknown() instead.
enum class TriState : uint8_t {
  kAbsent = 0,
  kPresent = 1,
  kUnknown = 2,
};

inline bool is_unknown(TriState v) { return v == TriState::kUnknown; }

// 1.0 / 0.0 / NaN.
double tri_numeric(TriState v);

// Accepts 0, 1, or NaN; anything else throws DomainError.
TriState tri_from_numeric(double value);

// CSV cell rendering: "1", "0", "NaN".
std::string_view tri_cell(TriState v);
TriState tri_from_cell(std::string_view cell);

// Dense tri-state matrix, one row per sample, one column per pathology.
class LabelMatrix {
 public:
  LabelMatrix() = default;

  LabelMatrix(size_t rows, size_t cols, TriState fill = TriState::kUnknown)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  TriState at(size_t row, size_t col) const {
    check(row, col);
    return data_[row * cols_ + col];
  }

  void set(size_t row, size_t col, TriState v) {
    check(row, col);
    data_[row * cols_ + col] = v;
  }

  std::vector<TriState> row(size_t r) const {
    if (r >= rows_) throw IndexOutOfRange("label row out of range");
    return std::vector<TriState>(data_.begin() + static_cast<ptrdiff_t>(r * cols_),
                                 data_.begin() + static_cast<ptrdiff_t>((r + 1) * cols_));
  }

  std::vector<TriState> column(size_t c) const {
    if (c >= cols_) throw IndexOutOfRange("label column out of range");
    std::vector<TriState> out;
    out.reserve(rows_);
    for (size_t r = 0; r < rows_; ++r) out.push_back(data_[r * cols_ + c]);
    return out;
  }

  bool operator==(const LabelMatrix&) const = default;

 private:
  void check(size_t row, size_t col) const {
    if (row >= rows_ || col >= cols_) throw IndexOutOfRange("label index out of range");
  }

  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<TriState> data_;
};

// Per-pathology counts of definite labels; Unknown entries count in neither.
struct ClassCounts {
  size_t absent = 0;
  size_t present = 0;
  bool operator==(const ClassCounts&) const = default;
};

using LabelTotals = std::vector<std::pair<Pathology, ClassCounts>>;

}  // namespace cxrharmon

#endif  // CXRHARMON_LABELS_HPP_
