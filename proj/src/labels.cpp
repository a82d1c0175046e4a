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

#include "cxrharmon/labels.hpp"

#include <cmath>
#include <limits>

namespace cxrharmon {

double tri_numeric(TriState v) {
  switch (v) {
    case TriState::kAbsent:
      return 0.0;
    case TriState::kPresent:
      return 1.0;
    case TriState::kUnknown:
      return std::numeric_limits<double>::quiet_NaN();
  }
  throw DomainError("invalid TriState value");
}

TriState tri_from_numeric(double value) {
  if (std::isnan(value)) return TriState::kUnknown;
  if (value == 0.0) return TriState::kAbsent;
  if (value == 1.0) return TriState::kPresent;
  throw DomainError("tri-state numeric value must be 0, 1, or NaN");
}

std::string_view tri_cell(TriState v) {
  switch (v) {
    case TriState::kAbsent:
      return "0";
    case TriState::kPresent:
      return "1";
    case TriState::kUnknown:
      return "NaN";
  }
  throw DomainError("invalid TriState value");
}

TriState tri_from_cell(std::string_view cell) {
  if (cell == "0" || cell == "0.0") return TriState::kAbsent;
  if (cell == "1" || cell == "1.0") return TriState::kPresent;
  if (cell == "NaN" || cell == "nan" || cell.empty()) return TriState::kUnknown;
  throw DomainError(std::string("tri-state cell must be 0, 1, or NaN, got: ") + std::string(cell));
}

}  // namespace cxrharmon
