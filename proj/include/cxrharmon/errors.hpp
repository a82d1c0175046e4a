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

#ifndef CXRHARMON_ERRORS_HPP_
#define CXRHARMON_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cxrharmon {

// Base class for every error the library raises. The CLI maps subclasses of
// Error to exit code 2 (data error); flag misuse is handled before library
// code runs and exits 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Naming and taxonomy.
struct EmptyName : Error { using Error::Error; };
struct DuplicatePathology : Error { using Error::Error; };

// Ingestion.
struct CsvParseError : Error { using Error::Error; };
struct ProfileError : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct DecodeError : Error { using Error::Error; };
struct BitDepthMismatch : Error { using Error::Error; };

// Dataset access and algebra.
struct IndexOutOfRange : Error { using Error::Error; };
struct DuplicateTarget : Error { using Error::Error; };
struct PathologyMismatch : Error { using Error::Error; };
struct NoViewColumn : Error { using Error::Error; };
struct NoPatientIdColumn : Error { using Error::Error; };

// Transforms and masks.
struct ShapeMismatch : Error { using Error::Error; };
struct DegenerateBox : Error { using Error::Error; };
struct NoMaskSource : Error { using Error::Error; };

// Covariate splits.
struct InfeasiblePool : Error { using Error::Error; };
struct EmptyClass : Error { using Error::Error; };

// Calibration.
struct SingleClass : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };

// Violated preconditions on plain values (ranges, shapes, enum domains).
struct DomainError : Error { using Error::Error; };

// File formats other than CSV (profiles, manifests, params, transform strings).
struct FormatError : Error { using Error::Error; };

// Filesystem failures (open/read/write/rename).
struct IoError : Error { using Error::Error; };

}  // namespace cxrharmon

#endif  // CXRHARMON_ERRORS_HPP_
