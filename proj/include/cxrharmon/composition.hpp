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

#ifndef CXRHARMON_COMPOSITION_HPP_
#define CXRHARMON_COMPOSITION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "cxrharmon/dataset.hpp"

namespace cxrharmon {

// Dataset algebra. Every function returns a new immutable Dataset; inputs are
// never mutated. The row-alignment invariant (csv row i <-> labels row i <->
// sample i) is preserved by construction throughout.

// Reorders label columns to `target`. Columns the dataset lacks are inserted
// as all-Unknown; columns not in target are dropped and appended to *dropped
// when given. The metadata table is unchanged. Throws DuplicateTarget when
// the list repeats a canonical name.
Dataset relabel(const Dataset& ds, const std::vector<Pathology>& target,
                std::vector<std::string>* dropped = nullptr);
Dataset relabel(const Dataset& ds, const Taxonomy& target,
                std::vector<std::string>* dropped = nullptr);

// Row-concatenates the children in order. All children must share an
// identical pathology list (PathologyMismatch; relabel first). Metadata
// columns are aligned by name, cells missing from a child fill with the empty
// marker; source_name/source_index columns record provenance for rows whose
// child does not already carry those columns.
Dataset merge(const std::vector<Dataset>& children);

// The rows at `indexes`, in that order; duplicates permitted.
Dataset subset(const Dataset& ds, const std::vector<size_t>& indexes);

// Rows whose canonical view is in `views`. Requires a view column
// (NoViewColumn).
Dataset filter_views(const Dataset& ds, const std::vector<std::string>& views);

// First occurrence (lowest index) of each patientid, original order
// otherwise. Requires a patientid column (NoPatientIdColumn).
Dataset unique_patients(const Dataset& ds);

// Evaluates a "column op value" predicate (ops: == != < <= > >=) over the
// metadata table and returns the matching row indexes in order. Relational
// ops compare numerically when both sides parse as numbers, lexicographically
// otherwise.
std::vector<size_t> where_indexes(const Dataset& ds, std::string_view predicate);

// Parses a newline-delimited index file (blank lines ignored).
std::vector<size_t> read_index_file(const std::filesystem::path& path);

}  // namespace cxrharmon

#endif  // CXRHARMON_COMPOSITION_HPP_
