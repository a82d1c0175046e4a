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

#ifndef CXRHARMON_CSV_HPP_
#define CXRHARMON_CSV_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cxrharmon/errors.hpp"

namespace cxrharmon {

// RFC 4180 comma-separated values: quoted fields may contain commas, CRLF and
// doubled quotes. First record is the header. Every record must have the same
// field count as the header.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvData parse_csv(std::string_view text);
CsvData read_csv_file(const std::filesystem::path& path);
std::string write_csv(const CsvData& data);

// Named-column string table backing dataset metadata. Column names are
// unique; absent values are empty cells. Cheap to copy at fixture scale;
// treat instances stored inside a Dataset as immutable.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns);
  static Table from_csv(const CsvData& data);

  size_t num_rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  bool has_column(std::string_view name) const;

  const std::string& cell(size_t row, std::string_view column) const;
  void set_cell(size_t row, std::string_view column, std::string value);

  // Whole column, one entry per row.
  std::vector<std::string> column(std::string_view name) const;

  void append_row(std::vector<std::string> cells);

  // Adds a column (or replaces an existing one of the same name).
  void set_column(const std::string& name, std::vector<std::string> cells);

  // New table with the given rows, in the given order; duplicates allowed.
  Table select_rows(const std::vector<size_t>& indexes) const;

  std::map<std::string, std::string> row_map(size_t row) const;

  CsvData to_csv() const;

 private:
  size_t column_index(std::string_view name) const;

  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cxrharmon

#endif  // CXRHARMON_CSV_HPP_
