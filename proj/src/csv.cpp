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

#include "cxrharmon/csv.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

namespace cxrharmon {

namespace {

// State machine over the raw text; handles quoted fields, doubled quotes,
// bare CR/LF/CRLF record terminators.
std::vector<std::vector<std::string>> parse_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    record_has_content = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw CsvParseError("quote in the middle of an unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        record_has_content = true;
        break;
    }
  }
  if (in_quotes) throw CsvParseError("unterminated quoted field");
  if (record_has_content || !record.empty()) end_record();
  return records;
}

bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

void write_field(std::string& out, const std::string& field) {
  if (!needs_quoting(field)) {
    out += field;
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

CsvData parse_csv(std::string_view text) {
  auto records = parse_records(text);
  if (records.empty()) throw CsvParseError("CSV has no header row");
  CsvData data;
  data.header = std::move(records.front());
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != data.header.size()) {
      throw CsvParseError("CSV row " + std::to_string(r) + " has " +
                          std::to_string(records[r].size()) + " fields, header has " +
                          std::to_string(data.header.size()));
    }
    data.rows.push_back(std::move(records[r]));
  }
  return data;
}

CsvData read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_csv(buffer.str());
  } catch (const CsvParseError& e) {
    throw CsvParseError(path.string() + ": " + e.what());
  }
}

std::string write_csv(const CsvData& data) {
  std::string out;
  for (size_t c = 0; c < data.header.size(); ++c) {
    if (c > 0) out.push_back(',');
    write_field(out, data.header[c]);
  }
  out.push_back('\n');
  for (const auto& row : data.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out.push_back(',');
      write_field(out, row[c]);
    }
    out.push_back('\n');
  }
  return out;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  std::unordered_set<std::string> seen;
  for (const auto& name : columns_) {
    if (!seen.insert(name).second) {
      throw CsvParseError("duplicate column name: " + name);
    }
  }
}

Table Table::from_csv(const CsvData& data) {
  Table table(data.header);
  table.rows_ = data.rows;
  return table;
}

bool Table::has_column(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c == name) return true;
  }
  return false;
}

size_t Table::column_index(std::string_view name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw DomainError("table has no column named: " + std::string(name));
}

const std::string& Table::cell(size_t row, std::string_view column) const {
  if (row >= rows_.size()) throw IndexOutOfRange("table row out of range");
  return rows_[row][column_index(column)];
}

void Table::set_cell(size_t row, std::string_view column, std::string value) {
  if (row >= rows_.size()) throw IndexOutOfRange("table row out of range");
  rows_[row][column_index(column)] = std::move(value);
}

std::vector<std::string> Table::column(std::string_view name) const {
  const size_t idx = column_index(name);
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(row[idx]);
  return out;
}

void Table::append_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw DomainError("row width " + std::to_string(cells.size()) +
                      " does not match table width " + std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(cells));
}

void Table::set_column(const std::string& name, std::vector<std::string> cells) {
  if (columns_.empty() && rows_.empty()) {
    // First column of a table built column-wise defines the row count.
    columns_.push_back(name);
    rows_.resize(cells.size());
    for (size_t r = 0; r < cells.size(); ++r) rows_[r].push_back(std::move(cells[r]));
    return;
  }
  if (cells.size() != rows_.size()) {
    throw DomainError("column height " + std::to_string(cells.size()) +
                      " does not match table height " + std::to_string(rows_.size()));
  }
  if (has_column(name)) {
    const size_t idx = column_index(name);
    for (size_t r = 0; r < rows_.size(); ++r) rows_[r][idx] = std::move(cells[r]);
    return;
  }
  columns_.push_back(name);
  for (size_t r = 0; r < rows_.size(); ++r) rows_[r].push_back(std::move(cells[r]));
}

Table Table::select_rows(const std::vector<size_t>& indexes) const {
  Table out(columns_);
  out.rows_.reserve(indexes.size());
  for (size_t idx : indexes) {
    if (idx >= rows_.size()) throw IndexOutOfRange("table row out of range in selection");
    out.rows_.push_back(rows_[idx]);
  }
  return out;
}

std::map<std::string, std::string> Table::row_map(size_t row) const {
  if (row >= rows_.size()) throw IndexOutOfRange("table row out of range");
  std::map<std::string, std::string> out;
  for (size_t c = 0; c < columns_.size(); ++c) out[columns_[c]] = rows_[row][c];
  return out;
}

CsvData Table::to_csv() const {
  CsvData data;
  data.header = columns_;
  data.rows = rows_;
  return data;
}

}  // namespace cxrharmon
