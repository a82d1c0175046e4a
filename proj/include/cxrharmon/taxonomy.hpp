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

#ifndef CXRHARMON_TAXONOMY_HPP_
#define CXRHARMON_TAXONOMY_HPP_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cxrharmon/errors.hpp"

namespace cxrharmon {

// A pathology label under its canonical spelling ("Pleural Thickening").
// Source files spell these many ways ("Pleural_Thickening", " effusion ");
// normalize_name() reconciles them. Two Pathology values are equal iff their
// canonical names are equal.
class Pathology {
 public:
  // Wraps a name that is already canonical (taxonomy literals, manifest
  // columns we wrote ourselves). Throws EmptyName on empty input.
  static Pathology canonical(std::string name);

  // Normalizes a raw spelling; see normalize_name().
  static Pathology from_raw(std::string_view raw);

  const std::string& name() const { return name_; }

  bool operator==(const Pathology&) const = default;
  auto operator<=>(const Pathology&) const = default;

 private:
  explicit Pathology(std::string name) : name_(std::move(name)) {}

  std::string name_;
};

// Canonicalizes a raw pathology spelling: trims, collapses runs of
// whitespace/underscores into single spaces, title-cases each word (letters
// after '/' and '-' are also capitalized), and keeps whitelisted acronyms
// (ILD) fully uppercase. Idempotent. Throws EmptyName if nothing remains
// after trimming.
Pathology normalize_name(std::string_view raw);

// Ordered pathology list with no duplicate canonical names. Order is
// significant: it defines the label-matrix column order everywhere.
class Taxonomy {
 public:
  Taxonomy() = default;

  // Throws DuplicatePathology when two entries share a canonical name.
  explicit Taxonomy(std::vector<Pathology> items);

  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Pathology& at(size_t i) const { return items_.at(i); }
  const std::vector<Pathology>& items() const { return items_; }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool contains(std::string_view canonical_name) const;
  std::optional<size_t> index_of(std::string_view canonical_name) const;

  bool operator==(const Taxonomy&) const = default;

  // JSON array of canonical name strings.
  nlohmann::json to_json() const;
  static Taxonomy from_json(const nlohmann::json& array);

 private:
  std::vector<Pathology> items_;
};

// The fixed 18-entry default taxonomy. Overridable everywhere a taxonomy is
// accepted; this is just the out-of-the-box column order.
const Taxonomy& default_taxonomy();

}  // namespace cxrharmon

#endif  // CXRHARMON_TAXONOMY_HPP_
