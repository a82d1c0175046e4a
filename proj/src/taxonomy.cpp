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

#include "cxrharmon/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace cxrharmon {

namespace {

// Words kept fully uppercase instead of title-cased.
const std::unordered_set<std::string>& acronym_whitelist() {
  static const std::unordered_set<std::string> kAcronyms = {"ILD"};
  return kAcronyms;
}

bool is_separator(char c) {
  return c == '_' || std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string to_upper(std::string_view word) {
  std::string out(word);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::string title_case_word(std::string_view word) {
  const std::string upper = to_upper(word);
  if (acronym_whitelist().count(upper) > 0) return upper;
  std::string out;
  out.reserve(word.size());
  bool capitalize_next = true;
  for (char c : word) {
    const auto uc = static_cast<unsigned char>(c);
    if (capitalize_next) {
      out.push_back(static_cast<char>(std::toupper(uc)));
    } else {
      out.push_back(static_cast<char>(std::tolower(uc)));
    }
    // '/' and '-' start a new sub-word ("Nodule/Mass").
    capitalize_next = (c == '/' || c == '-');
  }
  return out;
}

}  // namespace

Pathology Pathology::canonical(std::string name) {
  if (name.empty()) throw EmptyName("pathology name must be non-empty");
  return Pathology(std::move(name));
}

Pathology Pathology::from_raw(std::string_view raw) { return normalize_name(raw); }

Pathology normalize_name(std::string_view raw) {
  std::vector<std::string> words;
  std::string current;
  for (char c : raw) {
    if (is_separator(c)) {
      if (!current.empty()) {
        words.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(current);
  if (words.empty()) throw EmptyName("pathology name is empty after trimming");

  std::string canonical;
  for (const auto& word : words) {
    if (!canonical.empty()) canonical.push_back(' ');
    canonical += title_case_word(word);
  }
  return Pathology::canonical(std::move(canonical));
}

Taxonomy::Taxonomy(std::vector<Pathology> items) : items_(std::move(items)) {
  std::unordered_set<std::string> seen;
  for (const auto& item : items_) {
    if (!seen.insert(item.name()).second) {
      throw DuplicatePathology("duplicate pathology in taxonomy: " + item.name());
    }
  }
}

bool Taxonomy::contains(std::string_view canonical_name) const {
  return index_of(canonical_name).has_value();
}

std::optional<size_t> Taxonomy::index_of(std::string_view canonical_name) const {
  for (size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].name() == canonical_name) return i;
  }
  return std::nullopt;
}

nlohmann::json Taxonomy::to_json() const {
  nlohmann::json array = nlohmann::json::array();
  for (const auto& item : items_) array.push_back(item.name());
  return array;
}

Taxonomy Taxonomy::from_json(const nlohmann::json& array) {
  if (!array.is_array()) throw FormatError("taxonomy JSON must be an array of strings");
  std::vector<Pathology> items;
  items.reserve(array.size());
  for (const auto& entry : array) {
    if (!entry.is_string()) throw FormatError("taxonomy JSON must be an array of strings");
    items.push_back(Pathology::canonical(entry.get<std::string>()));
  }
  return Taxonomy(std::move(items));
}

const Taxonomy& default_taxonomy() {
  static const Taxonomy kDefault = [] {
    const char* names[] = {
        "Atelectasis",
        "Consolidation",
        "Infiltration",
        "Pneumothorax",
        "Edema",
        "Emphysema",
        "Fibrosis",
        "Effusion",
        "Pneumonia",
        "Pleural Thickening",
        "Cardiomegaly",
        "Nodule",
        "Mass",
        "Hernia",
        "Lung Lesion",
        "Fracture",
        "Lung Opacity",
        "Enlarged Cardiomediastinum",
    };
    std::vector<Pathology> items;
    for (const char* name : names) items.push_back(Pathology::canonical(name));
    return Taxonomy(std::move(items));
  }();
  return kDefault;
}

}  // namespace cxrharmon
