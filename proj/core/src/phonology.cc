// Copyright 2026 The WOI Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "woi/phonology.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include "woi/bundled_data.h"

namespace woi {

std::string normalize_word(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '\'') {
      out.push_back(static_cast<char>(std::tolower(u)));
    }
  }
  return out;
}

std::string base_phoneme(std::string_view symbol) {
  std::string out(symbol);
  while (!out.empty() && std::isdigit(static_cast<unsigned char>(out.back()))) {
    out.pop_back();
  }
  return out;
}

Lexicon Lexicon::parse(std::istream& in) {
  Lexicon lex;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.starts_with(";;;")) continue;
    auto fields = split_ws(view);
    if (fields.size() < 2) {
      throw ValidationError("lexicon line " + std::to_string(line_no) +
                            ": expected a word followed by phonemes");
    }
    if (fields[0].find('(') != std::string::npos) continue;  // alternate
    const std::string word = normalize_word(fields[0]);
    if (lex.contains(word)) continue;
    lex.add(word, PhonemeList(fields.begin() + 1, fields.end()));
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon: " + path.string());
  return parse(in);
}

void Lexicon::add(std::string_view word, PhonemeList phones) {
  const std::string key = normalize_word(word);
  if (key.empty()) throw ValidationError("lexicon word is empty after normalization");
  if (phones.empty()) throw ValidationError("lexicon entry without phonemes: " + key);
  entries_[key] = std::move(phones);
}

bool Lexicon::contains(std::string_view word) const {
  return entries_.contains(normalize_word(word));
}

const PhonemeList& Lexicon::lookup(std::string_view word) const {
  const auto it = entries_.find(normalize_word(word));
  if (it == entries_.end()) throw OovError(std::string(word));
  return it->second;
}

DistinctiveFeatureTable DistinctiveFeatureTable::parse(std::istream& in) {
  DistinctiveFeatureTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.starts_with('#')) continue;
    auto fields = split_ws(view);
    if (!have_header) {
      if (fields.size() < 2) {
        throw ValidationError("feature table header needs at least one feature");
      }
      table.feature_names_.assign(fields.begin() + 1, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != table.feature_names_.size() + 1) {
      throw ValidationError("feature table line " + std::to_string(line_no) +
                            ": expected " +
                            std::to_string(table.feature_names_.size()) + " values");
    }
    std::vector<std::uint8_t> row;
    row.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] != "0" && fields[i] != "1") {
        throw ValidationError("feature table line " + std::to_string(line_no) +
                              ": entries must be 0 or 1");
      }
      row.push_back(fields[i] == "1" ? 1 : 0);
    }
    table.rows_[base_phoneme(fields[0])] = std::move(row);
  }
  if (!have_header) throw ValidationError("feature table is empty");
  return table;
}

DistinctiveFeatureTable DistinctiveFeatureTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature table: " + path.string());
  return parse(in);
}

int DistinctiveFeatureTable::feature_index(std::string_view name) const {
  for (std::size_t i = 0; i < feature_names_.size(); ++i) {
    if (feature_names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

bool DistinctiveFeatureTable::contains(std::string_view phoneme) const {
  return rows_.contains(base_phoneme(phoneme));
}

const std::vector<std::uint8_t>& DistinctiveFeatureTable::features(
    std::string_view phoneme) const {
  const auto it = rows_.find(base_phoneme(phoneme));
  if (it == rows_.end()) {
    throw ValidationError("unknown phoneme: '" + std::string(phoneme) + "'");
  }
  return it->second;
}

std::vector<std::string> DistinctiveFeatureTable::phonemes() const {
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& [p, _] : rows_) out.push_back(p);
  return out;
}

PhonemeList to_phones(std::string_view word, const Lexicon& lexicon) {
  if (normalize_word(word).empty()) throw ValidationError("to_phones: empty word");
  return lexicon.lookup(word);
}

FeatureSequence phone_features(const PhonemeList& phones,
                               const DistinctiveFeatureTable& table) {
  if (phones.empty()) throw ValidationError("phone_features: empty phoneme sequence");
  FeatureSequence seq;
  seq.kind = StreamKind::kPhone;
  seq.frames.resize(static_cast<Eigen::Index>(phones.size()), table.num_features());
  for (std::size_t t = 0; t < phones.size(); ++t) {
    const auto& row = table.features(phones[t]);
    for (std::size_t f = 0; f < row.size(); ++f) {
      seq.frames(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f)) = row[f];
    }
  }
  return seq;
}

std::vector<std::string> to_triphones(const PhonemeList& phones) {
  if (phones.empty()) throw ValidationError("to_triphones: empty phoneme sequence");
  std::vector<std::string> out;
  out.reserve(phones.size());
  for (std::size_t i = 0; i < phones.size(); ++i) {
    const std::string& left = i == 0 ? std::string("eps") : phones[i - 1];
    const std::string& right = i + 1 == phones.size() ? std::string("eps") : phones[i + 1];
    out.push_back(left + "/" + phones[i] + "/" + right);
  }
  return out;
}

const Lexicon& bundled_lexicon() {
  static const Lexicon lex = [] {
    std::istringstream in{std::string(bundled::lexicon_text())};
    return Lexicon::parse(in);
  }();
  return lex;
}

const DistinctiveFeatureTable& bundled_feature_table() {
  static const DistinctiveFeatureTable table = [] {
    std::istringstream in{std::string(bundled::feature_table_text())};
    return DistinctiveFeatureTable::parse(in);
  }();
  return table;
}

}  // namespace woi
