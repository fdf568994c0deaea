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

// Pronunciation lexicon (CMU dictionary text format) and the binary
// distinctive-feature table used to build the phone stream.

#ifndef WOI_PHONOLOGY_H_
#define WOI_PHONOLOGY_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "woi/dsp.h"

namespace woi {

using PhonemeList = std::vector<std::string>;

// Lowercases and strips everything except letters, digits and apostrophes.
std::string normalize_word(std::string_view word);

// ARPABET symbol without its stress digit ("EH1" -> "EH").
std::string base_phoneme(std::string_view symbol);

class Lexicon {
 public:
  Lexicon() = default;

  // Lines are `WORD  PH1 PH2 ...`; `;;;` comments and blank lines are skipped.
  // Alternate pronunciations (`WORD(2)`) are ignored; the first one wins.
  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::filesystem::path& path);

  void add(std::string_view word, PhonemeList phones);
  bool contains(std::string_view word) const;
  // Throws OovError.
  const PhonemeList& lookup(std::string_view word) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, PhonemeList>& entries() const { return entries_; }

 private:
  std::map<std::string, PhonemeList> entries_;
};

class DistinctiveFeatureTable {
 public:
  DistinctiveFeatureTable() = default;

  // Header row of feature names (first column label ignored), then one row
  // per base phoneme with 0/1 entries. Whitespace separated.
  static DistinctiveFeatureTable parse(std::istream& in);
  static DistinctiveFeatureTable load(const std::filesystem::path& path);

  int num_features() const { return static_cast<int>(feature_names_.size()); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  int feature_index(std::string_view name) const;  // -1 if absent

  bool contains(std::string_view phoneme) const;
  // Looks up the base phoneme; throws ValidationError naming unknown symbols.
  const std::vector<std::uint8_t>& features(std::string_view phoneme) const;
  std::vector<std::string> phonemes() const;

 private:
  std::vector<std::string> feature_names_;
  std::map<std::string, std::vector<std::uint8_t>> rows_;
};

// Lookup after normalization. Throws OovError naming the word.
PhonemeList to_phones(std::string_view word, const Lexicon& lexicon);

// T = |phones| rows of F features. Empty input or unknown phonemes throw.
FeatureSequence phone_features(const PhonemeList& phones,
                               const DistinctiveFeatureTable& table);

// Context-dependent expansion with `eps` padding: one triphone per phone,
// written left/center/right.
std::vector<std::string> to_triphones(const PhonemeList& phones);

// Data bundled with the library.
const Lexicon& bundled_lexicon();
const DistinctiveFeatureTable& bundled_feature_table();

}  // namespace woi

#endif  // WOI_PHONOLOGY_H_
