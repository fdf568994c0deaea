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

// Dataset model and the deterministic synthetic keyword corpus.
//
// Each utterance holds one to three keywords drawn from its intent's keyword
// list. Keywords are rendered by a small source-filter synthesizer (one
// band-noise/pulse template per phoneme) and separated by silence with a
// low background noise floor, so exact keyword timestamps are known.
//
// Manifest (UTF-8, one record per line, tab separated):
//
//   utterance_id <TAB> audio_path <TAB> intent <TAB> domain
//       <TAB> word,start_s,end_s [<TAB> word,start_s,end_s ...]
//
// Lines starting with '#' and blank lines are ignored. Times are written with
// seven decimals, which represents any 16 kHz sample boundary exactly.

#ifndef WOI_CORPUS_H_
#define WOI_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "woi/audio.h"
#include "woi/common.h"
#include "woi/phonology.h"

namespace woi {

inline constexpr int kMaxKeywordsPerUtterance = 3;

struct KeywordSpan {
  std::string word;
  double start_s = 0.0;
  double end_s = 0.0;

  friend bool operator==(const KeywordSpan&, const KeywordSpan&) = default;
};

struct UtteranceRecord {
  std::string utterance_id;
  std::string audio_path;  // relative to the manifest directory
  std::vector<KeywordSpan> keywords;
  Intent intent = Intent::kOther;
  std::string domain_tag;

  friend bool operator==(const UtteranceRecord&, const UtteranceRecord&) = default;
};

// Throws ValidationError naming the utterance: 1..3 keywords, end > start,
// segments non-overlapping and strictly increasing.
void validate_record(const UtteranceRecord& record);

using KeywordMap = std::map<Intent, std::vector<std::string>>;

// Per-class vocabulary: the sample keywords of each class plus a few
// in-domain extras. Several words are shared between classes.
KeywordMap default_keyword_map();

// Union of all keywords in the map, sorted.
std::vector<std::string> vocabulary(const KeywordMap& map);

struct PhonemeVoiceProfile {
  std::string phoneme;  // base ARPABET symbol
  std::array<double, 3> band_centers_hz{};
  std::array<double, 3> band_widths_hz{};
  double noise_fraction = 0.0;  // 0 = pulse excitation, 1 = pure noise
  double nominal_duration_ms = 80.0;
  double rms_level = 0.05;
};

// Throws ValidationError for phonemes without a profile.
const PhonemeVoiceProfile& voice_profile(std::string_view phoneme);
std::vector<PhonemeVoiceProfile> all_voice_profiles();

inline constexpr double kBackgroundNoiseStd = 0.002;

struct SynthesisJitter {
  double duration_rel = 0.10;
  double band_center_rel = 0.03;
};

struct RenderedKeyword {
  std::vector<double> samples;
  std::vector<double> phone_durations_ms;  // after jitter
};

// Renders one keyword at 16 kHz; consumes draws from `rng`.
RenderedKeyword render_keyword(const PhonemeList& phones, double f0_hz, Rng& rng,
                               const SynthesisJitter& jitter = {});

// Low-level Gaussian background noise, quantized like stored audio.
AudioBuffer background_noise(std::size_t num_samples, std::uint64_t seed);

struct CorpusOptions {
  std::uint64_t seed = 0;
  int n_utterances = 0;
  std::vector<Intent> classes = all_intents();
  KeywordMap keyword_map = default_keyword_map();
  std::string domain_tag = "car";
};

struct CorpusManifest {
  std::filesystem::path root;           // directory holding manifest + audio
  std::filesystem::path manifest_path;  // root / "manifest.tsv"
  std::vector<UtteranceRecord> records;
};

// Writes audio/<id>.wav and manifest.tsv under out_dir. Class counts are
// within one of n / |classes|. Identical inputs give identical bytes.
// Throws OovError for keywords missing from the lexicon, ValidationError for
// bad counts, IoError if out_dir cannot be written.
CorpusManifest generate_corpus(const CorpusOptions& options,
                               const std::filesystem::path& out_dir,
                               const Lexicon& lexicon = bundled_lexicon());

void write_manifest(std::ostream& out, const std::vector<UtteranceRecord>& records);
void write_manifest(const std::filesystem::path& path,
                    const std::vector<UtteranceRecord>& records);
// Validates every record; errors carry line numbers or utterance ids.
std::vector<UtteranceRecord> parse_manifest(std::istream& in);
std::vector<UtteranceRecord> load_manifest(const std::filesystem::path& path);

// Loads a manifest and remembers its directory for audio lookup.
class Corpus {
 public:
  static Corpus open(const std::filesystem::path& dir_or_manifest);

  const std::vector<UtteranceRecord>& records() const { return records_; }
  const std::filesystem::path& root() const { return root_; }
  AudioBuffer load_audio(const UtteranceRecord& record) const;

 private:
  std::filesystem::path root_;
  std::vector<UtteranceRecord> records_;
};

struct Fold {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Stratified by intent: each class is shuffled (seeded) and dealt round-robin
// over the folds. Throws ValidationError when k < 2 or a class has < k members.
std::vector<Fold> stratified_kfold(const std::vector<UtteranceRecord>& records, int k,
                                   std::uint64_t seed);

}  // namespace woi

#endif  // WOI_CORPUS_H_
