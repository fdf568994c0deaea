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

#include "woi/corpus.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace woi {
namespace {

constexpr int kSampleRate = kDefaultSampleRate;

// Silence layout of a synthesized utterance, in milliseconds.
constexpr double kLeadMinMs = 200.0, kLeadMaxMs = 300.0;
constexpr double kGapMinMs = 100.0, kGapMaxMs = 400.0;
constexpr double kTrailMinMs = 300.0, kTrailMaxMs = 400.0;
constexpr double kF0MinHz = 95.0, kF0MaxHz = 135.0;

std::size_t ms_to_samples(double ms) {
  return static_cast<std::size_t>(std::llround(ms * kSampleRate / 1000.0));
}

std::string format_seconds(double s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.7f", s);
  return buf;
}

double parse_double(std::string_view text, int line_no) {
  double v = 0.0;
  const std::string_view t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ValidationError("manifest line " + std::to_string(line_no) +
                          ": bad number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void validate_record(const UtteranceRecord& r) {
  const std::string who = "utterance '" + r.utterance_id + "': ";
  if (r.utterance_id.empty()) throw ValidationError("record without utterance_id");
  if (r.keywords.empty() ||
      r.keywords.size() > static_cast<std::size_t>(kMaxKeywordsPerUtterance)) {
    throw ValidationError(who + "expected 1 to 3 keywords, got " +
                          std::to_string(r.keywords.size()));
  }
  for (std::size_t i = 0; i < r.keywords.size(); ++i) {
    const KeywordSpan& k = r.keywords[i];
    if (k.word.empty()) throw ValidationError(who + "empty keyword");
    if (!(k.start_s >= 0.0) || !(k.end_s > k.start_s)) {
      throw ValidationError(who + "keyword '" + k.word + "' has end <= start");
    }
    if (i > 0 && k.start_s < r.keywords[i - 1].end_s) {
      throw ValidationError(who + "keyword segments overlap or are out of order");
    }
  }
  (void)intent_name(r.intent);
}

KeywordMap default_keyword_map() {
  return {
      {Intent::kDoor, {"open", "door", "get", "unlock", "exit"}},
      {Intent::kPull, {"get", "pull", "out", "over", "side"}},
      {Intent::kStop, {"pause", "do", "move", "stop", "halt"}},
      {Intent::kSlow, {"slow", "turn", "slowing", "down", "easy"}},
      {Intent::kDest, {"plans", "get", "new", "turning", "way", "destination"}},
      {Intent::kPark, {"open", "door", "move", "park", "spot"}},
      {Intent::kRoute, {"get", "three", "make", "route", "detour"}},
      {Intent::kFast, {"break", "quickly", "maximum", "increase", "speed", "hurry"}},
      {Intent::kOther, {"trip", "quickly", "hold", "music", "weather"}},
  };
}

std::vector<std::string> vocabulary(const KeywordMap& map) {
  std::set<std::string> words;
  for (const auto& [_, list] : map) {
    for (const auto& w : list) words.insert(normalize_word(w));
  }
  return {words.begin(), words.end()};
}

CorpusManifest generate_corpus(const CorpusOptions& options,
                               const std::filesystem::path& out_dir,
                               const Lexicon& lexicon) {
  const auto& classes = options.classes;
  if (classes.empty()) throw ValidationError("generate_corpus: no classes");
  if (options.n_utterances < static_cast<int>(classes.size())) {
    throw ValidationError("generate_corpus: n_utterances (" +
                          std::to_string(options.n_utterances) +
                          ") must be at least the number of classes (" +
                          std::to_string(classes.size()) + ")");
  }
  for (Intent c : classes) {
    const auto it = options.keyword_map.find(c);
    if (it == options.keyword_map.end() || it->second.empty()) {
      throw ValidationError("generate_corpus: class '" + std::string(intent_name(c)) +
                            "' has no keywords");
    }
    for (const auto& w : it->second) {
      for (const auto& ph : lexicon.lookup(w)) (void)voice_profile(ph);
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "audio", ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir.string() + ": " +
                  ec.message());
  }

  // Balanced labels: cycle through the classes, then shuffle the order.
  Rng layout_rng(derive_seed(options.seed, "corpus/layout"));
  std::vector<Intent> labels;
  labels.reserve(static_cast<std::size_t>(options.n_utterances));
  for (int i = 0; i < options.n_utterances; ++i) {
    labels.push_back(classes[static_cast<std::size_t>(i) % classes.size()]);
  }
  layout_rng.shuffle(labels);

  CorpusManifest manifest;
  manifest.root = out_dir;
  manifest.manifest_path = out_dir / "manifest.tsv";
  for (int i = 0; i < options.n_utterances; ++i) {
    Rng rng(derive_seed(options.seed, "corpus/utt/" + std::to_string(i)));
    const Intent intent = labels[static_cast<std::size_t>(i)];
    const auto& pool = options.keyword_map.at(intent);

    const std::size_t max_kw =
        std::min<std::size_t>(kMaxKeywordsPerUtterance, pool.size());
    const std::size_t n_kw = 1 + rng.index(max_kw);
    std::vector<std::size_t> pick = rng.permutation(pool.size());
    pick.resize(n_kw);

    const double f0 = rng.uniform(kF0MinHz, kF0MaxHz);
    std::vector<RenderedKeyword> rendered;
    std::vector<std::size_t> gaps;
    gaps.push_back(ms_to_samples(rng.uniform(kLeadMinMs, kLeadMaxMs)));
    for (std::size_t k = 0; k < n_kw; ++k) {
      rendered.push_back(render_keyword(lexicon.lookup(pool[pick[k]]), f0, rng));
      const bool last = k + 1 == n_kw;
      gaps.push_back(ms_to_samples(last ? rng.uniform(kTrailMinMs, kTrailMaxMs)
                                        : rng.uniform(kGapMinMs, kGapMaxMs)));
    }
    std::size_t total = 0;
    for (std::size_t k = 0; k < n_kw; ++k) total += gaps[k] + rendered[k].samples.size();
    total += gaps.back();

    UtteranceRecord rec;
    char id[32];
    std::snprintf(id, sizeof(id), "utt%05d", i);
    rec.utterance_id = id;
    rec.audio_path = "audio/" + rec.utterance_id + ".wav";
    rec.intent = intent;
    rec.domain_tag = options.domain_tag;

    std::vector<double> mix(total);
    for (double& s : mix) s = rng.normal() * kBackgroundNoiseStd;
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < n_kw; ++k) {
      cursor += gaps[k];
      const auto& kw = rendered[k].samples;
      for (std::size_t n = 0; n < kw.size(); ++n) mix[cursor + n] += kw[n];
      rec.keywords.push_back({normalize_word(pool[pick[k]]),
                              static_cast<double>(cursor) / kSampleRate,
                              static_cast<double>(cursor + kw.size()) / kSampleRate});
      cursor += kw.size();
    }

    AudioBuffer audio;
    audio.samples.resize(total);
    for (std::size_t n = 0; n < total; ++n) {
      const double v = std::clamp(std::round(mix[n] * 32768.0), -32768.0, 32767.0);
      audio.samples[n] = static_cast<float>(v / 32768.0);
    }
    validate_record(rec);
    write_wav(out_dir / rec.audio_path, audio);
    manifest.records.push_back(std::move(rec));
  }
  write_manifest(manifest.manifest_path, manifest.records);
  return manifest;
}

void write_manifest(std::ostream& out, const std::vector<UtteranceRecord>& records) {
  out << "# utterance_id\taudio_path\tintent\tdomain\tword,start_s,end_s ...\n";
  for (const auto& r : records) {
    out << r.utterance_id << '\t' << r.audio_path << '\t' << intent_name(r.intent) << '\t'
        << r.domain_tag;
    for (const auto& k : r.keywords) {
      out << '\t' << k.word << ',' << format_seconds(k.start_s) << ','
          << format_seconds(k.end_s);
    }
    out << '\n';
  }
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<UtteranceRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  write_manifest(out, records);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<UtteranceRecord> parse_manifest(std::istream& in) {
  std::vector<UtteranceRecord> records;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    const std::string where = "manifest line " + std::to_string(line_no) + ": ";
    if (fields.size() < 5) {
      throw ValidationError(where + "expected id, audio path, intent, domain and " +
                            "at least one keyword triple");
    }
    UtteranceRecord rec;
    rec.utterance_id = std::string(trim(fields[0]));
    rec.audio_path = std::string(trim(fields[1]));
    try {
      rec.intent = parse_intent(fields[2]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    rec.domain_tag = std::string(trim(fields[3]));
    for (std::size_t i = 4; i < fields.size(); ++i) {
      const auto parts = split(fields[i], ',');
      if (parts.size() != 3) {
        throw ValidationError(where + "keyword field '" + fields[i] +
                              "' is not word,start_s,end_s");
      }
      rec.keywords.push_back({normalize_word(parts[0]), parse_double(parts[1], line_no),
                              parse_double(parts[2], line_no)});
    }
    try {
      validate_record(rec);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    if (!seen.insert(rec.utterance_id).second) {
      throw ValidationError(where + "duplicate utterance id '" + rec.utterance_id + "'");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<UtteranceRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  return parse_manifest(in);
}

Corpus Corpus::open(const std::filesystem::path& dir_or_manifest) {
  Corpus c;
  std::filesystem::path manifest = dir_or_manifest;
  if (std::filesystem::is_directory(manifest)) manifest /= "manifest.tsv";
  c.root_ = manifest.parent_path();
  c.records_ = load_manifest(manifest);
  return c;
}

AudioBuffer Corpus::load_audio(const UtteranceRecord& record) const {
  return read_wav(root_ / record.audio_path);
}

std::vector<Fold> stratified_kfold(const std::vector<UtteranceRecord>& records, int k,
                                   std::uint64_t seed) {
  if (k < 2) throw ValidationError("stratified_kfold: k must be at least 2");
  std::map<Intent, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < records.size(); ++i) by_class[records[i].intent].push_back(i);
  for (const auto& [c, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(k)) {
      throw ValidationError("stratified_kfold: class '" + std::string(intent_name(c)) +
                            "' has " + std::to_string(members.size()) +
                            " members, fewer than k=" + std::to_string(k));
    }
  }

  Rng rng(derive_seed(seed, "kfold"));
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  std::size_t offset = 0;
  for (auto& [c, members] : by_class) {
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) {
      folds[(offset + j) % static_cast<std::size_t>(k)].test.push_back(members[j]);
    }
    offset += members.size();
  }
  for (auto& fold : folds) {
    std::sort(fold.test.begin(), fold.test.end());
    std::vector<bool> in_test(records.size(), false);
    for (std::size_t i : fold.test) in_test[i] = true;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!in_test[i]) fold.train.push_back(i);
    }
  }
  return folds;
}

}  // namespace woi
