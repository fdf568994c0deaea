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

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "support/fixtures.h"
#include "woi/corpus.h"
#include "woi/dsp.h"

namespace woi {
namespace {

using testing::fixture_corpus;

TEST(CorpusTest, BalancedClasses) {
  const auto& records = fixture_corpus().records();
  ASSERT_EQ(records.size(), 90u);
  std::map<Intent, int> counts;
  for (const auto& r : records) ++counts[r.intent];
  ASSERT_EQ(counts.size(), 9u);
  for (const auto& [intent, n] : counts) EXPECT_EQ(n, 10) << intent_name(intent);
}

TEST(CorpusTest, KeywordLayout) {
  const auto map = default_keyword_map();
  for (const auto& r : fixture_corpus().records()) {
    ASSERT_GE(r.keywords.size(), 1u);
    ASSERT_LE(r.keywords.size(), 3u);
    const auto& pool = map.at(r.intent);
    EXPECT_GE(r.keywords.front().start_s, 0.2 - 1e-9);
    for (std::size_t k = 0; k < r.keywords.size(); ++k) {
      const auto& kw = r.keywords[k];
      EXPECT_GT(kw.end_s, kw.start_s);
      EXPECT_NE(std::find(pool.begin(), pool.end(), kw.word), pool.end()) << kw.word;
      if (k > 0) {
        const double gap = kw.start_s - r.keywords[k - 1].end_s;
        EXPECT_GE(gap, 0.1 - 1e-6);
        EXPECT_LE(gap, 0.4 + 1e-6);
      }
    }
    const AudioBuffer audio = fixture_corpus().load_audio(r);
    EXPECT_GE(audio.duration_s() - r.keywords.back().end_s, 0.3 - 1e-6);
  }
}

TEST(CorpusTest, SameSeedSameBytes) {
  testing::TempDir a("gen-a");
  testing::TempDir b("gen-b");
  CorpusOptions opts;
  opts.seed = 7;
  opts.n_utterances = 18;
  const CorpusManifest ma = generate_corpus(opts, a.path());
  generate_corpus(opts, b.path());
  EXPECT_EQ(testing::read_file(a / "manifest.tsv"), testing::read_file(b / "manifest.tsv"));
  for (const auto& r : ma.records) {
    EXPECT_EQ(testing::read_file(a / r.audio_path), testing::read_file(b / r.audio_path));
  }
  testing::TempDir c("gen-c");
  opts.seed = 8;
  generate_corpus(opts, c.path());
  EXPECT_NE(testing::read_file(a / "manifest.tsv"), testing::read_file(c / "manifest.tsv"));
}

TEST(CorpusTest, ManifestRoundTrip) {
  const Corpus& corpus = fixture_corpus();
  const auto loaded = load_manifest(corpus.root() / "manifest.tsv");
  EXPECT_EQ(loaded, corpus.records());
  std::ostringstream out;
  write_manifest(out, loaded);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_manifest(in), loaded);
}

TEST(CorpusTest, GenerationErrors) {
  testing::TempDir dir("gen-err");
  CorpusOptions opts;
  opts.seed = 1;
  opts.n_utterances = 3;
  EXPECT_THROW(generate_corpus(opts, dir.path()), ValidationError);
  opts.n_utterances = 9;
  opts.keyword_map[Intent::kDoor] = {"zzzq"};
  try {
    generate_corpus(opts, dir.path());
    FAIL() << "expected OovError";
  } catch (const OovError& e) {
    EXPECT_EQ(e.word(), "zzzq");
  }
  opts.keyword_map = default_keyword_map();
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(generate_corpus(opts, dir / "file" / "sub"), IoError);
}

std::string manifest_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_manifest(in);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(ManifestTest, RejectsBadRecords) {
  const std::string head = "# header\n";
  const std::string ok = "u1\ta.wav\tdoor\tcar\topen,0.2,0.5\n";
  EXPECT_EQ(manifest_error(head + ok), "");
  EXPECT_NE(manifest_error(head + "u2\tb.wav\tdoor\tcar\topen,0.5,0.2\n").find("u2"),
            std::string::npos);
  const std::string four =
      "u3\tc.wav\tstop\tcar\tstop,0.1,0.2\thalt,0.3,0.4\tdo,0.5,0.6\tmove,0.7,0.8\n";
  EXPECT_NE(manifest_error(head + four).find("1 to 3"), std::string::npos);
  const std::string overlap = "u4\td.wav\tstop\tcar\tstop,0.1,0.5\thalt,0.4,0.6\n";
  EXPECT_NE(manifest_error(overlap).find("u4"), std::string::npos);
  EXPECT_NE(manifest_error(head + ok + "u5\te.wav\tdoor\tcar\topen,abc,0.5\n").find("line 3"),
            std::string::npos);
  EXPECT_NE(manifest_error(ok + ok).find("duplicate"), std::string::npos);
  EXPECT_NE(manifest_error("u6\tf.wav\twarp\tcar\topen,0.2,0.5\n"), "");
}

std::vector<UtteranceRecord> synthetic_records(int per_class, int classes) {
  std::vector<UtteranceRecord> out;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      UtteranceRecord r;
      r.utterance_id = std::to_string(c) + "-" + std::to_string(i);
      r.intent = static_cast<Intent>(c);
      r.keywords = {{"open", 0.1, 0.2}};
      out.push_back(r);
    }
  }
  return out;
}

TEST(KFoldTest, PartitionsAndStratifies) {
  const auto records = synthetic_records(10, 9);
  const auto folds = stratified_kfold(records, 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    EXPECT_EQ(f.test.size() + f.train.size(), records.size());
    std::map<Intent, int> per_class;
    for (std::size_t i : f.test) {
      EXPECT_TRUE(seen.insert(i).second);
      ++per_class[records[i].intent];
    }
    for (const auto& [c, n] : per_class) EXPECT_EQ(n, 2);
    EXPECT_TRUE(std::is_sorted(f.test.begin(), f.test.end()));
    std::set<std::size_t> train(f.train.begin(), f.train.end());
    for (std::size_t i : f.test) EXPECT_FALSE(train.count(i));
  }
  EXPECT_EQ(seen.size(), records.size());
  const auto again = stratified_kfold(records, 5, 3);
  for (std::size_t f = 0; f < folds.size(); ++f) EXPECT_EQ(folds[f].test, again[f].test);
}

TEST(KFoldTest, UnevenClassesDifferByAtMostOne) {
  const auto records = synthetic_records(20, 5);  // 100 records
  const auto folds = stratified_kfold(records, 5, 0);
  for (const auto& f : folds) EXPECT_EQ(f.test.size(), 20u);
  auto odd = synthetic_records(7, 3);
  const auto folds3 = stratified_kfold(odd, 3, 1);
  for (int c = 0; c < 3; ++c) {
    std::vector<int> sizes;
    for (const auto& f : folds3) {
      sizes.push_back(static_cast<int>(std::count_if(f.test.begin(), f.test.end(), [&](std::size_t i) {
        return static_cast<int>(odd[i].intent) == c;
      })));
    }
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) -
                  *std::min_element(sizes.begin(), sizes.end()),
              1);
  }
}

TEST(KFoldTest, TooFewMembersNamesClass) {
  auto records = synthetic_records(5, 2);
  records.pop_back();  // class 1 ("pull") now has 4
  try {
    stratified_kfold(records, 5, 0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("pull"), std::string::npos);
  }
  EXPECT_THROW(stratified_kfold(records, 1, 0), ValidationError);
}

TEST(SynthTest, DurationIsSumOfPhoneDurations) {
  Rng rng(31);
  for (const auto& w : {"increase", "speed", "destination", "park"}) {
    const auto r = render_keyword(bundled_lexicon().lookup(w), 110.0, rng);
    double ms = 0.0;
    for (double d : r.phone_durations_ms) ms += d;
    EXPECT_NEAR(static_cast<double>(r.samples.size()), ms * 16.0, 1.0) << w;
  }
}

TEST(SynthTest, VoiceProfilesAreSane) {
  for (const auto& p : all_voice_profiles()) {
    for (double c : p.band_centers_hz) EXPECT_LT(c, 8000.0) << p.phoneme;
    EXPECT_GE(p.noise_fraction, 0.0);
    EXPECT_LE(p.noise_fraction, 1.0);
    EXPECT_GE(p.nominal_duration_ms, 40.0);
    EXPECT_LE(p.nominal_duration_ms, 200.0);
  }
  for (const auto& p : bundled_feature_table().phonemes()) EXPECT_NO_THROW(voice_profile(p));
}

TEST(SynthTest, DistinctWordsAreFartherThanRepeats) {
  const MfccExtractor ex;
  const std::vector<std::string> words = {"open", "stop", "park", "speed", "music",
                                          "weather", "route", "hurry"};
  std::map<std::string, std::vector<Matrix>> inst;
  for (const auto& w : words) {
    for (int i = 0; i < 3; ++i) {
      Rng rng(derive_seed(99, w + std::to_string(i)));
      const auto r = render_keyword(bundled_lexicon().lookup(w), 100.0 + 10.0 * i, rng);
      std::vector<float> s(r.samples.begin(), r.samples.end());
      inst[w].push_back(ex.compute(s).frames);
    }
  }
  int wins = 0;
  int total = 0;
  for (const auto& w : words) {
    const double same = dtw_distance(inst[w][0], inst[w][1]);
    for (const auto& v : words) {
      if (v == w) continue;
      for (const auto& other : inst[v]) {
        ++total;
        wins += dtw_distance(inst[w][0], other) > same ? 1 : 0;
      }
    }
  }
  EXPECT_GE(static_cast<double>(wins) / total, 0.95) << wins << "/" << total;
}

TEST(SynthTest, BackgroundNoiseIsSeeded) {
  const AudioBuffer a = background_noise(1000, 5);
  const AudioBuffer b = background_noise(1000, 5);
  const AudioBuffer c = background_noise(1000, 6);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
}

}  // namespace
}  // namespace woi
