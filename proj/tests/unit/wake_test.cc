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

#include <numeric>

#include "json.hpp"
#include "support/fixtures.h"
#include "woi/wake.h"

namespace woi {
namespace {

using testing::fixture_corpus;
using testing::fixture_models;

// Always scores `intent` with probability `p`.
DecisionFn stub(Intent intent, double p) {
  return [intent, p](std::span<const KeywordSegment> segs) {
    EXPECT_FALSE(segs.empty());
    UtteranceScores s;
    Vector v = Vector::Constant(kNumIntents, (1.0 - p) / (kNumIntents - 1));
    v(static_cast<int>(intent)) = p;
    s.per_stream = {v};
    s.fused = fuse(s.per_stream, FusionPolicy::uniform(1));
    return s;
  };
}

KeywordSegment seg(const std::string& w, double a, double b) { return {w, a, b, 0.0, false}; }

TEST(StepTest, TransitionsAndSilenceDecision) {
  const WakeConfig cfg;
  const DecisionFn decide = stub(Intent::kFast, 0.9);
  EngineState s;
  auto r = step(s, SegmentDetected{seg("increase", 0.2, 0.6), 0.6}, cfg, decide);
  EXPECT_EQ(r.state.mode, EngineMode::kInUtterance);
  EXPECT_FALSE(r.decision);
  r = step(r.state, SegmentDetected{seg("speed", 0.8, 1.1), 1.1}, cfg, decide);
  EXPECT_EQ(r.state.pending.size(), 2u);
  r = step(r.state, SilenceTick{1.5, 1.1}, cfg, decide);
  EXPECT_FALSE(r.decision);
  r = step(r.state, SilenceTick{1.7, 1.1}, cfg, decide);
  ASSERT_TRUE(r.decision);
  EXPECT_EQ(r.decision->intent, Intent::kFast);
  EXPECT_TRUE(r.decision->woke);
  EXPECT_DOUBLE_EQ(r.decision->utterance_end_s, 1.1);
  EXPECT_DOUBLE_EQ(r.decision->decision_time_s, 1.7);
  EXPECT_EQ(r.decision->segments.size(), 2u);
  EXPECT_EQ(r.state.mode, EngineMode::kListening);
  EXPECT_TRUE(r.state.pending.empty());
}

TEST(StepTest, SilenceCountsFromTheLastKeyword) {
  const WakeConfig cfg;
  const DecisionFn decide = stub(Intent::kStop, 0.9);
  auto r = step({}, SegmentDetected{seg("stop", 0.2, 1.0), 1.0}, cfg, decide);
  // Silence started before the keyword ended: still measured from its end.
  r = step(r.state, SilenceTick{1.4, 0.5}, cfg, decide);
  EXPECT_FALSE(r.decision);
  r = step(r.state, SilenceTick{1.5, 0.5}, cfg, decide);
  EXPECT_TRUE(r.decision);
}

TEST(StepTest, FourthKeywordClosesTheUtterance) {
  const WakeConfig cfg;
  const DecisionFn decide = stub(Intent::kPark, 0.8);
  EngineState s;
  for (int i = 0; i < 3; ++i) {
    const auto r = step(s, SegmentDetected{seg("park", i, i + 0.5), i + 0.5}, cfg, decide);
    EXPECT_FALSE(r.decision);
    s = r.state;
  }
  const auto r = step(s, SegmentDetected{seg("spot", 3.0, 3.4), 3.4}, cfg, decide);
  ASSERT_TRUE(r.decision);
  EXPECT_EQ(r.decision->segments.size(), 3u);
  EXPECT_DOUBLE_EQ(r.decision->utterance_end_s, 2.5);
  ASSERT_EQ(r.state.pending.size(), 1u);
  EXPECT_EQ(r.state.pending[0].word, "spot");
  EXPECT_EQ(r.state.mode, EngineMode::kInUtterance);
}

TEST(StepTest, ListeningIgnoresSilenceAndEnd) {
  const WakeConfig cfg;
  const DecisionFn decide = [](std::span<const KeywordSegment>) -> UtteranceScores {
    ADD_FAILURE() << "no decision expected";
    return {};
  };
  auto r = step({}, SilenceTick{5.0, 0.0}, cfg, decide);
  EXPECT_FALSE(r.decision);
  r = step(r.state, StreamEnd{6.0}, cfg, decide);
  EXPECT_FALSE(r.decision);
  EXPECT_EQ(r.state.mode, EngineMode::kListening);
}

TEST(StepTest, StreamEndFlushes) {
  const auto r0 = step({}, SegmentDetected{seg("door", 0.1, 0.4), 0.4}, {}, stub(Intent::kDoor, 0.7));
  const auto r = step(r0.state, StreamEnd{0.5}, {}, stub(Intent::kDoor, 0.7));
  ASSERT_TRUE(r.decision);
  EXPECT_EQ(r.decision->segments.size(), 1u);
}

TEST(StepTest, RejectsBadEvents) {
  const WakeConfig cfg;
  const auto r = step({}, SegmentDetected{seg("door", 0.1, 0.4), 2.0}, cfg, stub(Intent::kDoor, 1));
  EXPECT_THROW(step(r.state, SilenceTick{1.0, 0.4}, cfg, stub(Intent::kDoor, 1)), ValidationError);
  EXPECT_THROW(step({}, SegmentDetected{seg("door", 0.4, 0.4), 1.0}, cfg, stub(Intent::kDoor, 1)),
               ValidationError);
}

TEST(WakeRuleTest, ThresholdAndSet) {
  WakeConfig cfg;
  EXPECT_TRUE(should_wake(Intent::kSlow, 0.5, cfg));
  EXPECT_FALSE(should_wake(Intent::kSlow, 0.4999, cfg));
  EXPECT_FALSE(should_wake(Intent::kOther, 1.0, cfg));
  cfg.tau = 0.0;
  for (Intent c : all_intents()) EXPECT_EQ(should_wake(c, 0.0, cfg), c != Intent::kOther);
  cfg.wake_set = {Intent::kStop};
  EXPECT_FALSE(should_wake(Intent::kSlow, 1.0, cfg));
  cfg.tau = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.tau = 0.5;
  cfg.eou_silence_ms = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(EndpointTest, VadDropAndCostCrossing) {
  EndpointInput in;
  in.peak_frame = 2;
  in.first_frame = 0;
  in.num_frames = 10;
  in.keyword_cost.assign(10, 1.0);
  in.background_cost.assign(10, 2.0);
  std::vector<bool> vad(10, true);
  vad[7] = false;
  EXPECT_EQ(endpoint(in, vad).end_frame, 7);
  in.keyword_cost[4] = in.keyword_cost[5] = in.keyword_cost[6] = 3.0;
  const auto r = endpoint(in, vad);
  EXPECT_EQ(r.end_frame, 4);
  EXPECT_FALSE(r.provisional);
  std::fill(in.keyword_cost.begin(), in.keyword_cost.end(), 1.0);
  const auto p = endpoint(in, std::vector<bool>(10, true));
  EXPECT_EQ(p.end_frame, 10);
  EXPECT_TRUE(p.provisional);
}

StreamOptions options() { return StreamOptions{}; }

std::vector<std::size_t> first_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

TEST(StreamTest, OracleDecisionsEqualOfflineClassification) {
  const auto idx = first_n(10);
  const StreamInput in = concatenate_utterances(fixture_corpus(), idx, 0.8, 5);
  ASSERT_EQ(in.truth.size(), 10u);
  OracleSpotter spotter(in.truth_segments());
  const StreamResult r = run_stream(in, spotter, fixture_models(), options());
  ASSERT_EQ(r.decisions.size(), 10u);
  EXPECT_DOUBLE_EQ(r.stats.recall, 1.0);
  EXPECT_EQ(r.stats.false_alarms, 0);
  EXPECT_DOUBLE_EQ(r.stats.mean_endpoint_error_s, 0.0);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& rec = in.truth[i].record;
    const auto kw = keyword_inputs(rec, fixture_corpus().load_audio(rec), MfccExtractor());
    const UtteranceScores offline = classify_utterance(fixture_models(), kw);
    const WakeDecision& d = r.decisions[i];
    EXPECT_EQ(d.fused, offline.fused.fused) << rec.utterance_id;
    EXPECT_EQ(static_cast<int>(d.intent), offline.fused.label);
    EXPECT_EQ(d.woke, should_wake(d.intent, d.confidence, WakeConfig{}));
    EXPECT_GE(d.decision_time_s - d.utterance_end_s, 0.5 - 1e-9);
    EXPECT_EQ(d.segments.size(), rec.keywords.size());
  }
  EXPECT_EQ(r.stats.decisions_matched, 10);
}

TEST(StreamTest, ShortGapsStillSeparateUtterances) {
  const auto idx = first_n(4);
  const StreamInput in = concatenate_utterances(fixture_corpus(), idx, 0.1, 6);
  OracleSpotter spotter(in.truth_segments());
  const StreamResult r = run_stream(in, spotter, fixture_models(), options());
  // Each utterance carries at least 0.3 s of trailing silence plus the gap.
  EXPECT_EQ(r.decisions.size(), 4u);
}

TEST(StreamTest, OracleJitterAndClamp) {
  const std::vector<KeywordSegment> truth = {seg("door", 0.2, 0.5), seg("open", 0.6, 2.0)};
  OracleSpotter jittered(truth, 0.02, 3);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_LE(std::abs(jittered.segments()[i].end_s - truth[i].end_s), 0.02 + 1.0 / 16000);
  }
  OracleSpotter spotter(truth);
  std::vector<float> samples(16000);
  std::vector<bool> vad;
  std::vector<Vector> mfcc;
  auto out = spotter.update(SpotterView{samples, vad, mfcc, 0.01, 0.025, 1.0, false});
  ASSERT_EQ(out.size(), 1u);
  out = spotter.update(SpotterView{samples, vad, mfcc, 0.01, 0.025, 1.0, true});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].provisional);
  EXPECT_DOUBLE_EQ(out[0].end_s, 1.0);
}

TEST(StreamTest, SilenceGivesNoSegments) {
  const auto idx = first_n(30);
  DtwSpotter spotter(build_dtw_templates(fixture_corpus(), idx, MfccExtractor()));
  StreamInput in;
  in.audio = background_noise(3 * 16000, 4);
  const StreamResult r = run_stream(in, spotter, fixture_models(), options());
  EXPECT_TRUE(r.decisions.empty());
  EXPECT_EQ(r.stats.detected_keywords, 0);
}

TEST(StreamTest, DtwSpotterFindsKeywords) {
  const auto folds = stratified_kfold(fixture_corpus().records(), 5, 8);
  DtwSpotter spotter(build_dtw_templates(fixture_corpus(), folds[0].train, MfccExtractor()));
  const std::vector<std::size_t> test(folds[0].test.begin(), folds[0].test.begin() + 10);
  const StreamInput in = concatenate_utterances(fixture_corpus(), test, 0.8, 9);
  const StreamResult r = run_stream(in, spotter, fixture_models(), options());
  EXPECT_GE(r.stats.recall, 0.9);
  EXPECT_LE(r.stats.false_alarms_per_utterance, 0.1);
  EXPECT_LE(r.stats.mean_endpoint_error_s, 0.05);
  EXPECT_EQ(r.decisions.size(), 10u);
}

TEST(StreamTest, DtwScoresOwnTemplateBest) {
  const auto idx = first_n(30);
  const DtwSpotterConfig cfg = build_dtw_templates(fixture_corpus(), idx, MfccExtractor());
  const DtwSpotter spotter(cfg);
  for (const auto& [word, list] : cfg.templates) {
    const auto scored = spotter.score(list.front());
    ASSERT_FALSE(scored.empty());
    EXPECT_EQ(scored.front().word, word);
    EXPECT_DOUBLE_EQ(scored.front().best, 0.0);
    EXPECT_TRUE(spotter.accept(scored.front()));
  }
  EXPECT_THROW(DtwSpotter(DtwSpotterConfig{}), ConfigError);
}

TEST(StreamTest, RejectsBadOptions) {
  StreamInput in;
  in.audio = background_noise(1600, 1);
  OracleSpotter spotter({});
  StreamOptions o;
  o.chunk_samples = 0;
  EXPECT_THROW(run_stream(in, spotter, fixture_models(), o), ConfigError);
  o = StreamOptions{};
  o.vad.frame_ms = 30.0;
  EXPECT_THROW(run_stream(in, spotter, fixture_models(), o), ConfigError);
}

TEST(DecisionLogTest, OneJsonObjectPerLine) {
  WakeDecision d;
  d.fused = Vector::Constant(kNumIntents, 1.0 / kNumIntents);
  d.per_stream = {d.fused};
  d.intent = Intent::kSlow;
  d.confidence = 1.0 / kNumIntents;
  d.segments = {seg("slow", 0.1, 0.4)};
  const std::vector<StreamKind> streams = {StreamKind::kPhone};
  const std::string line = decision_log_line(d, streams);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["intent"], "slow");
  EXPECT_EQ(j["keywords"][0]["word"], "slow");
  EXPECT_EQ(j["streams"]["phone"].size(), static_cast<std::size_t>(kNumIntents));
  EXPECT_FALSE(j["woke"].get<bool>());
}

}  // namespace
}  // namespace woi
