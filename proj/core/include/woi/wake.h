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

// Streaming wake-on-intent: keyword spotting over PCM chunks, keyword
// endpointing, an end-of-utterance state machine and the wake decision.

#ifndef WOI_WAKE_H_
#define WOI_WAKE_H_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "woi/corpus.h"
#include "woi/dsp.h"
#include "woi/intent.h"

namespace woi {

struct KeywordSegment {
  std::string word;
  double start_s = 0.0;
  double end_s = 0.0;
  double score = 0.0;
  bool provisional = false;  // end clamped to the buffer end

  friend bool operator==(const KeywordSegment&, const KeywordSegment&) = default;
};

// Every class except `other`.
std::set<Intent> default_wake_set();

struct WakeConfig {
  std::set<Intent> wake_set = default_wake_set();
  double tau = 0.5;
  double eou_silence_ms = 500.0;

  // Throws ConfigError.
  void validate() const;
};

inline constexpr std::size_t kMaxPendingKeywords = kMaxKeywordsPerUtterance;

enum class EngineMode { kListening, kInUtterance };

struct EngineState {
  EngineMode mode = EngineMode::kListening;
  std::vector<KeywordSegment> pending;
  double last_speech_s = 0.0;  // end of the newest pending keyword
  double last_event_s = 0.0;

  friend bool operator==(const EngineState&, const EngineState&) = default;
};

struct SegmentDetected {
  KeywordSegment segment;
  double time_s = 0.0;
};

// No speech since `silent_since_s`, observed at `time_s`.
struct SilenceTick {
  double time_s = 0.0;
  double silent_since_s = 0.0;
};

struct StreamEnd {
  double time_s = 0.0;
};

using WakeEvent = std::variant<SegmentDetected, SilenceTick, StreamEnd>;

double event_time(const WakeEvent& event);

struct WakeDecision {
  Vector fused;
  std::vector<Vector> per_stream;
  Intent intent = Intent::kOther;
  double confidence = 0.0;
  double utterance_end_s = 0.0;
  double decision_time_s = 0.0;
  bool woke = false;
  std::vector<KeywordSegment> segments;
};

// woke <=> intent in the wake set and confidence >= tau.
bool should_wake(Intent intent, double confidence, const WakeConfig& config);

// Classifies the pending keywords of one utterance.
using DecisionFn = std::function<UtteranceScores(std::span<const KeywordSegment>)>;

struct StepResult {
  EngineState state;
  std::optional<WakeDecision> decision;
};

// Pure transition function. Listening + segment -> InUtterance; a fourth
// segment closes the utterance on the first three and opens a new one;
// silence of at least eou_silence_ms past the last keyword, or the stream
// end, closes the utterance. Throws ValidationError on events that go back
// in time.
StepResult step(const EngineState& state, const WakeEvent& event, const WakeConfig& config,
                const DecisionFn& decide);

// Ground truth for a simulated stream.
struct StreamUtterance {
  UtteranceRecord record;
  std::size_t offset_samples = 0;
};

struct StreamInput {
  AudioBuffer audio;
  std::vector<StreamUtterance> truth;

  // Manifest keywords shifted to stream time, in order.
  std::vector<KeywordSegment> truth_segments() const;
};

// Utterances back to back with `gap_s` of background noise before each and
// after the last one.
StreamInput concatenate_utterances(const Corpus& corpus, std::span<const std::size_t> indices,
                                   double gap_s, std::uint64_t seed);

// What a spotter can see after each frame: the whole buffered stream so far.
struct SpotterView {
  std::span<const float> samples;
  const std::vector<bool>& vad;          // one flag per complete frame
  const std::vector<Vector>& mfcc;       // one vector per complete frame
  double hop_s = 0.01;
  double frame_s = 0.025;
  double now_s = 0.0;
  bool at_end = false;
};

class KeywordSpotter {
 public:
  virtual ~KeywordSpotter() = default;
  virtual void reset() = 0;
  // Called once per new frame (and once more with at_end set).
  virtual std::vector<KeywordSegment> update(const SpotterView& view) = 0;
};

// Replays ground truth: each segment is emitted once the stream has reached
// its (jittered) end. Jitter is uniform in +-jitter_s, snapped to samples.
class OracleSpotter : public KeywordSpotter {
 public:
  OracleSpotter(std::vector<KeywordSegment> truth, double jitter_s = 0.0,
                std::uint64_t seed = 0, int sample_rate_hz = kDefaultSampleRate);

  void reset() override { next_ = 0; }
  std::vector<KeywordSegment> update(const SpotterView& view) override;
  const std::vector<KeywordSegment>& segments() const { return segments_; }

 private:
  int sample_rate_hz_;
  std::vector<KeywordSegment> segments_;
  std::size_t next_ = 0;
};

// Per-frame inputs to the endpoint decision.
struct EndpointInput {
  int peak_frame = 0;                 // highest-energy frame of the candidate
  std::vector<double> keyword_cost;   // indexed by frame - first_frame
  std::vector<double> background_cost;
  int first_frame = 0;
  int num_frames = 0;                 // frames available in the buffer
};

struct EndpointResult {
  int end_frame = 0;  // first frame judged to be past the keyword
  bool provisional = false;
};

// Scans forward from the peak for the first frame where VAD is false, or the
// first of three consecutive frames whose keyword cost exceeds the
// background cost, whichever comes first. Without either, the end is clamped
// to the buffer end and marked provisional.
EndpointResult endpoint(const EndpointInput& input, const std::vector<bool>& vad);

struct DtwSpotterConfig {
  std::map<std::string, std::vector<Matrix>> templates;  // raw MFCC frames per word
  std::vector<Matrix> background;                         // raw MFCC noise segments
  double accept_threshold = 1.0;  // on normalized DTW distance
  double margin = 0.0;            // required gap to the rejection score
  int hangover_frames = 5;
  int pad_frames = 2;
  int min_frames = 8;
};

// VAD-gated DTW template matcher with a background rejection bank.
class DtwSpotter : public KeywordSpotter {
 public:
  explicit DtwSpotter(DtwSpotterConfig config);

  void reset() override;
  std::vector<KeywordSegment> update(const SpotterView& view) override;

  struct Scored {
    std::string word;
    double best = 0.0;       // min over the word's templates
    double rejection = 0.0;  // mean distance to the background bank
    std::size_t template_index = 0;
  };
  // Scores raw MFCC frames against every word; sorted best first.
  std::vector<Scored> score(const Matrix& frames) const;
  bool accept(const Scored& s) const;
  const Normalizer& normalizer() const { return normalizer_; }

 private:
  std::optional<KeywordSegment> evaluate(const SpotterView& view, int first, int last);

  DtwSpotterConfig config_;
  Normalizer normalizer_;
  std::map<std::string, std::vector<Matrix>> templates_;  // normalized
  std::vector<Matrix> background_;                         // normalized
  Matrix background_frames_;                               // all background rows
  bool in_run_ = false;
  int run_start_ = 0;
  int last_speech_ = 0;
  int quiet_ = 0;
  int frames_seen_ = 0;
};

// Keyword templates and background segments cut from a corpus: up to
// `per_word` instances of each word (in record order) and one noise segment
// of `background_s` from the start of each of the first `background_count`
// utterances.
DtwSpotterConfig build_dtw_templates(const Corpus& corpus, std::span<const std::size_t> indices,
                                     const MfccExtractor& extractor, int per_word = 3,
                                     int background_count = 20, double background_s = 0.15);

// Frozen from a sweep on a separately seeded tuning corpus: recall plateaus
// from 3.5 up; margins above ~4 start rejecting true keywords.
inline constexpr double kDtwAcceptThreshold = 4.0;
inline constexpr double kDtwMargin = 1.0;

struct StreamOptions {
  WakeConfig wake;
  VadConfig vad;
  MfccConfig mfcc;
  int chunk_samples = 160;
};

struct SegmentMatch {
  KeywordSegment detected;
  std::optional<KeywordSegment> truth;
  bool word_correct = false;
};

struct StreamStats {
  int utterances = 0;
  int truth_keywords = 0;
  int detected_keywords = 0;
  int hits = 0;          // detections overlapping a truth keyword with the same word
  int false_alarms = 0;  // detections without a same-word truth overlap
  double recall = 0.0;
  double false_alarms_per_utterance = 0.0;
  std::vector<double> endpoint_errors_s;  // |est - true| end, overlapping detections
  double mean_endpoint_error_s = 0.0;
  std::vector<double> latencies_s;        // decision time - utterance end
  double mean_latency_s = 0.0;
  int decisions_matched = 0;   // decisions attributable to one truth utterance
  int decisions_correct = 0;   // ... whose intent equals the truth intent
};

struct StreamResult {
  std::vector<WakeDecision> decisions;
  std::vector<SegmentMatch> segments;
  StreamStats stats;
};

// Feeds the stream in chunks through VAD, MFCC, the spotter and the state
// machine; classification uses keyword audio cut from the buffered stream.
StreamResult run_stream(const StreamInput& input, KeywordSpotter& spotter,
                        const IntentModels& models, const StreamOptions& options);

// One JSON object per line.
std::string decision_log_line(const WakeDecision& decision,
                              std::span<const StreamKind> streams);

}  // namespace woi

#endif  // WOI_WAKE_H_
