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

#include "woi/wake.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

namespace woi {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

WakeDecision make_decision(const EngineState& state, double time_s, const WakeConfig& config,
                           const DecisionFn& decide) {
  const UtteranceScores scores = decide(state.pending);
  WakeDecision d;
  d.fused = scores.fused.fused;
  d.per_stream = scores.per_stream;
  d.intent = static_cast<Intent>(scores.fused.label);
  d.confidence = scores.fused.confidence;
  d.utterance_end_s = state.pending.back().end_s;
  d.decision_time_s = time_s;
  d.woke = should_wake(d.intent, d.confidence, config);
  d.segments = state.pending;
  return d;
}

double overlap(const KeywordSegment& a, const KeywordSegment& b) {
  return std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s);
}

}  // namespace

std::set<Intent> default_wake_set() {
  std::set<Intent> s;
  for (Intent c : all_intents()) {
    if (c != Intent::kOther) s.insert(c);
  }
  return s;
}

void WakeConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ConfigError("confidence threshold tau must lie in [0, 1]");
  }
  if (!(eou_silence_ms > 0.0) || !std::isfinite(eou_silence_ms)) {
    throw ConfigError("eou_silence_ms must be > 0");
  }
}

double event_time(const WakeEvent& event) {
  return std::visit([](const auto& e) { return e.time_s; }, event);
}

bool should_wake(Intent intent, double confidence, const WakeConfig& config) {
  return config.wake_set.contains(intent) && confidence >= config.tau;
}

StepResult step(const EngineState& state, const WakeEvent& event, const WakeConfig& config,
                const DecisionFn& decide) {
  const double t = event_time(event);
  if (!std::isfinite(t) || t < state.last_event_s) {
    throw ValidationError("wake event at " + std::to_string(t) + " s precedes the previous one at " +
                          std::to_string(state.last_event_s) + " s");
  }
  StepResult r{state, std::nullopt};
  r.state.last_event_s = t;
  const auto close = [&] {
    r.decision = make_decision(r.state, t, config, decide);
    r.state.pending.clear();
    r.state.mode = EngineMode::kListening;
  };

  std::visit(Overloaded{
                 [&](const SegmentDetected& e) {
                   const KeywordSegment& seg = e.segment;
                   if (!(seg.end_s > seg.start_s) || !std::isfinite(seg.score)) {
                     throw ValidationError("invalid keyword segment '" + seg.word + "'");
                   }
                   if (r.state.pending.size() >= kMaxPendingKeywords) close();
                   r.state.pending.push_back(seg);
                   r.state.mode = EngineMode::kInUtterance;
                   r.state.last_speech_s = seg.end_s;
                 },
                 [&](const SilenceTick& e) {
                   if (r.state.mode != EngineMode::kInUtterance) return;
                   const double silence = t - std::max(e.silent_since_s, r.state.last_speech_s);
                   if (silence * 1000.0 >= config.eou_silence_ms) close();
                 },
                 [&](const StreamEnd&) {
                   if (r.state.mode == EngineMode::kInUtterance) close();
                 },
             },
             event);
  return r;
}

std::vector<KeywordSegment> StreamInput::truth_segments() const {
  std::vector<KeywordSegment> out;
  const double sr = audio.sample_rate_hz;
  for (const auto& u : truth) {
    for (const auto& k : u.record.keywords) {
      const auto s = u.offset_samples + time_to_sample(k.start_s, audio.sample_rate_hz);
      const auto e = u.offset_samples + time_to_sample(k.end_s, audio.sample_rate_hz);
      out.push_back({k.word, static_cast<double>(s) / sr, static_cast<double>(e) / sr, 0.0,
                     false});
    }
  }
  return out;
}

StreamInput concatenate_utterances(const Corpus& corpus, std::span<const std::size_t> indices,
                                   double gap_s, std::uint64_t seed) {
  if (!(gap_s >= 0.0)) throw ValidationError("gap_s must be >= 0");
  StreamInput in;
  const std::size_t gap = time_to_sample(gap_s, kDefaultSampleRate);
  const auto append_gap = [&](std::size_t i) {
    const AudioBuffer noise = background_noise(gap, derive_seed(seed, "gap/" + std::to_string(i)));
    in.audio.samples.insert(in.audio.samples.end(), noise.samples.begin(), noise.samples.end());
  };
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& record = corpus.records().at(indices[i]);
    append_gap(i);
    const AudioBuffer audio = corpus.load_audio(record);
    if (audio.sample_rate_hz != kDefaultSampleRate) {
      throw ValidationError("utterance '" + record.utterance_id + "': unexpected sample rate");
    }
    in.truth.push_back({record, in.audio.samples.size()});
    in.audio.samples.insert(in.audio.samples.end(), audio.samples.begin(), audio.samples.end());
  }
  append_gap(indices.size());
  return in;
}

OracleSpotter::OracleSpotter(std::vector<KeywordSegment> truth, double jitter_s,
                             std::uint64_t seed, int sample_rate_hz)
    : sample_rate_hz_(sample_rate_hz) {
  if (!(jitter_s >= 0.0)) throw ConfigError("oracle jitter must be >= 0");
  Rng rng(derive_seed(seed, "oracle"));
  const double sr = sample_rate_hz;
  for (auto seg : truth) {
    if (jitter_s > 0.0) {
      long s = static_cast<long>(time_to_sample(seg.start_s, sample_rate_hz)) +
               std::lround(rng.uniform(-jitter_s, jitter_s) * sr);
      long e = static_cast<long>(time_to_sample(seg.end_s, sample_rate_hz)) +
               std::lround(rng.uniform(-jitter_s, jitter_s) * sr);
      s = std::max(0L, s);
      e = std::max(s + 1, e);
      seg.start_s = static_cast<double>(s) / sr;
      seg.end_s = static_cast<double>(e) / sr;
    }
    seg.score = 0.0;
    segments_.push_back(seg);
  }
  std::stable_sort(segments_.begin(), segments_.end(),
                   [](const auto& a, const auto& b) { return a.end_s < b.end_s; });
}

std::vector<KeywordSegment> OracleSpotter::update(const SpotterView& view) {
  std::vector<KeywordSegment> out;
  while (next_ < segments_.size()) {
    KeywordSegment seg = segments_[next_];
    const std::size_t end = time_to_sample(seg.end_s, sample_rate_hz_);
    if (end > view.samples.size()) {
      if (!view.at_end) break;
      seg.end_s = static_cast<double>(view.samples.size()) / sample_rate_hz_;
      seg.provisional = true;
      if (!(seg.end_s > seg.start_s)) {
        ++next_;
        continue;
      }
    }
    out.push_back(seg);
    ++next_;
  }
  return out;
}

EndpointResult endpoint(const EndpointInput& in, const std::vector<bool>& vad) {
  int above = 0;
  const int limit = std::min<int>(in.num_frames, static_cast<int>(vad.size()));
  for (int f = in.peak_frame + 1; f < limit; ++f) {
    if (!vad[static_cast<std::size_t>(f)]) return {f, false};
    const int i = f - in.first_frame;
    if (i >= 0 && i < static_cast<int>(in.keyword_cost.size()) &&
        i < static_cast<int>(in.background_cost.size())) {
      if (in.keyword_cost[static_cast<std::size_t>(i)] >
          in.background_cost[static_cast<std::size_t>(i)]) {
        if (++above == 3) return {f - 2, false};
      } else {
        above = 0;
      }
    }
  }
  return {in.num_frames, true};
}

DtwSpotter::DtwSpotter(DtwSpotterConfig config) : config_(std::move(config)) {
  std::vector<Matrix> all;
  for (const auto& [word, list] : config_.templates) {
    for (const auto& m : list) all.push_back(m);
  }
  if (all.empty()) throw ConfigError("dtw spotter needs at least one keyword template");
  if (config_.background.empty()) throw ConfigError("dtw spotter needs background templates");
  if (config_.hangover_frames < config_.pad_frames || config_.pad_frames < 0) {
    throw ConfigError("dtw spotter: hangover must cover the padding");
  }
  normalizer_ = Normalizer::fit(all);
  for (const auto& [word, list] : config_.templates) {
    for (const auto& m : list) templates_[word].push_back(normalizer_.apply(m));
  }
  Eigen::Index rows = 0;
  for (const auto& m : config_.background) {
    background_.push_back(normalizer_.apply(m));
    rows += m.rows();
  }
  background_frames_.resize(rows, normalizer_.dim());
  Eigen::Index r = 0;
  for (const auto& m : background_) {
    background_frames_.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
}

void DtwSpotter::reset() {
  in_run_ = false;
  run_start_ = last_speech_ = quiet_ = frames_seen_ = 0;
}

std::vector<DtwSpotter::Scored> DtwSpotter::score(const Matrix& frames) const {
  const Matrix x = normalizer_.apply(frames);
  double rejection = 0.0;
  for (const auto& b : background_) rejection += dtw_distance(x, b);
  rejection /= static_cast<double>(background_.size());
  std::vector<Scored> out;
  for (const auto& [word, list] : templates_) {
    Scored s{word, std::numeric_limits<double>::infinity(), rejection, 0};
    for (std::size_t i = 0; i < list.size(); ++i) {
      const double d = dtw_distance(x, list[i]);
      if (d < s.best) {
        s.best = d;
        s.template_index = i;
      }
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Scored& a, const Scored& b) { return a.best < b.best; });
  return out;
}

bool DtwSpotter::accept(const Scored& s) const {
  return s.best < config_.accept_threshold && s.best + config_.margin < s.rejection;
}

std::optional<KeywordSegment> DtwSpotter::evaluate(const SpotterView& view, int first,
                                                   int last) {
  if (last - first + 1 < config_.min_frames) return std::nullopt;
  const int n = static_cast<int>(view.mfcc.size());
  const int lo = std::max(0, first - config_.pad_frames);
  const int hi = std::min(n - 1, last + config_.pad_frames);
  Matrix window(hi - lo + 1, normalizer_.dim());
  for (int f = lo; f <= hi; ++f) window.row(f - lo) = view.mfcc[static_cast<std::size_t>(f)].transpose();

  const auto scored = score(window);
  const Scored& best = scored.front();
  if (!accept(best)) return std::nullopt;

  // Per-frame keyword cost along the best alignment, and the distance of
  // each frame to the closest background frame.
  const Matrix x = normalizer_.apply(window);
  const Matrix& tmpl = templates_.at(best.word)[best.template_index];
  const DtwResult align = dtw_align(x, tmpl);
  EndpointInput ep;
  ep.first_frame = lo;
  ep.num_frames = n;
  ep.keyword_cost.assign(static_cast<std::size_t>(x.rows()), std::numeric_limits<double>::infinity());
  for (const auto& [i, j] : align.path) {
    double& c = ep.keyword_cost[static_cast<std::size_t>(i)];
    c = std::min(c, (x.row(i) - tmpl.row(j)).norm());
  }
  ep.background_cost.resize(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    ep.background_cost[static_cast<std::size_t>(i)] =
        (background_frames_.rowwise() - x.row(i)).rowwise().norm().minCoeff();
  }
  ep.peak_frame = first;
  for (int f = first; f <= last; ++f) {
    if (view.mfcc[static_cast<std::size_t>(f)](0) > view.mfcc[static_cast<std::size_t>(ep.peak_frame)](0)) {
      ep.peak_frame = f;
    }
  }
  const EndpointResult end = endpoint(ep, view.vad);

  KeywordSegment seg;
  seg.word = best.word;
  seg.score = best.best;
  const double buffer_end = static_cast<double>(view.samples.size()) / kDefaultSampleRate;
  seg.start_s = std::min(buffer_end, first * view.hop_s + (view.frame_s - view.hop_s));
  seg.end_s = std::min(buffer_end, end.end_frame * view.hop_s);
  seg.provisional = end.provisional || seg.end_s == buffer_end;
  if (!(seg.end_s > seg.start_s)) return std::nullopt;
  return seg;
}

std::vector<KeywordSegment> DtwSpotter::update(const SpotterView& view) {
  std::vector<KeywordSegment> out;
  const int n = static_cast<int>(view.vad.size());
  for (int t = frames_seen_; t < n; ++t) {
    if (view.vad[static_cast<std::size_t>(t)]) {
      if (!in_run_) {
        in_run_ = true;
        run_start_ = t;
      }
      last_speech_ = t;
      quiet_ = 0;
    } else if (in_run_ && ++quiet_ >= config_.hangover_frames) {
      in_run_ = false;
      if (auto seg = evaluate(view, run_start_, last_speech_)) out.push_back(std::move(*seg));
    }
  }
  frames_seen_ = n;
  if (view.at_end && in_run_) {
    in_run_ = false;
    if (auto seg = evaluate(view, run_start_, last_speech_)) out.push_back(std::move(*seg));
  }
  return out;
}

DtwSpotterConfig build_dtw_templates(const Corpus& corpus, std::span<const std::size_t> indices,
                                     const MfccExtractor& extractor, int per_word,
                                     int background_count, double background_s) {
  if (per_word < 1) throw ConfigError("per_word must be >= 1");
  DtwSpotterConfig cfg;
  int backgrounds = 0;
  for (std::size_t idx : indices) {
    const auto& record = corpus.records().at(idx);
    const AudioBuffer audio = corpus.load_audio(record);
    for (auto& k : keyword_inputs(record, audio, extractor)) {
      auto& list = cfg.templates[k.word];
      if (static_cast<int>(list.size()) < per_word) list.push_back(std::move(k.mfcc.frames));
    }
    if (backgrounds < background_count) {
      const double end = std::min(background_s, record.keywords.front().start_s);
      cfg.background.push_back(extractor.compute(slice_seconds(audio, 0.0, end)).frames);
      ++backgrounds;
    }
  }
  cfg.accept_threshold = kDtwAcceptThreshold;
  cfg.margin = kDtwMargin;
  return cfg;
}

StreamResult run_stream(const StreamInput& input, KeywordSpotter& spotter,
                        const IntentModels& models, const StreamOptions& options) {
  options.wake.validate();
  options.mfcc.validate();
  if (options.chunk_samples < 1) throw ConfigError("chunk_samples must be >= 1");
  if (input.audio.sample_rate_hz != options.mfcc.sample_rate_hz) {
    throw ValidationError("stream sample rate does not match the MFCC configuration");
  }
  const MfccExtractor extractor(options.mfcc);
  const double sr = input.audio.sample_rate_hz;
  const int frame = time_to_sample(options.vad.frame_ms / 1000.0, input.audio.sample_rate_hz);
  const int hop = time_to_sample(options.vad.hop_ms / 1000.0, input.audio.sample_rate_hz);
  if (frame != options.mfcc.frame_samples() || hop != options.mfcc.hop_samples()) {
    throw ConfigError("VAD and MFCC framing must agree");
  }
  EnergyVad vad(options.vad.threshold_db_rel,
                std::max(1, static_cast<int>(std::lround(options.vad.window_s * 1000.0 /
                                                         options.vad.hop_ms))));

  std::vector<float> buffer;
  buffer.reserve(input.audio.samples.size());
  std::vector<bool> flags;
  std::vector<Vector> mfcc;
  EngineState state;
  StreamResult result;
  std::vector<KeywordSegment> detected;
  bool in_silence = false;
  double silent_since = 0.0;

  const DecisionFn decide = [&](std::span<const KeywordSegment> segs) {
    std::vector<KeywordInput> inputs;
    for (const auto& s : segs) {
      const std::span<const float> all(buffer);
      const std::size_t a = std::min(buffer.size(), time_to_sample(s.start_s, input.audio.sample_rate_hz));
      const std::size_t b = std::min(buffer.size(), time_to_sample(s.end_s, input.audio.sample_rate_hz));
      inputs.push_back({s.word, extractor.compute(all.subspan(a, b - a))});
    }
    return classify_utterance(models, inputs);
  };
  const auto apply = [&](const WakeEvent& e) {
    StepResult r = step(state, e, options.wake, decide);
    state = std::move(r.state);
    if (r.decision) result.decisions.push_back(std::move(*r.decision));
  };
  const auto view_at = [&](bool at_end) {
    return SpotterView{buffer, flags, mfcc, hop / sr, frame / sr,
                       static_cast<double>(buffer.size()) / sr, at_end};
  };
  const auto handle_segments = [&](std::vector<KeywordSegment> segs, double now) {
    for (auto& s : segs) {
      detected.push_back(s);
      apply(SegmentDetected{std::move(s), now});
    }
  };

  spotter.reset();
  const auto& src = input.audio.samples;
  for (std::size_t pos = 0; pos < src.size();) {
    const std::size_t n = std::min<std::size_t>(options.chunk_samples, src.size() - pos);
    buffer.insert(buffer.end(), src.begin() + static_cast<long>(pos),
                  src.begin() + static_cast<long>(pos + n));
    pos += n;
    const double now = static_cast<double>(buffer.size()) / sr;
    while (flags.size() * static_cast<std::size_t>(hop) + static_cast<std::size_t>(frame) <=
           buffer.size()) {
      const std::size_t t = flags.size();
      const std::span<const float> f(buffer.data() + t * static_cast<std::size_t>(hop),
                                     static_cast<std::size_t>(frame));
      const bool speech = vad.push(frame_rms(f));
      flags.push_back(speech);
      mfcc.push_back(extractor.compute(f).frames.row(0).transpose());

      handle_segments(spotter.update(view_at(false)), now);
      if (speech) {
        in_silence = false;
      } else {
        if (!in_silence) silent_since = static_cast<double>(t) * hop / sr;
        in_silence = true;
        apply(SilenceTick{now, silent_since});
      }
    }
  }
  const double end_time = static_cast<double>(buffer.size()) / sr;
  handle_segments(spotter.update(view_at(true)), end_time);
  apply(StreamEnd{end_time});

  // Scoring against ground truth.
  StreamStats& st = result.stats;
  const auto truth = input.truth_segments();
  st.utterances = static_cast<int>(input.truth.size());
  st.truth_keywords = static_cast<int>(truth.size());
  st.detected_keywords = static_cast<int>(detected.size());
  std::vector<bool> truth_hit(truth.size(), false);
  for (const auto& d : detected) {
    SegmentMatch m{d, std::nullopt, false};
    double best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const double o = overlap(d, truth[i]);
      if (o > best) {
        best = o;
        best_i = i;
      }
    }
    if (best > 0.0) {
      m.truth = truth[best_i];
      m.word_correct = truth[best_i].word == d.word;
      st.endpoint_errors_s.push_back(std::abs(d.end_s - truth[best_i].end_s));
      if (m.word_correct) truth_hit[best_i] = true;
    }
    if (!m.word_correct) ++st.false_alarms;
    result.segments.push_back(std::move(m));
  }
  st.hits = static_cast<int>(std::count(truth_hit.begin(), truth_hit.end(), true));
  st.recall = truth.empty() ? 0.0 : static_cast<double>(st.hits) / truth.size();
  st.false_alarms_per_utterance =
      st.utterances == 0 ? 0.0 : static_cast<double>(st.false_alarms) / st.utterances;
  if (!st.endpoint_errors_s.empty()) {
    st.mean_endpoint_error_s =
        std::accumulate(st.endpoint_errors_s.begin(), st.endpoint_errors_s.end(), 0.0) /
        static_cast<double>(st.endpoint_errors_s.size());
  }
  for (const auto& d : result.decisions) {
    for (const auto& u : input.truth) {
      const double begin = static_cast<double>(u.offset_samples) / sr;
      const double last_end = begin + u.record.keywords.back().end_s;
      const double first_start = begin + u.record.keywords.front().start_s;
      if (d.segments.front().start_s < last_end && d.segments.back().end_s > first_start) {
        ++st.decisions_matched;
        if (d.intent == u.record.intent) ++st.decisions_correct;
        st.latencies_s.push_back(d.decision_time_s - last_end);
        break;
      }
    }
  }
  if (!st.latencies_s.empty()) {
    st.mean_latency_s = std::accumulate(st.latencies_s.begin(), st.latencies_s.end(), 0.0) /
                        static_cast<double>(st.latencies_s.size());
  }
  return result;
}

std::string decision_log_line(const WakeDecision& d, std::span<const StreamKind> streams) {
  nlohmann::json j;
  j["time_s"] = d.decision_time_s;
  j["utterance_end_s"] = d.utterance_end_s;
  j["intent"] = intent_name(d.intent);
  j["confidence"] = d.confidence;
  j["woke"] = d.woke;
  j["keywords"] = nlohmann::json::array();
  for (const auto& s : d.segments) {
    j["keywords"].push_back({{"word", s.word}, {"start_s", s.start_s}, {"end_s", s.end_s},
                             {"score", s.score}, {"provisional", s.provisional}});
  }
  j["fused"] = std::vector<double>(d.fused.data(), d.fused.data() + d.fused.size());
  nlohmann::json per = nlohmann::json::object();
  for (std::size_t i = 0; i < d.per_stream.size() && i < streams.size(); ++i) {
    const Vector& p = d.per_stream[i];
    per[std::string(stream_name(streams[i]))] = std::vector<double>(p.data(), p.data() + p.size());
  }
  j["streams"] = std::move(per);
  return j.dump();
}

}  // namespace woi
