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

#include "woi/intent.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace woi {
namespace {

template <typename T>
std::shared_ptr<const T> borrow(const T& object) {
  return std::shared_ptr<const T>(std::shared_ptr<const T>(), &object);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
const T& require(const std::shared_ptr<const T>& p, StreamKind kind, const char* what) {
  if (!p) {
    throw ConfigError("stream '" + std::string(stream_name(kind)) + "' needs " + what);
  }
  return *p;
}

}  // namespace

int default_epochs(StreamKind kind) {
  switch (kind) {
    case StreamKind::kAcoustic:
      return 30;
    case StreamKind::kPhone:
      return 20;
    case StreamKind::kWord2Vec:
    case StreamKind::kSpeech2Vec:
      return 15;
  }
  throw ValidationError("unknown stream kind");
}

TrainConfig default_train_config(StreamKind kind, std::uint64_t seed) {
  TrainConfig c;
  c.lr = kLearningRate;
  c.epochs = default_epochs(kind);
  c.dropout_p = kDropout;
  c.seed = seed;
  c.batch_size = 1;
  return c;
}

FeatureResources FeatureResources::bundled() {
  FeatureResources r;
  r.lexicon = borrow(bundled_lexicon());
  r.features = borrow(bundled_feature_table());
  r.embeddings = borrow(bundled_embeddings());
  return r;
}

std::vector<KeywordInput> keyword_inputs(const UtteranceRecord& record,
                                         const AudioBuffer& audio,
                                         const MfccExtractor& extractor) {
  if (audio.sample_rate_hz != extractor.config().sample_rate_hz) {
    throw ValidationError("utterance '" + record.utterance_id + "': sample rate mismatch");
  }
  std::vector<KeywordInput> out;
  out.reserve(record.keywords.size());
  for (const auto& k : record.keywords) {
    const auto samples = slice_seconds(audio, k.start_s, k.end_s);
    try {
      out.push_back({k.word, extractor.compute(samples)});
    } catch (const ValidationError& e) {
      throw ValidationError("utterance '" + record.utterance_id + "', keyword '" + k.word +
                            "': " + e.what());
    }
  }
  return out;
}

FeatureSequence featurize_keyword(const KeywordInput& keyword, StreamKind kind,
                                  const FeatureResources& resources) {
  FeatureSequence seq;
  seq.kind = kind;
  switch (kind) {
    case StreamKind::kAcoustic:
      seq = keyword.mfcc;
      seq.kind = kind;
      break;
    case StreamKind::kPhone: {
      const auto& lex = require(resources.lexicon, kind, "a lexicon");
      const auto& table = require(resources.features, kind, "a feature table");
      seq = phone_features(to_phones(keyword.word, lex), table);
      break;
    }
    case StreamKind::kWord2Vec: {
      const auto& table = require(resources.embeddings, kind, "an embedding table");
      seq.frames = table.lookup(keyword.word).transpose();
      break;
    }
    case StreamKind::kSpeech2Vec: {
      const auto& model = require(resources.speech2vec, kind, "a speech2vec model");
      seq.frames = embed_segment(model, keyword.mfcc).transpose();
      break;
    }
  }
  return seq;
}

std::vector<FeatureSequence> featurize_utterance(const UtteranceRecord& record,
                                                 const AudioBuffer& audio, StreamKind kind,
                                                 const FeatureResources& resources) {
  std::vector<FeatureSequence> out;
  for (const auto& k : keyword_inputs(record, audio, resources.mfcc)) {
    out.push_back(featurize_keyword(k, kind, resources));
  }
  return out;
}

FeatureSequence concatenate(std::span<const FeatureSequence> sequences) {
  if (sequences.empty()) throw ValidationError("concatenate: no sequences");
  const FeatureSequence& first = sequences.front();
  Eigen::Index rows = 0;
  for (const auto& s : sequences) {
    if (s.kind != first.kind || s.dim() != first.dim()) {
      throw ShapeError("concatenate: sequences differ in stream or dimension");
    }
    rows += s.frames.rows();
  }
  FeatureSequence out;
  out.kind = first.kind;
  out.frame_hop_s = first.frame_hop_s;
  out.frames.resize(rows, first.dim());
  Eigen::Index r = 0;
  for (const auto& s : sequences) {
    out.frames.middleRows(r, s.frames.rows()) = s.frames;
    r += s.frames.rows();
  }
  return out;
}

int stream_input_dim(StreamKind kind, const FeatureResources& resources) {
  switch (kind) {
    case StreamKind::kAcoustic:
      return resources.mfcc.config().n_coeffs;
    case StreamKind::kPhone:
      return require(resources.features, kind, "a feature table").num_features();
    case StreamKind::kWord2Vec:
      return require(resources.embeddings, kind, "an embedding table").dim();
    case StreamKind::kSpeech2Vec:
      return require(resources.speech2vec, kind, "a speech2vec model").embedding_dim();
  }
  throw ValidationError("unknown stream kind");
}

Vector StreamModel::predict(const FeatureSequence& features) const {
  if (features.kind != kind) {
    throw ValidationError("stream model '" + std::string(stream_name(kind)) +
                          "' given '" + std::string(stream_name(features.kind)) +
                          "' features");
  }
  return woi::predict(classifier, normalizer.apply(features.frames));
}

void StreamModel::save(const std::filesystem::path& path) const {
  Checkpoint ckpt("woi-stream");
  auto& meta = ckpt.metadata();
  meta["stream"] = std::string(stream_name(kind));
  meta["input_dim"] = std::to_string(classifier.input_dim());
  meta["hidden_dim"] = std::to_string(classifier.lstm.hidden_dim());
  meta["num_classes"] = std::to_string(classifier.num_classes());
  meta["train.lr"] = format_g17(config.lr);
  meta["train.epochs"] = std::to_string(config.epochs);
  meta["train.dropout_p"] = format_g17(config.dropout_p);
  meta["train.seed"] = std::to_string(config.seed);
  meta["train.batch_size"] = std::to_string(config.batch_size);
  add_classifier(ckpt, "model", classifier);
  ckpt.add("norm.mean", normalizer.mean);
  ckpt.add("norm.inv_std", normalizer.inv_std);
  ckpt.save(path);
}

StreamModel StreamModel::load(const std::filesystem::path& path) {
  const Checkpoint ckpt = Checkpoint::load(path, "woi-stream");
  StreamModel m;
  try {
    m.kind = parse_stream(ckpt.meta("stream"));
    const int d = std::stoi(ckpt.meta("input_dim"));
    const int h = std::stoi(ckpt.meta("hidden_dim"));
    const int c = std::stoi(ckpt.meta("num_classes"));
    m.classifier = get_classifier(ckpt, "model", d, h, c);
    m.normalizer.mean = ckpt.vector("norm.mean", d);
    m.normalizer.inv_std = ckpt.vector("norm.inv_std", d);
    m.config.lr = std::stod(ckpt.meta("train.lr"));
    m.config.epochs = std::stoi(ckpt.meta("train.epochs"));
    m.config.dropout_p = std::stod(ckpt.meta("train.dropout_p"));
    m.config.seed = std::stoull(ckpt.meta("train.seed"));
    m.config.batch_size = std::stoi(ckpt.meta("train.batch_size"));
  } catch (const std::logic_error& e) {
    throw ValidationError(path.string() + ": malformed metadata (" + e.what() + ")");
  }
  return m;
}

StreamTrainResult train_stream_model(StreamKind kind,
                                     std::span<const FeatureSequence> sequences,
                                     std::span<const int> labels, const TrainConfig& config,
                                     int hidden_units) {
  if (sequences.empty()) throw ValidationError("train_stream_model: no training data");
  if (sequences.size() != labels.size()) {
    throw ValidationError("train_stream_model: sequences and labels differ in length");
  }
  std::vector<Matrix> frames;
  frames.reserve(sequences.size());
  for (const auto& s : sequences) {
    if (s.kind != kind) throw ValidationError("train_stream_model: stream kind mismatch");
    s.validate();
    frames.push_back(s.frames);
  }
  StreamTrainResult r;
  r.model.kind = kind;
  r.model.config = config;
  r.model.normalizer = Normalizer::fit(frames);
  std::vector<LabeledSequence> data;
  data.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    data.push_back({r.model.normalizer.apply(frames[i]), labels[i]});
  }
  Rng init_rng(derive_seed(config.seed, "init"));
  r.model.classifier = SequenceClassifier::init(static_cast<int>(frames.front().cols()),
                                                hidden_units, kNumIntents, init_rng);
  r.epoch_loss = fit(r.model.classifier, data, config).epoch_loss;
  return r;
}

FusionPolicy FusionPolicy::uniform(std::size_t num_streams) {
  if (num_streams == 0) throw ValidationError("fusion needs at least one stream");
  FusionPolicy p;
  p.weights.assign(num_streams, 1.0 / static_cast<double>(num_streams));
  return p;
}

FusionPolicy FusionPolicy::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw ValidationError("fusion needs at least one stream");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("fusion weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw ValidationError("fusion weights are all zero");
  for (double& w : weights) w /= sum;
  return {std::move(weights), true};
}

FusionResult fuse(std::span<const Vector> per_stream, const FusionPolicy& policy) {
  if (per_stream.empty()) throw ValidationError("fuse: no streams");
  if (per_stream.size() != policy.weights.size()) {
    throw ValidationError("fuse: " + std::to_string(per_stream.size()) + " streams but " +
                          std::to_string(policy.weights.size()) + " weights");
  }
  const Eigen::Index c = per_stream.front().size();
  FusionResult r;
  r.fused = Vector::Zero(c);
  for (std::size_t s = 0; s < per_stream.size(); ++s) {
    if (per_stream[s].size() != c) throw ShapeError("fuse: distributions differ in length");
    for (Eigen::Index k = 0; k < c; ++k) r.fused(k) += policy.weights[s] * per_stream[s](k);
  }
  r.label = 0;
  for (Eigen::Index k = 1; k < c; ++k) {
    if (r.fused(k) > r.fused(r.label)) r.label = static_cast<int>(k);
  }
  r.confidence = r.fused(r.label);
  return r;
}

FusionPolicy derive_weights(std::span<const double> per_stream_f1) {
  for (double f : per_stream_f1) {
    if (!(f >= 0.0)) throw ValidationError("derive_weights: F1 scores must be >= 0");
  }
  try {
    return FusionPolicy::from_weights({per_stream_f1.begin(), per_stream_f1.end()});
  } catch (const ValidationError&) {
    throw ValidationError("derive_weights: all F1 scores are zero");
  }
}

Confusion::Confusion(int num_classes) : n_(num_classes) {
  if (num_classes < 1) throw ValidationError("confusion needs at least one class");
  counts_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
}

std::size_t Confusion::index(int t, int p) const {
  if (t < 0 || t >= n_ || p < 0 || p >= n_) throw ValidationError("confusion index out of range");
  return static_cast<std::size_t>(t) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(p);
}

void Confusion::add(int truth, int predicted) { ++counts_[index(truth, predicted)]; }

long Confusion::total() const {
  long t = 0;
  for (long c : counts_) t += c;
  return t;
}

long Confusion::support(int truth) const {
  long s = 0;
  for (int p = 0; p < n_; ++p) s += at(truth, p);
  return s;
}

long Confusion::predicted(int label) const {
  long s = 0;
  for (int t = 0; t < n_; ++t) s += at(t, label);
  return s;
}

long Confusion::correct() const {
  long s = 0;
  for (int k = 0; k < n_; ++k) s += at(k, k);
  return s;
}

double Confusion::accuracy() const {
  const long t = total();
  if (t == 0) throw ValidationError("accuracy of an empty confusion matrix");
  return static_cast<double>(correct()) / static_cast<double>(t);
}

Confusion& Confusion::operator+=(const Confusion& other) {
  if (other.n_ != n_) throw ShapeError("confusion matrices differ in class count");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

double macro_f1(const Confusion& m) {
  if (m.total() == 0) throw ValidationError("macro_f1 of an empty confusion matrix");
  double sum = 0.0;
  int counted = 0;
  for (int k = 0; k < m.num_classes(); ++k) {
    const long tp = m.at(k, k);
    const long fn = m.support(k) - tp;
    const long fp = m.predicted(k) - tp;
    if (tp + fn + fp == 0) continue;
    sum += 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    ++counted;
  }
  return sum / counted;
}

std::vector<StreamKind> IntentModels::kinds() const {
  std::vector<StreamKind> out;
  for (const auto& s : streams) out.push_back(s.kind);
  return out;
}

UtteranceScores classify_utterance(const IntentModels& models,
                                   std::span<const KeywordInput> keywords) {
  if (keywords.empty()) throw ValidationError("classify_utterance: no keywords");
  if (models.streams.empty()) throw ValidationError("classify_utterance: no stream models");
  UtteranceScores scores;
  for (const auto& model : models.streams) {
    std::vector<FeatureSequence> parts;
    parts.reserve(keywords.size());
    for (const auto& k : keywords) {
      parts.push_back(featurize_keyword(k, model.kind, models.resources));
    }
    scores.per_stream.push_back(model.predict(concatenate(parts)));
  }
  scores.fused = fuse(scores.per_stream, models.policy);
  return scores;
}

std::vector<UtteranceScores> classify_words(const IntentModels& models,
                                            std::span<const KeywordInput> keywords) {
  std::vector<UtteranceScores> out;
  out.reserve(keywords.size());
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    out.push_back(classify_utterance(models, keywords.subspan(i, 1)));
  }
  return out;
}

IntentModels train_intent_models(const Corpus& corpus, const TrainOptions& options,
                                 FeatureResources base, TrainReport* report) {
  if (options.streams.empty()) throw ValidationError("train: no streams requested");
  const auto& records = corpus.records();
  if (records.empty()) throw ValidationError("train: empty corpus");

  std::vector<std::vector<KeywordInput>> inputs;
  inputs.reserve(records.size());
  std::vector<int> labels;
  for (const auto& r : records) {
    inputs.push_back(keyword_inputs(r, corpus.load_audio(r), base.mfcc));
    labels.push_back(static_cast<int>(r.intent));
  }

  IntentModels models;
  models.resources = std::move(base);
  const auto wants = [&](StreamKind k) {
    return std::find(options.streams.begin(), options.streams.end(), k) !=
           options.streams.end();
  };
  if (wants(StreamKind::kSpeech2Vec)) {
    std::vector<FeatureSequence> segments;
    for (const auto& utt : inputs) {
      for (const auto& k : utt) segments.push_back(k.mfcc);
    }
    Speech2VecConfig cfg = options.speech2vec;
    cfg.seed = derive_seed(options.seed, "speech2vec");
    auto trained = train_speech2vec(segments, cfg);
    if (report) report->speech2vec_loss = trained.epoch_loss;
    models.resources.speech2vec = std::make_shared<const Speech2VecModel>(std::move(trained.model));
  }

  for (StreamKind kind : options.streams) {
    std::vector<FeatureSequence> sequences;
    sequences.reserve(inputs.size());
    for (const auto& utt : inputs) {
      std::vector<FeatureSequence> parts;
      for (const auto& k : utt) parts.push_back(featurize_keyword(k, kind, models.resources));
      sequences.push_back(concatenate(parts));
    }
    TrainConfig cfg = default_train_config(
        kind, derive_seed(options.seed, "stream/" + std::string(stream_name(kind))));
    const auto it = options.epochs.find(kind);
    if (it != options.epochs.end()) cfg.epochs = it->second;
    cfg.dropout_p = options.dropout_p;
    cfg.lr = options.lr;
    auto trained = train_stream_model(kind, sequences, labels, cfg, options.hidden_units);
    if (report) report->stream_loss[kind] = trained.epoch_loss;
    models.streams.push_back(std::move(trained.model));
  }
  models.policy = options.fusion_weights.empty()
                      ? FusionPolicy::uniform(models.streams.size())
                      : FusionPolicy::from_weights(options.fusion_weights);
  if (models.policy.weights.size() != models.streams.size()) {
    throw ValidationError("train: " + std::to_string(options.fusion_weights.size()) +
                          " fusion weights for " + std::to_string(models.streams.size()) +
                          " streams");
  }
  return models;
}

std::vector<std::filesystem::path> save_intent_models(const IntentModels& models,
                                                      const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  nlohmann::json fusion;
  fusion["streams"] = nlohmann::json::array();
  for (const auto& m : models.streams) {
    const auto path = dir / ("stream_" + std::string(stream_name(m.kind)) + ".ckpt");
    m.save(path);
    written.push_back(path);
    fusion["streams"].push_back(stream_name(m.kind));
    if (m.kind == StreamKind::kSpeech2Vec) {
      Checkpoint ckpt("woi-speech2vec");
      add_speech2vec(ckpt, "s2v", require(models.resources.speech2vec, m.kind,
                                          "a speech2vec model"));
      const auto s2v_path = dir / "speech2vec.ckpt";
      ckpt.save(s2v_path);
      written.push_back(s2v_path);
    }
  }
  fusion["weights"] = models.policy.weights;
  fusion["weighted"] = models.policy.weighted;
  const auto fusion_path = dir / "fusion.json";
  std::ofstream out(fusion_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + fusion_path.string());
  out << fusion.dump(2) << '\n';
  written.push_back(fusion_path);
  return written;
}

IntentModels load_intent_models(const std::filesystem::path& dir, FeatureResources base) {
  const auto fusion_path = dir / "fusion.json";
  std::ifstream in(fusion_path);
  if (!in) throw IoError("cannot open " + fusion_path.string());
  nlohmann::json fusion;
  try {
    in >> fusion;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fusion_path.string() + ": " + e.what());
  }
  IntentModels models;
  models.resources = std::move(base);
  try {
    for (const auto& name : fusion.at("streams")) {
      const StreamKind kind = parse_stream(name.get<std::string>());
      if (kind == StreamKind::kSpeech2Vec) {
        const Checkpoint ckpt = Checkpoint::load(dir / "speech2vec.ckpt", "woi-speech2vec");
        models.resources.speech2vec =
            std::make_shared<const Speech2VecModel>(get_speech2vec(ckpt, "s2v"));
      }
      StreamModel m = StreamModel::load(dir / ("stream_" + std::string(stream_name(kind)) + ".ckpt"));
      if (m.kind != kind) throw ValidationError("stream checkpoint kind mismatch");
      models.streams.push_back(std::move(m));
    }
    FusionPolicy policy;
    policy.weights = fusion.at("weights").get<std::vector<double>>();
    policy.weighted = fusion.at("weighted").get<bool>();
    models.policy = std::move(policy);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fusion_path.string() + ": " + e.what());
  }
  if (models.policy.weights.size() != models.streams.size()) {
    throw ValidationError(fusion_path.string() + ": weight count does not match streams");
  }
  return models;
}

}  // namespace woi
