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

// Intent classification from spotted keywords: per-stream featurization,
// per-stream LSTM classifiers, softmax fusion and the metrics used to score
// them.

#ifndef WOI_INTENT_H_
#define WOI_INTENT_H_

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "woi/checkpoint.h"
#include "woi/corpus.h"
#include "woi/dsp.h"
#include "woi/embeddings.h"
#include "woi/neural.h"
#include "woi/phonology.h"

namespace woi {

inline constexpr int kHiddenUnits = 20;
inline constexpr double kDropout = 0.5;
inline constexpr double kLearningRate = 0.001;

// Epochs per stream: acoustic 30, phone 20, word2vec and speech2vec 15.
int default_epochs(StreamKind kind);
TrainConfig default_train_config(StreamKind kind, std::uint64_t seed);

// Everything needed to turn a keyword into features for any stream. Missing
// members are only an error when a stream that needs them is featurized.
struct FeatureResources {
  MfccExtractor mfcc;
  std::shared_ptr<const Lexicon> lexicon;
  std::shared_ptr<const DistinctiveFeatureTable> features;
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::shared_ptr<const Speech2VecModel> speech2vec;

  // Bundled lexicon, feature table and word vectors; no speech2vec model.
  static FeatureResources bundled();
};

// One keyword as seen by the classifier: its word label and its MFCCs.
struct KeywordInput {
  std::string word;
  FeatureSequence mfcc;
};

// MFCCs of each manifest keyword span.
std::vector<KeywordInput> keyword_inputs(const UtteranceRecord& record,
                                         const AudioBuffer& audio,
                                         const MfccExtractor& extractor);

// acoustic: MFCC frames; phone: one distinctive-feature row per phoneme;
// word2vec / speech2vec: a single 1 x E row.
FeatureSequence featurize_keyword(const KeywordInput& keyword, StreamKind kind,
                                  const FeatureResources& resources);

std::vector<FeatureSequence> featurize_utterance(const UtteranceRecord& record,
                                                 const AudioBuffer& audio, StreamKind kind,
                                                 const FeatureResources& resources);

// Time-ordered row concatenation. Throws on empty input or mixed kinds/dims.
FeatureSequence concatenate(std::span<const FeatureSequence> sequences);

// Input dimension of a stream under the given resources.
int stream_input_dim(StreamKind kind, const FeatureResources& resources);

struct StreamModel {
  StreamKind kind = StreamKind::kAcoustic;
  SequenceClassifier classifier;
  Normalizer normalizer;
  TrainConfig config;

  // Eval-mode class distribution. Throws ValidationError on a kind mismatch.
  Vector predict(const FeatureSequence& features) const;

  void save(const std::filesystem::path& path) const;
  static StreamModel load(const std::filesystem::path& path);
};

struct StreamTrainResult {
  StreamModel model;
  std::vector<double> epoch_loss;
};

// Fits the normalizer on the training frames, then the classifier.
StreamTrainResult train_stream_model(StreamKind kind,
                                     std::span<const FeatureSequence> sequences,
                                     std::span<const int> labels, const TrainConfig& config,
                                     int hidden_units = kHiddenUnits);

struct FusionPolicy {
  std::vector<double> weights;  // non-negative, sums to 1
  bool weighted = false;

  static FusionPolicy uniform(std::size_t num_streams);
  // Normalizes; throws ValidationError on negative or all-zero weights.
  static FusionPolicy from_weights(std::vector<double> weights);
};

struct FusionResult {
  Vector fused;
  int label = 0;  // argmax, lowest index on ties
  double confidence = 0.0;
};

// Weighted sum of the stream distributions, accumulated in stream order.
FusionResult fuse(std::span<const Vector> per_stream, const FusionPolicy& policy);

// w_s = f1_s / sum(f1). Throws ValidationError if all are zero or any is
// negative.
FusionPolicy derive_weights(std::span<const double> per_stream_f1);

class Confusion {
 public:
  explicit Confusion(int num_classes = kNumIntents);

  int num_classes() const { return n_; }
  void add(int truth, int predicted);
  long at(int truth, int predicted) const { return counts_[index(truth, predicted)]; }
  long total() const;
  long support(int truth) const;
  long predicted(int label) const;
  long correct() const;
  // Throws ValidationError when empty.
  double accuracy() const;
  Confusion& operator+=(const Confusion& other);

 private:
  std::size_t index(int t, int p) const;

  int n_;
  std::vector<long> counts_;
};

// Per-class F1 = 2TP / (2TP + FP + FN); classes with no support and no
// predictions are left out of the mean. Throws ValidationError when empty.
double macro_f1(const Confusion& confusion);

// Trained stream models plus the fusion policy over them, in stream order.
struct IntentModels {
  std::vector<StreamModel> streams;
  FusionPolicy policy;
  FeatureResources resources;

  std::vector<StreamKind> kinds() const;
};

struct UtteranceScores {
  std::vector<Vector> per_stream;  // parallel to IntentModels::streams
  FusionResult fused;
};

// Utterance level: each stream sees the concatenation of all keywords.
UtteranceScores classify_utterance(const IntentModels& models,
                                   std::span<const KeywordInput> keywords);

// Word level: one score per keyword.
std::vector<UtteranceScores> classify_words(const IntentModels& models,
                                            std::span<const KeywordInput> keywords);

// Training on a whole corpus (the `train` command).
struct TrainOptions {
  std::uint64_t seed = 0;
  std::vector<StreamKind> streams = all_streams();
  std::map<StreamKind, int> epochs;  // overrides default_epochs
  int hidden_units = kHiddenUnits;
  double dropout_p = kDropout;
  double lr = kLearningRate;
  Speech2VecConfig speech2vec;  // seed is derived from `seed`
  std::vector<double> fusion_weights;  // empty = uniform
};

struct TrainReport {
  std::map<StreamKind, std::vector<double>> stream_loss;
  std::vector<double> speech2vec_loss;
};

// Requires the corpus vocabulary to be covered by `base` resources.
IntentModels train_intent_models(const Corpus& corpus, const TrainOptions& options,
                                 FeatureResources base, TrainReport* report = nullptr);

// Checkpoint layout under `dir`: stream_<name>.ckpt per stream, plus
// speech2vec.ckpt when that stream is present and fusion.json.
std::vector<std::filesystem::path> save_intent_models(const IntentModels& models,
                                                      const std::filesystem::path& dir);
IntentModels load_intent_models(const std::filesystem::path& dir, FeatureResources base);

// k-fold evaluation.
struct EvalOptions {
  int k = 5;
  std::uint64_t seed = 0;
  std::vector<StreamKind> streams = all_streams();
  std::map<StreamKind, int> epochs;
  int hidden_units = kHiddenUnits;
  double dropout_p = kDropout;
  double lr = kLearningRate;
  Speech2VecConfig speech2vec;  // seed is re-derived per fold
};

struct ConditionResult {
  std::string name;  // "1", "1,2,3", "new weights", ...
  std::vector<StreamKind> streams;
  bool weighted = false;
  Confusion utterance;
  Confusion word;
  double utterance_accuracy = 0.0;
  double word_accuracy = 0.0;
  double utterance_f1 = 0.0;
  double word_f1 = 0.0;
};

struct EvalReport {
  int folds = 0;
  int utterances = 0;
  std::vector<ConditionResult> rows;
  // Cross-fitted weights per fold for the "new weights" row.
  std::vector<std::vector<double>> fold_weights;

  // Throws ValidationError if absent.
  const ConditionResult& row(const std::string& name) const;
};

// Rows: every single stream, every subset of three or more streams when
// at least three are requested (the full set last), and "new weights" when
// more than one stream is requested. Confusions are pooled over the folds'
// test sets. Fold i's weights come from per-stream utterance-level F1 on the
// other folds' test sets; speech2vec is retrained per fold on fold-train
// keywords only.
EvalReport evaluate_kfold(const Corpus& corpus, const EvalOptions& options,
                          FeatureResources base);

// Label for a subset, e.g. "1,2,3".
std::string subset_name(std::span<const StreamKind> streams);

std::string report_json(const EvalReport& report);
// Aligned text table; every number printed with four decimals.
std::string report_table(const EvalReport& report);

}  // namespace woi

#endif  // WOI_INTENT_H_
