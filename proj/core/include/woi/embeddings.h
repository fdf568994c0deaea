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

// Word-vector tables (GloVe text format) and the acoustic word embedding
// autoencoder.

#ifndef WOI_EMBEDDINGS_H_
#define WOI_EMBEDDINGS_H_

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "woi/checkpoint.h"
#include "woi/common.h"
#include "woi/dsp.h"
#include "woi/neural.h"

namespace woi {

inline constexpr int kDefaultEmbeddingDim = 100;
inline constexpr std::uint64_t kFixtureEmbeddingSeed = 100;

class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim = 0) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool contains(std::string_view word) const;
  // Throws OovError.
  const Vector& lookup(std::string_view word) const;
  // Replaces an existing entry; throws ShapeError on a dimension mismatch.
  void set(std::string_view word, Vector v);
  const std::map<std::string, Vector>& entries() const { return vectors_; }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b);

 private:
  int dim_;
  std::map<std::string, Vector> vectors_;
};

struct EmbeddingLoadResult {
  EmbeddingTable table;
  int duplicates = 0;  // later rows replace earlier ones
};

// One `word v1 ... vE` row per line. expected_dim = 0 takes the dimension
// from the first row. Errors name the offending line.
EmbeddingLoadResult parse_embedding_table(std::istream& in, int expected_dim);
EmbeddingLoadResult load_embedding_table(const std::filesystem::path& path, int expected_dim);

// Seeded Gaussian vectors scaled to unit length, one per word.
EmbeddingTable make_fixture_embeddings(const std::vector<std::string>& words, int dim,
                                       std::uint64_t seed);
// Six decimals per value, words in sorted order.
void write_embedding_table(std::ostream& out, const EmbeddingTable& table);

// The 100-d fixture covering the default keyword vocabulary.
const EmbeddingTable& bundled_embeddings();

// Sequence autoencoder: the encoder's final hidden state is the embedding;
// the decoder sees that embedding at every step and reconstructs the
// (normalized) input frames through a linear output layer.
struct Speech2VecModel {
  LstmParams encoder;  // D -> N
  LstmParams decoder;  // N -> D
  Matrix out_w;        // D x D
  Vector out_b;        // D
  Normalizer normalizer;

  int input_dim() const { return encoder.input_dim(); }
  int embedding_dim() const { return encoder.hidden_dim(); }

  static Speech2VecModel zeros(int input_dim, int embedding_dim);
  static Speech2VecModel init(int input_dim, int embedding_dim, Rng& rng);
  ParamList params();
};

// Mean squared reconstruction error over all T x D entries of an already
// normalized segment. Accumulates gradients when `grads` is non-null.
double speech2vec_loss(const Speech2VecModel& model, const Matrix& normalized,
                       Speech2VecModel* grads = nullptr);

struct Speech2VecConfig {
  int dim = kDefaultEmbeddingDim;
  int epochs = 10;
  double lr = 0.001;
  std::uint64_t seed = 0;
};

struct Speech2VecTrainResult {
  Speech2VecModel model;
  std::vector<double> epoch_loss;
};

// Needs at least 10 acoustic segments of equal dimension.
Speech2VecTrainResult train_speech2vec(std::span<const FeatureSequence> segments,
                                       const Speech2VecConfig& config);

// Final encoder hidden state (length N). Throws ShapeError on a dimension
// mismatch.
Vector embed_segment(const Speech2VecModel& model, const FeatureSequence& segment);

void add_speech2vec(Checkpoint& ckpt, const std::string& prefix, const Speech2VecModel& m);
Speech2VecModel get_speech2vec(const Checkpoint& ckpt, const std::string& prefix);

}  // namespace woi

#endif  // WOI_EMBEDDINGS_H_
