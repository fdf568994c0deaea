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

#include <cmath>
#include <fstream>
#include <sstream>

#include "support/fixtures.h"
#include "woi/corpus.h"
#include "woi/embeddings.h"

namespace woi {
namespace {

// Regression anchors for the 50-segment, 30-epoch autoencoder fixture.
constexpr double kS2vFirstLoss = 0.983902137826;
constexpr double kS2vFinalLoss = 0.544295248041;

EmbeddingLoadResult parse(const std::string& text, int dim = 0) {
  std::istringstream in(text);
  return parse_embedding_table(in, dim);
}

std::string parse_error(const std::string& text, int dim = 0) {
  try {
    parse(text, dim);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(EmbeddingTableTest, ParsesGloveText) {
  const auto r = parse("a 1 2 3 4\nb 0 0 0 1\nc -1 0.5 2e-3 7\n");
  EXPECT_EQ(r.table.size(), 3u);
  EXPECT_EQ(r.table.dim(), 4);
  EXPECT_EQ(r.duplicates, 0);
  EXPECT_DOUBLE_EQ(r.table.lookup("c")(2), 2e-3);
  EXPECT_THROW(r.table.lookup("d"), OovError);
}

TEST(EmbeddingTableTest, ErrorsCarryLineNumbers) {
  EXPECT_NE(parse_error("a 1 2 3\nb 1 2 3 4\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("a 1 2 x\n").find("non-numeric"), std::string::npos);
  EXPECT_NE(parse_error("a 1 2 3\n", 4), "");
}

TEST(EmbeddingTableTest, DuplicatesLastWins) {
  const auto r = parse("a 1 2\nb 3 4\na 5 6\n");
  EXPECT_EQ(r.duplicates, 1);
  EXPECT_EQ(r.table.lookup("a")(0), 5.0);
}

TEST(EmbeddingTableTest, WriteParseRoundTrip) {
  const auto words = vocabulary(default_keyword_map());
  const EmbeddingTable t = make_fixture_embeddings(words, 8, 3);
  std::ostringstream out;
  write_embedding_table(out, t);
  const auto back = parse(out.str(), 8);
  ASSERT_EQ(back.table.size(), t.size());
  for (const auto& [w, v] : t.entries()) {
    EXPECT_LE((back.table.lookup(w) - v).cwiseAbs().maxCoeff(), 5e-7) << w;
  }
}

TEST(EmbeddingTableTest, BundledFixtureCoversVocabulary) {
  const EmbeddingTable& t = bundled_embeddings();
  EXPECT_EQ(t.dim(), kDefaultEmbeddingDim);
  const auto words = vocabulary(default_keyword_map());
  const EmbeddingTable regen = make_fixture_embeddings(words, kDefaultEmbeddingDim,
                                                       kFixtureEmbeddingSeed);
  for (const auto& w : words) {
    ASSERT_TRUE(t.contains(w)) << w;
    EXPECT_NEAR(t.lookup(w).norm(), 1.0, 1e-4);
    EXPECT_LE((t.lookup(w) - regen.lookup(w)).cwiseAbs().maxCoeff(), 5e-7);
  }
}

TEST(EmbeddingTableTest, LoadIsIdempotent) {
  testing::TempDir dir("emb");
  std::ofstream(dir / "t.txt") << "x 1 2\ny 3 4\n";
  EXPECT_EQ(load_embedding_table(dir / "t.txt", 2).table,
            load_embedding_table(dir / "t.txt", 2).table);
  EXPECT_THROW(load_embedding_table(dir / "none.txt", 2), IoError);
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

TEST(Speech2VecTest, GradientCheckOnTinyComposite) {
  Rng rng(4);
  Speech2VecModel m = Speech2VecModel::init(3, 2, rng);
  for (auto s : m.params()) {
    for (double& v : s) v += 0.3 * rng.normal();
  }
  const Matrix x = random_matrix(2, 3, rng);
  Speech2VecModel grads = Speech2VecModel::zeros(3, 2);
  speech2vec_loss(m, x, &grads);
  const auto r = grad_check([&] { return speech2vec_loss(m, x); }, m.params(), grads.params());
  EXPECT_LT(r.max_rel_error, 1e-4);
  EXPECT_GT(r.num_checked, 0u);
}

struct Segments {
  std::vector<FeatureSequence> seqs;
  std::vector<std::string> words;
};

const Segments& synthetic_segments() {
  static const Segments s = [] {
    Segments out;
    const MfccExtractor ex;
    const std::vector<std::string> words = {"open", "stop", "park", "speed", "music",
                                            "weather", "route", "hurry", "door", "slow"};
    for (int i = 0; i < 5; ++i) {
      for (const auto& w : words) {
        Rng rng(derive_seed(5, w + "/" + std::to_string(i)));
        const auto r = render_keyword(bundled_lexicon().lookup(w), 95.0 + 8.0 * i, rng);
        std::vector<float> samples(r.samples.begin(), r.samples.end());
        out.seqs.push_back(ex.compute(samples));
        out.words.push_back(w);
      }
    }
    return out;
  }();
  return s;
}

const Speech2VecTrainResult& trained() {
  static const Speech2VecTrainResult r = [] {
    Speech2VecConfig cfg;
    cfg.epochs = 30;
    cfg.seed = 9;
    return train_speech2vec(synthetic_segments().seqs, cfg);
  }();
  return r;
}

TEST(Speech2VecTest, TrainingReducesReconstructionLoss) {
  const auto& r = trained();
  ASSERT_EQ(r.epoch_loss.size(), 30u);
  EXPECT_LT(r.epoch_loss.back(), r.epoch_loss.front());
  EXPECT_EQ(r.model.embedding_dim(), 100);
  EXPECT_NEAR(r.epoch_loss.front(), kS2vFirstLoss, 1e-8);
  EXPECT_NEAR(r.epoch_loss.back(), kS2vFinalLoss, 1e-8);
}

double cosine(const Vector& a, const Vector& b) { return a.dot(b) / (a.norm() * b.norm()); }

TEST(Speech2VecTest, SameWordEmbeddingsAreCloser) {
  const auto& seg = synthetic_segments();
  std::vector<Vector> e;
  for (const auto& s : seg.seqs) e.push_back(embed_segment(trained().model, s));
  double same = 0.0;
  double cross = 0.0;
  int n_same = 0;
  int n_cross = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      if (seg.words[i] == seg.words[j]) {
        same += cosine(e[i], e[j]);
        ++n_same;
      } else {
        cross += cosine(e[i], e[j]);
        ++n_cross;
      }
    }
  }
  EXPECT_GT(same / n_same, cross / n_cross);
}

TEST(Speech2VecTest, EmbeddingIsPureAndShaped) {
  const auto& seg = synthetic_segments();
  const Vector a = embed_segment(trained().model, seg.seqs[0]);
  const Vector b = embed_segment(trained().model, seg.seqs[0]);
  EXPECT_EQ(a.size(), 100);
  EXPECT_TRUE(a.allFinite());
  EXPECT_EQ(a, b);
  FeatureSequence wrong;
  wrong.frames = Matrix::Zero(4, 5);
  EXPECT_THROW(embed_segment(trained().model, wrong), ShapeError);
}

TEST(Speech2VecTest, ZeroEpochsIsSeededInit) {
  Speech2VecConfig cfg;
  cfg.epochs = 0;
  cfg.dim = 6;
  cfg.seed = 2;
  auto a = train_speech2vec(synthetic_segments().seqs, cfg);
  auto b = train_speech2vec(synthetic_segments().seqs, cfg);
  EXPECT_TRUE(a.epoch_loss.empty());
  EXPECT_TRUE(params_equal(a.model.params(), b.model.params()));
  Rng rng(derive_seed(2, "s2v/init"));
  Speech2VecModel init = Speech2VecModel::init(13, 6, rng);
  EXPECT_TRUE(params_equal(a.model.params(), init.params()));
  EXPECT_TRUE(embed_segment(a.model, synthetic_segments().seqs[3]).allFinite());
}

TEST(Speech2VecTest, RejectsTooFewSegments) {
  std::vector<FeatureSequence> few(synthetic_segments().seqs.begin(),
                                   synthetic_segments().seqs.begin() + 9);
  EXPECT_THROW(train_speech2vec(few, {}), ValidationError);
  EXPECT_THROW(train_speech2vec({}, {}), ValidationError);
}

TEST(Speech2VecTest, CheckpointRoundTrip) {
  Checkpoint c("s2v");
  add_speech2vec(c, "s2v", trained().model);
  std::stringstream buf;
  c.write(buf);
  Speech2VecModel back = get_speech2vec(Checkpoint::read(buf), "s2v");
  Speech2VecModel orig = trained().model;
  EXPECT_TRUE(params_equal(orig.params(), back.params()));
  EXPECT_EQ(back.normalizer.mean, orig.normalizer.mean);
  EXPECT_EQ(embed_segment(back, synthetic_segments().seqs[7]),
            embed_segment(orig, synthetic_segments().seqs[7]));
}

}  // namespace
}  // namespace woi
