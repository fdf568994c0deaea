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

#include "woi/embeddings.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "woi/bundled_data.h"
#include "woi/phonology.h"

namespace woi {

bool EmbeddingTable::contains(std::string_view word) const {
  return vectors_.contains(normalize_word(word));
}

const Vector& EmbeddingTable::lookup(std::string_view word) const {
  const auto it = vectors_.find(normalize_word(word));
  if (it == vectors_.end()) throw OovError(std::string(word));
  return it->second;
}

void EmbeddingTable::set(std::string_view word, Vector v) {
  if (v.size() != dim_) {
    throw ShapeError("embedding for '" + std::string(word) + "' has dim " +
                     std::to_string(v.size()) + ", table dim is " + std::to_string(dim_));
  }
  vectors_[normalize_word(word)] = std::move(v);
}

bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
  return a.dim_ == b.dim_ && a.vectors_ == b.vectors_;
}

EmbeddingLoadResult parse_embedding_table(std::istream& in, int expected_dim) {
  if (expected_dim < 0) throw ValidationError("expected_dim must be >= 0");
  EmbeddingLoadResult result{EmbeddingTable(expected_dim), 0};
  int dim = expected_dim;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    const std::string where = "embedding line " + std::to_string(line_no) + ": ";
    const int n = static_cast<int>(fields.size()) - 1;
    if (dim == 0) {
      if (n < 1) throw ValidationError(where + "no vector values");
      dim = n;
      result.table = EmbeddingTable(dim);
    }
    if (n != dim) {
      throw ValidationError(where + "expected " + std::to_string(dim) + " values, found " +
                            std::to_string(n));
    }
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
      const std::string& f = fields[static_cast<std::size_t>(i) + 1];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(value)) {
        throw ValidationError(where + "non-numeric value '" + f + "'");
      }
      v(i) = value;
    }
    if (result.table.contains(fields[0])) ++result.duplicates;
    result.table.set(fields[0], std::move(v));
  }
  return result;
}

EmbeddingLoadResult load_embedding_table(const std::filesystem::path& path,
                                         int expected_dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding table: " + path.string());
  try {
    return parse_embedding_table(in, expected_dim);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

EmbeddingTable make_fixture_embeddings(const std::vector<std::string>& words, int dim,
                                       std::uint64_t seed) {
  if (dim < 1) throw ValidationError("fixture dim must be >= 1");
  EmbeddingTable table(dim);
  for (const auto& w : words) {
    Rng rng(derive_seed(seed, "glove/" + normalize_word(w)));
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.normal();
    table.set(w, v / v.norm());
  }
  return table;
}

void write_embedding_table(std::ostream& out, const EmbeddingTable& table) {
  char buf[32];
  for (const auto& [word, v] : table.entries()) {
    out << word;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof(buf), " %.6f", v(i));
      out << buf;
    }
    out << '\n';
  }
}

const EmbeddingTable& bundled_embeddings() {
  static const EmbeddingTable table = [] {
    std::istringstream in{std::string(bundled::glove_fixture_text())};
    return parse_embedding_table(in, kDefaultEmbeddingDim).table;
  }();
  return table;
}

Speech2VecModel Speech2VecModel::zeros(int input_dim, int embedding_dim) {
  Speech2VecModel m;
  m.encoder = LstmParams::zeros(input_dim, embedding_dim);
  m.decoder = LstmParams::zeros(embedding_dim, input_dim);
  m.out_w = Matrix::Zero(input_dim, input_dim);
  m.out_b = Vector::Zero(input_dim);
  m.normalizer = Normalizer::identity(input_dim);
  return m;
}

Speech2VecModel Speech2VecModel::init(int input_dim, int embedding_dim, Rng& rng) {
  Speech2VecModel m;
  m.encoder = LstmParams::init(input_dim, embedding_dim, rng);
  m.decoder = LstmParams::init(embedding_dim, input_dim, rng);
  m.out_w = Matrix::Zero(input_dim, input_dim);
  for (Eigen::Index i = 0; i < m.out_w.size(); ++i) m.out_w.data()[i] = rng.uniform(-0.08, 0.08);
  m.out_b = Vector::Zero(input_dim);
  m.normalizer = Normalizer::identity(input_dim);
  return m;
}

ParamList Speech2VecModel::params() {
  ParamList out = encoder.params();
  for (auto s : decoder.params()) out.push_back(s);
  out.emplace_back(out_w.data(), static_cast<std::size_t>(out_w.size()));
  out.emplace_back(out_b.data(), static_cast<std::size_t>(out_b.size()));
  return out;
}

double speech2vec_loss(const Speech2VecModel& model, const Matrix& x, Speech2VecModel* grads) {
  const Eigen::Index T = x.rows();
  const Eigen::Index D = x.cols();
  if (D != model.input_dim()) {
    throw ShapeError("speech2vec: segment dim " + std::to_string(D) + " != " +
                     std::to_string(model.input_dim()));
  }
  LstmTrace enc_trace, dec_trace;
  const LstmOutput enc = lstm_forward(model.encoder, x, grads ? &enc_trace : nullptr);
  const Matrix dec_in = enc.h_final.transpose().replicate(T, 1);
  const LstmOutput dec = lstm_forward(model.decoder, dec_in, grads ? &dec_trace : nullptr);
  Matrix y = dec.h * model.out_w.transpose();
  y.rowwise() += model.out_b.transpose();
  const Matrix diff = y - x;
  const double n = static_cast<double>(T * D);
  const double loss = diff.squaredNorm() / n;
  if (grads) {
    const Matrix dy = diff * (2.0 / n);
    grads->out_w.noalias() += dy.transpose() * dec.h;
    grads->out_b += dy.colwise().sum().transpose();
    const Matrix dh_dec = dy * model.out_w;
    const Matrix dx_dec = lstm_backward(model.decoder, dec_trace, dh_dec, grads->decoder);
    Matrix dh_enc = Matrix::Zero(T, model.embedding_dim());
    dh_enc.row(T - 1) = dx_dec.colwise().sum();
    lstm_backward(model.encoder, enc_trace, dh_enc, grads->encoder);
  }
  return loss;
}

Speech2VecTrainResult train_speech2vec(std::span<const FeatureSequence> segments,
                                       const Speech2VecConfig& config) {
  if (segments.empty()) throw ValidationError("train_speech2vec: no segments");
  if (segments.size() < 10) {
    throw ValidationError("train_speech2vec: need at least 10 segments, got " +
                          std::to_string(segments.size()));
  }
  if (config.dim < 1) throw ConfigError("speech2vec dim must be >= 1");
  if (config.epochs < 0) throw ConfigError("speech2vec epochs must be >= 0");
  if (!(config.lr > 0.0)) throw ConfigError("speech2vec lr must be > 0");
  const int D = segments.front().dim();
  std::vector<Matrix> raw;
  raw.reserve(segments.size());
  for (const auto& s : segments) {
    s.validate();
    if (s.dim() != D) throw ShapeError("train_speech2vec: segments differ in dimension");
    raw.push_back(s.frames);
  }

  Rng init_rng(derive_seed(config.seed, "s2v/init"));
  Speech2VecTrainResult result{Speech2VecModel::init(D, config.dim, init_rng), {}};
  result.model.normalizer = Normalizer::fit(raw);
  std::vector<Matrix> data;
  data.reserve(raw.size());
  for (const auto& m : raw) data.push_back(result.model.normalizer.apply(m));

  Rng order_rng(derive_seed(config.seed, "s2v/order"));
  Adam adam(config.lr);
  Speech2VecModel grads = Speech2VecModel::zeros(D, config.dim);
  const ParamList params = result.model.params();
  const ParamList grad_list = grads.params();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double total = 0.0;
    for (std::size_t idx : order_rng.permutation(data.size())) {
      zero(grad_list);
      total += speech2vec_loss(result.model, data[idx], &grads);
      adam.step(params, grad_list);
    }
    result.epoch_loss.push_back(total / static_cast<double>(data.size()));
  }
  return result;
}

Vector embed_segment(const Speech2VecModel& model, const FeatureSequence& segment) {
  if (segment.dim() != model.input_dim()) {
    throw ShapeError("embed_segment: segment dim " + std::to_string(segment.dim()) +
                     " != encoder input " + std::to_string(model.input_dim()));
  }
  return lstm_forward(model.encoder, model.normalizer.apply(segment.frames)).h_final;
}

void add_speech2vec(Checkpoint& ckpt, const std::string& prefix, const Speech2VecModel& m) {
  ckpt.metadata()[prefix + ".input_dim"] = std::to_string(m.input_dim());
  ckpt.metadata()[prefix + ".dim"] = std::to_string(m.embedding_dim());
  add_lstm(ckpt, prefix + ".encoder", m.encoder);
  add_lstm(ckpt, prefix + ".decoder", m.decoder);
  ckpt.add(prefix + ".out_w", m.out_w);
  ckpt.add(prefix + ".out_b", m.out_b);
  ckpt.add(prefix + ".norm.mean", m.normalizer.mean);
  ckpt.add(prefix + ".norm.inv_std", m.normalizer.inv_std);
}

Speech2VecModel get_speech2vec(const Checkpoint& ckpt, const std::string& prefix) {
  const int d = std::stoi(ckpt.meta(prefix + ".input_dim"));
  const int n = std::stoi(ckpt.meta(prefix + ".dim"));
  Speech2VecModel m;
  m.encoder = get_lstm(ckpt, prefix + ".encoder", d, n);
  m.decoder = get_lstm(ckpt, prefix + ".decoder", n, d);
  m.out_w = ckpt.matrix(prefix + ".out_w", d, d);
  m.out_b = ckpt.vector(prefix + ".out_b", d);
  m.normalizer.mean = ckpt.vector(prefix + ".norm.mean", d);
  m.normalizer.inv_std = ckpt.vector(prefix + ".norm.inv_std", d);
  return m;
}

}  // namespace woi
