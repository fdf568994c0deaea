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

#include "woi/checkpoint.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace woi {
namespace {

constexpr std::array<char, 8> kMagic = {'W', 'O', 'I', 'C', 'K', 'P', 'T', '\0'};
// Guards against absurd allocations from corrupt files.
constexpr std::uint32_t kMaxStringBytes = 1u << 20;
constexpr std::uint64_t kMaxBlockElems = 1ull << 28;

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t v = std::bit_cast<std::uint64_t>(d);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void get_bytes(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw ValidationError("checkpoint truncated");
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  get_bytes(in, reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  get_bytes(in, reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return std::bit_cast<double>(v);
}

std::string get_string(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  if (n > kMaxStringBytes) throw ValidationError("checkpoint string too long");
  std::string s(n, '\0');
  get_bytes(in, s.data(), n);
  return s;
}

}  // namespace

const std::string& Checkpoint::meta(const std::string& key) const {
  const auto it = metadata_.find(key);
  if (it == metadata_.end()) throw ValidationError("checkpoint missing metadata '" + key + "'");
  return it->second;
}

void Checkpoint::add(std::string name, Matrix block) {
  for (const auto& [n, _] : blocks_) {
    if (n == name) throw ValidationError("duplicate checkpoint block '" + name + "'");
  }
  blocks_.emplace_back(std::move(name), std::move(block));
}

void Checkpoint::add(std::string name, const Vector& block) {
  add(std::move(name), Matrix(block));
}

const Matrix& Checkpoint::matrix(const std::string& name, Eigen::Index rows,
                                 Eigen::Index cols) const {
  for (const auto& [n, m] : blocks_) {
    if (n != name) continue;
    if (m.rows() != rows || m.cols() != cols) {
      throw ValidationError("checkpoint block '" + name + "' has shape " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    }
    return m;
  }
  throw ValidationError("checkpoint missing block '" + name + "'");
}

Vector Checkpoint::vector(const std::string& name, Eigen::Index size) const {
  return matrix(name, size, 1).col(0);
}

void Checkpoint::write(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kCheckpointVersion);
  put_string(out, kind_);
  put_u32(out, static_cast<std::uint32_t>(metadata_.size()));
  for (const auto& [k, v] : metadata_) {
    put_string(out, k);
    put_string(out, v);
  }
  put_u32(out, static_cast<std::uint32_t>(blocks_.size()));
  for (const auto& [name, m] : blocks_) {
    put_string(out, name);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
    }
  }
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  write(out);
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint Checkpoint::read(std::istream& in) {
  std::array<char, 8> magic{};
  get_bytes(in, magic.data(), magic.size());
  if (magic != kMagic) throw ValidationError("not a checkpoint (bad magic)");
  const std::uint32_t version = get_u32(in);
  if (version != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt(get_string(in));
  const std::uint32_t n_meta = get_u32(in);
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string key = get_string(in);
    ckpt.metadata_[std::move(key)] = get_string(in);
  }
  const std::uint32_t n_blocks = get_u32(in);
  for (std::uint32_t i = 0; i < n_blocks; ++i) {
    std::string name = get_string(in);
    const std::uint32_t rows = get_u32(in);
    const std::uint32_t cols = get_u32(in);
    if (static_cast<std::uint64_t>(rows) * cols > kMaxBlockElems) {
      throw ValidationError("checkpoint block '" + name + "' too large");
    }
    Matrix m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = get_f64(in);
    }
    ckpt.add(std::move(name), std::move(m));
  }
  return ckpt;
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  try {
    return read(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

Checkpoint Checkpoint::load(const std::filesystem::path& path, const std::string& kind) {
  Checkpoint ckpt = load(path);
  if (ckpt.kind() != kind) {
    throw ValidationError(path.string() + ": expected a '" + kind + "' checkpoint, found '" +
                          ckpt.kind() + "'");
  }
  return ckpt;
}

void add_lstm(Checkpoint& ckpt, const std::string& prefix, const LstmParams& p) {
  ckpt.add(prefix + ".w", p.w);
  ckpt.add(prefix + ".u", p.u);
  ckpt.add(prefix + ".b", p.b);
}

LstmParams get_lstm(const Checkpoint& ckpt, const std::string& prefix, int input_dim,
                    int hidden_dim) {
  LstmParams p;
  p.w = ckpt.matrix(prefix + ".w", 4 * hidden_dim, input_dim);
  p.u = ckpt.matrix(prefix + ".u", 4 * hidden_dim, hidden_dim);
  p.b = ckpt.vector(prefix + ".b", 4 * hidden_dim);
  p.validate();
  return p;
}

void add_classifier(Checkpoint& ckpt, const std::string& prefix,
                    const SequenceClassifier& model) {
  add_lstm(ckpt, prefix + ".lstm", model.lstm);
  ckpt.add(prefix + ".head.w", model.head.w);
  ckpt.add(prefix + ".head.b", model.head.b);
}

SequenceClassifier get_classifier(const Checkpoint& ckpt, const std::string& prefix,
                                  int input_dim, int hidden_dim, int num_classes) {
  SequenceClassifier m;
  m.lstm = get_lstm(ckpt, prefix + ".lstm", input_dim, hidden_dim);
  m.head.w = ckpt.matrix(prefix + ".head.w", num_classes, hidden_dim);
  m.head.b = ckpt.vector(prefix + ".head.b", num_classes);
  return m;
}

}  // namespace woi
