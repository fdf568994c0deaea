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

// Binary checkpoint container. All integers are little-endian.
//
//   magic      8 bytes  "WOICKPT\0"
//   version    u32      kCheckpointVersion
//   kind       string   (u32 length + bytes)
//   n_meta     u32, then n_meta x (key string, value string), keys sorted
//   n_blocks   u32, then n_blocks x
//              (name string, rows u32, cols u32, rows*cols f64 row-major)
//
// Vectors are stored as (n x 1) blocks.

#ifndef WOI_CHECKPOINT_H_
#define WOI_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "woi/common.h"
#include "woi/neural.h"

namespace woi {

inline constexpr std::uint32_t kCheckpointVersion = 1;

class Checkpoint {
 public:
  Checkpoint() = default;
  explicit Checkpoint(std::string kind) : kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  // Throws ValidationError if the key is missing.
  const std::string& meta(const std::string& key) const;

  void add(std::string name, Matrix block);
  void add(std::string name, const Vector& block);
  // Throws ValidationError if missing or not rows x cols.
  const Matrix& matrix(const std::string& name, Eigen::Index rows, Eigen::Index cols) const;
  Vector vector(const std::string& name, Eigen::Index size) const;
  const std::vector<std::pair<std::string, Matrix>>& blocks() const { return blocks_; }

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  // Rejects bad magic, unknown versions and truncated data.
  static Checkpoint read(std::istream& in);
  static Checkpoint load(const std::filesystem::path& path);
  // Like load, but also requires the given kind.
  static Checkpoint load(const std::filesystem::path& path, const std::string& kind);

 private:
  std::string kind_;
  std::map<std::string, std::string> metadata_;
  std::vector<std::pair<std::string, Matrix>> blocks_;
};

void add_lstm(Checkpoint& ckpt, const std::string& prefix, const LstmParams& p);
LstmParams get_lstm(const Checkpoint& ckpt, const std::string& prefix, int input_dim,
                    int hidden_dim);
void add_classifier(Checkpoint& ckpt, const std::string& prefix,
                    const SequenceClassifier& model);
SequenceClassifier get_classifier(const Checkpoint& ckpt, const std::string& prefix,
                                  int input_dim, int hidden_dim, int num_classes);

}  // namespace woi

#endif  // WOI_CHECKPOINT_H_
