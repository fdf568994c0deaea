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

#ifndef WOI_COMMON_H_
#define WOI_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace woi {

// Time-major matrices: one row per frame / time step.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Out-of-vocabulary lookup (lexicon or embedding table).
class OovError : public Error {
 public:
  explicit OovError(std::string word)
      : Error("out-of-vocabulary word: '" + word + "'"), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

// The nine intent classes, ids contiguous from 0.
enum class Intent : int {
  kDoor = 0,
  kPull,
  kStop,
  kSlow,
  kDest,
  kPark,
  kRoute,
  kFast,
  kOther,
};

inline constexpr int kNumIntents = 9;

std::string_view intent_name(Intent intent);
// Throws ValidationError for unknown names.
Intent parse_intent(std::string_view name);
std::vector<Intent> all_intents();

// The four feature streams, numbered 1..4 in reports.
enum class StreamKind : int {
  kAcoustic = 0,
  kPhone,
  kWord2Vec,
  kSpeech2Vec,
};

inline constexpr int kNumStreamKinds = 4;

std::string_view stream_name(StreamKind kind);
StreamKind parse_stream(std::string_view name_or_number);
int stream_number(StreamKind kind);  // 1-based
std::vector<StreamKind> all_streams();

// Seed namespacing: a child seed derived from (root, tag) so components draw
// from independent streams while a single root seed controls a command.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag);

// Deterministic RNG. The standard distributions are implementation-defined,
// so the transforms live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();   // standard normal, Box-Muller
  std::size_t index(std::size_t n);  // uniform in [0, n)

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);
// Splits on runs of ASCII whitespace.
std::vector<std::string> split_ws(std::string_view s);
std::string_view trim(std::string_view s);

}  // namespace woi

#endif  // WOI_COMMON_H_
