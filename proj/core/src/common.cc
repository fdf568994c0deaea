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

#include "woi/common.h"

#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <numbers>

namespace woi {
namespace {

constexpr std::array<std::string_view, kNumIntents> kIntentNames = {
    "door", "pull", "stop", "slow", "dest", "park", "route", "fast", "other"};

constexpr std::array<std::string_view, kNumStreamKinds> kStreamNames = {
    "acoustic", "phone", "word2vec", "speech2vec"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view intent_name(Intent intent) {
  const int id = static_cast<int>(intent);
  if (id < 0 || id >= kNumIntents) {
    throw ValidationError("intent id out of range: " + std::to_string(id));
  }
  return kIntentNames[static_cast<std::size_t>(id)];
}

Intent parse_intent(std::string_view name) {
  const std::string lowered = to_lower(trim(name));
  // Longer names used in free-form descriptions of the classes.
  if (lowered == "faster") return Intent::kFast;
  if (lowered == "slower") return Intent::kSlow;
  if (lowered == "destination") return Intent::kDest;
  for (int i = 0; i < kNumIntents; ++i) {
    if (kIntentNames[static_cast<std::size_t>(i)] == lowered) {
      return static_cast<Intent>(i);
    }
  }
  throw ValidationError("unknown intent class: '" + std::string(name) + "'");
}

std::vector<Intent> all_intents() {
  std::vector<Intent> out;
  for (int i = 0; i < kNumIntents; ++i) out.push_back(static_cast<Intent>(i));
  return out;
}

std::string_view stream_name(StreamKind kind) {
  return kStreamNames[static_cast<std::size_t>(kind)];
}

StreamKind parse_stream(std::string_view name_or_number) {
  const std::string s = to_lower(trim(name_or_number));
  for (int i = 0; i < kNumStreamKinds; ++i) {
    if (s == kStreamNames[static_cast<std::size_t>(i)] ||
        s == std::to_string(i + 1)) {
      return static_cast<StreamKind>(i);
    }
  }
  if (s == "mfcc") return StreamKind::kAcoustic;
  if (s == "phones" || s == "phonemes") return StreamKind::kPhone;
  if (s == "glove" || s == "word") return StreamKind::kWord2Vec;
  if (s == "s2v") return StreamKind::kSpeech2Vec;
  throw ValidationError("unknown feature stream: '" +
                        std::string(name_or_number) + "'");
}

int stream_number(StreamKind kind) { return static_cast<int>(kind) + 1; }

std::vector<StreamKind> all_streams() {
  return {StreamKind::kAcoustic, StreamKind::kPhone, StreamKind::kWord2Vec,
          StreamKind::kSpeech2Vec};
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
  // FNV-1a over the tag, mixed with the root.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(root) ^ h);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ValidationError("Rng::index on empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % n);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  shuffle(p);
  return p;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace woi
