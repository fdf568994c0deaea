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

// Shared test fixtures: scratch directories, tones and a small seeded corpus
// with models trained on it (built once per test process).

#ifndef WOI_TESTS_SUPPORT_FIXTURES_H_
#define WOI_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <string>

#include "woi/audio.h"
#include "woi/corpus.h"
#include "woi/intent.h"

namespace woi::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

AudioBuffer sine(double hz, double seconds, double amplitude = 1.0,
                 int sample_rate_hz = kDefaultSampleRate);

std::string read_file(const std::filesystem::path& path);

inline constexpr std::uint64_t kFixtureSeed = 7;
inline constexpr int kFixtureUtterances = 90;

// generate_corpus(seed 7, n 90) into a process-wide scratch directory.
const Corpus& fixture_corpus();

// All four streams trained on the whole fixture corpus with default options.
const IntentModels& fixture_models();

}  // namespace woi::testing

#endif  // WOI_TESTS_SUPPORT_FIXTURES_H_
