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

#include "support/fixtures.h"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

namespace woi::testing {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("woi-" + tag + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

AudioBuffer sine(double hz, double seconds, double amplitude, int sample_rate_hz) {
  AudioBuffer out;
  out.sample_rate_hz = sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::lround(seconds * sample_rate_hz));
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = static_cast<float>(
        amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / sample_rate_hz));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

TempDir& fixture_dir() {
  static TempDir dir("fixture");
  return dir;
}

}  // namespace

const Corpus& fixture_corpus() {
  static const Corpus corpus = [] {
    CorpusOptions opts;
    opts.seed = kFixtureSeed;
    opts.n_utterances = kFixtureUtterances;
    generate_corpus(opts, fixture_dir().path());
    return Corpus::open(fixture_dir().path());
  }();
  return corpus;
}

const IntentModels& fixture_models() {
  static const IntentModels models = [] {
    TrainOptions opts;
    opts.seed = 11;
    return train_intent_models(fixture_corpus(), opts, FeatureResources::bundled());
  }();
  return models;
}

}  // namespace woi::testing
