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

// Micro-benchmarks for the hot paths: feature extraction, DTW, the LSTM
// forward pass, one training epoch and fusion.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "woi/dsp.h"
#include "woi/intent.h"
#include "woi/neural.h"

namespace woi {
namespace {

std::vector<float> tone(double seconds) {
  std::vector<float> x(static_cast<std::size_t>(seconds * kDefaultSampleRate));
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<float>(0.3 * std::sin(2.0 * std::numbers::pi * 440.0 * i / kDefaultSampleRate));
  }
  return x;
}

Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

void BM_Mfcc(benchmark::State& state) {
  const MfccExtractor extractor;
  const auto x = tone(static_cast<double>(state.range(0)) / 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(extractor.compute(x));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_Mfcc)->Arg(500)->Arg(3000)->Unit(benchmark::kMicrosecond);

void BM_Dtw(benchmark::State& state) {
  Rng rng(1);
  const int n = static_cast<int>(state.range(0));
  const Matrix a = random_matrix(n, 13, rng);
  const Matrix b = random_matrix(n + n / 4, 13, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dtw_distance(a, b));
}
BENCHMARK(BM_Dtw)->Arg(40)->Arg(80)->Arg(160)->Unit(benchmark::kMicrosecond);

void BM_LstmForward(benchmark::State& state) {
  Rng rng(2);
  const int dim = static_cast<int>(state.range(0));
  const SequenceClassifier model = SequenceClassifier::init(dim, kHiddenUnits, kNumIntents, rng);
  const Matrix x = random_matrix(static_cast<int>(state.range(1)), dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(predict(model, x));
}
BENCHMARK(BM_LstmForward)->Args({13, 100})->Args({22, 12})->Args({100, 3})
    ->Unit(benchmark::kMicrosecond);

void BM_TrainEpoch(benchmark::State& state) {
  Rng rng(3);
  std::vector<LabeledSequence> data;
  for (int i = 0; i < 64; ++i) {
    data.push_back({random_matrix(60, 13, rng), i % kNumIntents});
  }
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) {
    state.PauseTiming();
    Rng init(4);
    SequenceClassifier model = SequenceClassifier::init(13, kHiddenUnits, kNumIntents, init);
    state.ResumeTiming();
    benchmark::DoNotOptimize(fit(model, data, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(data.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_Fuse(benchmark::State& state) {
  Rng rng(5);
  std::vector<Vector> ps;
  for (int s = 0; s < 4; ++s) ps.push_back(softmax(random_matrix(kNumIntents, 1, rng).col(0)));
  const FusionPolicy policy = FusionPolicy::from_weights({0.4, 0.3, 0.2, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(fuse(ps, policy));
}
BENCHMARK(BM_Fuse);

}  // namespace
}  // namespace woi

BENCHMARK_MAIN();
