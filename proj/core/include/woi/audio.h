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

#ifndef WOI_AUDIO_H_
#define WOI_AUDIO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace woi {

inline constexpr int kDefaultSampleRate = 16000;

// Mono PCM samples scaled to [-1, 1).
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate_hz = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
  std::span<const float> view() const { return samples; }
};

// Sample index nearest to time `t_s`.
std::size_t time_to_sample(double t_s, int sample_rate_hz);

// Samples in [start_s, end_s), clamped to the buffer.
std::span<const float> slice_seconds(const AudioBuffer& audio, double start_s,
                                     double end_s);

// RIFF/WAVE, 16-bit signed little-endian PCM, mono. Samples are rounded and
// clipped to the int16 range.
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);
AudioBuffer read_wav(const std::filesystem::path& path);

}  // namespace woi

#endif  // WOI_AUDIO_H_
