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

// Signal front end: MFCC extraction, energy VAD and DTW.

#ifndef WOI_DSP_H_
#define WOI_DSP_H_

#include <cstddef>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "woi/audio.h"
#include "woi/common.h"

namespace woi {

struct MfccConfig {
  int sample_rate_hz = kDefaultSampleRate;
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  int n_fft = 512;
  int n_mel = 26;
  int n_coeffs = 13;
  double preemphasis = 0.97;
  double log_floor = 1e-10;

  int frame_samples() const;
  int hop_samples() const;
  // Throws ConfigError.
  void validate() const;
};

// A time-major T x D feature matrix for one keyword in one stream.
struct FeatureSequence {
  Matrix frames;
  double frame_hop_s = 0.0;  // 0 for symbolic streams
  StreamKind kind = StreamKind::kAcoustic;

  int length() const { return static_cast<int>(frames.rows()); }
  int dim() const { return static_cast<int>(frames.cols()); }
  // T >= 1 and all entries finite; throws ValidationError.
  void validate() const;
};

// Number of full frames: floor((n - frame) / hop) + 1, or 0 if n < frame.
int num_frames(std::size_t num_samples, int frame_samples, int hop_samples);

// Per-frame Hann-windowed, pre-emphasized power spectrum -> triangular mel
// filterbank -> log (floored) -> orthonormal DCT-II. Each frame is processed
// independently of its neighbours, so a sub-range of a signal yields the
// same frames as the matching rows of the whole.
class MfccExtractor {
 public:
  explicit MfccExtractor(const MfccConfig& config = {});

  const MfccConfig& config() const { return config_; }

  // Throws ValidationError on short input or non-finite samples.
  FeatureSequence compute(std::span<const float> samples) const;
  // T x n_mel floored log filterbank energies.
  Matrix log_mel(std::span<const float> samples) const;

  // Filter i spans FFT bins with weights rising from edges[i] to centers[i]
  // and falling to edges[i + 2]; frequencies in Hz.
  const std::vector<double>& mel_center_hz() const { return center_hz_; }
  const Matrix& filterbank() const { return filterbank_; }  // n_mel x (n_fft/2+1)
  const Matrix& dct() const { return dct_; }                // n_coeffs x n_mel

 private:
  Vector power_spectrum(std::span<const float> frame) const;
  void check_input(std::span<const float> samples) const;

  MfccConfig config_;
  std::vector<double> window_;
  Matrix filterbank_;
  Matrix dct_;
  std::vector<double> center_hz_;
};

FeatureSequence mfcc(const AudioBuffer& audio, const MfccConfig& config = {});

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Rectangular-window RMS of one frame.
double frame_rms(std::span<const float> frame);

// Incremental energy VAD. A frame is speech iff its RMS exceeds the noise
// floor times 10^(threshold_db_rel / 20), where the noise floor is the 10th
// percentile of frame RMS over the trailing window (current frame included).
class EnergyVad {
 public:
  EnergyVad(double threshold_db_rel, int window_frames);

  bool push(double rms);
  double noise_floor() const { return floor_; }

 private:
  double ratio_;
  std::size_t window_frames_;
  std::deque<double> history_;
  double floor_ = 0.0;
};

struct VadConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double threshold_db_rel = 12.0;
  double window_s = 2.0;
};

// One flag per full frame. Throws ValidationError on empty input.
std::vector<bool> energy_vad(const AudioBuffer& audio, const VadConfig& config = {});

struct DtwResult {
  double distance = 0.0;  // accumulated cost / path length
  std::vector<std::pair<int, int>> path;  // (row of a, row of b), start to end
};

// Classic DTW with steps {(1,0),(0,1),(1,1)} and Euclidean local cost. Ties
// prefer the shorter path, which keeps the result symmetric.
DtwResult dtw_align(const Matrix& a, const Matrix& b);
double dtw_distance(const Matrix& a, const Matrix& b);
double dtw_distance(const FeatureSequence& a, const FeatureSequence& b);

// Per-dimension standardization fitted on a set of frames.
struct Normalizer {
  Vector mean;
  Vector inv_std;

  static Normalizer fit(std::span<const Matrix> sequences);
  static Normalizer identity(int dim);
  int dim() const { return static_cast<int>(mean.size()); }
  Matrix apply(const Matrix& frames) const;
};

}  // namespace woi

#endif  // WOI_DSP_H_
