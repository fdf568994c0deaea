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

#include "woi/dsp.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

namespace woi {

int MfccConfig::frame_samples() const {
  return static_cast<int>(std::lround(frame_len_ms * sample_rate_hz / 1000.0));
}

int MfccConfig::hop_samples() const {
  return static_cast<int>(std::lround(hop_ms * sample_rate_hz / 1000.0));
}

void MfccConfig::validate() const {
  if (sample_rate_hz <= 0) throw ConfigError("sample rate must be positive");
  if (!(hop_ms > 0.0) || !(frame_len_ms > hop_ms)) {
    throw ConfigError("MFCC framing requires frame_len_ms > hop_ms > 0");
  }
  if (n_fft < frame_samples() || (n_fft & (n_fft - 1)) != 0) {
    throw ConfigError("n_fft must be a power of two >= frame length");
  }
  if (n_coeffs < 1 || n_coeffs > n_mel || n_mel > n_fft / 2) {
    throw ConfigError("MFCC requires 1 <= n_coeffs <= n_mel <= n_fft/2");
  }
  if (!(log_floor > 0.0)) throw ConfigError("log_floor must be positive");
}

void FeatureSequence::validate() const {
  if (frames.rows() < 1) throw ValidationError("feature sequence has no frames");
  if (!frames.allFinite()) {
    throw ValidationError("feature sequence has non-finite entries");
  }
}

int num_frames(std::size_t num_samples, int frame_samples, int hop_samples) {
  if (num_samples < static_cast<std::size_t>(frame_samples)) return 0;
  return static_cast<int>((num_samples - static_cast<std::size_t>(frame_samples)) /
                          static_cast<std::size_t>(hop_samples)) +
         1;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MfccExtractor::MfccExtractor(const MfccConfig& config) : config_(config) {
  config_.validate();
  const int frame = config_.frame_samples();
  window_.resize(static_cast<std::size_t>(frame));
  for (int n = 0; n < frame; ++n) {
    window_[static_cast<std::size_t>(n)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (frame - 1));
  }

  const int bins = config_.n_fft / 2 + 1;
  const double nyquist = config_.sample_rate_hz / 2.0;
  const double mel_hi = hz_to_mel(nyquist);
  std::vector<double> edges(static_cast<std::size_t>(config_.n_mel + 2));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_hi * static_cast<double>(i) /
                         static_cast<double>(config_.n_mel + 1));
  }
  filterbank_ = Matrix::Zero(config_.n_mel, bins);
  center_hz_.resize(static_cast<std::size_t>(config_.n_mel));
  for (int m = 0; m < config_.n_mel; ++m) {
    const double left = edges[static_cast<std::size_t>(m)];
    const double center = edges[static_cast<std::size_t>(m + 1)];
    const double right = edges[static_cast<std::size_t>(m + 2)];
    center_hz_[static_cast<std::size_t>(m)] = center;
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * config_.sample_rate_hz / config_.n_fft;
      double w = 0.0;
      if (f > left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      filterbank_(m, k) = w;
    }
  }

  // Orthonormal DCT-II.
  const int n = config_.n_mel;
  dct_.resize(config_.n_coeffs, n);
  for (int k = 0; k < config_.n_coeffs; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int j = 0; j < n; ++j) {
      dct_(k, j) = scale * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    }
  }
}

void MfccExtractor::check_input(std::span<const float> samples) const {
  if (samples.size() < static_cast<std::size_t>(config_.frame_samples())) {
    throw ValidationError("audio shorter than one frame (" +
                          std::to_string(samples.size()) + " < " +
                          std::to_string(config_.frame_samples()) + " samples)");
  }
  for (float s : samples) {
    if (!std::isfinite(s)) throw ValidationError("non-finite sample in audio");
  }
}

Matrix MfccExtractor::log_mel(std::span<const float> samples) const {
  check_input(samples);
  const int frame = config_.frame_samples();
  const int hop = config_.hop_samples();
  const int t_count = num_frames(samples.size(), frame, hop);
  const int bins = config_.n_fft / 2 + 1;

  Eigen::FFT<double> fft;
  std::vector<double> buffer(static_cast<std::size_t>(config_.n_fft));
  std::vector<std::complex<double>> spectrum;
  Vector power(bins);
  Matrix out(t_count, config_.n_mel);
  for (int t = 0; t < t_count; ++t) {
    const float* x = samples.data() + static_cast<std::ptrdiff_t>(t) * hop;
    std::fill(buffer.begin(), buffer.end(), 0.0);
    double prev = x[0];
    for (int n = 0; n < frame; ++n) {
      const double cur = x[n];
      buffer[static_cast<std::size_t>(n)] =
          (cur - config_.preemphasis * prev) * window_[static_cast<std::size_t>(n)];
      prev = cur;
    }
    fft.fwd(spectrum, buffer);
    for (int k = 0; k < bins; ++k) power(k) = std::norm(spectrum[static_cast<std::size_t>(k)]);
    const Vector energies = filterbank_ * power;
    for (int m = 0; m < config_.n_mel; ++m) {
      out(t, m) = std::log(std::max(energies(m), config_.log_floor));
    }
  }
  return out;
}

FeatureSequence MfccExtractor::compute(std::span<const float> samples) const {
  const Matrix logmel = log_mel(samples);
  FeatureSequence seq;
  seq.kind = StreamKind::kAcoustic;
  seq.frame_hop_s = config_.hop_ms / 1000.0;
  seq.frames = logmel * dct_.transpose();
  return seq;
}

FeatureSequence mfcc(const AudioBuffer& audio, const MfccConfig& config) {
  if (audio.sample_rate_hz != config.sample_rate_hz) {
    throw ValidationError("audio sample rate " + std::to_string(audio.sample_rate_hz) +
                          " does not match MFCC config " +
                          std::to_string(config.sample_rate_hz));
  }
  return MfccExtractor(config).compute(audio.view());
}

double frame_rms(std::span<const float> frame) {
  if (frame.empty()) return 0.0;
  double acc = 0.0;
  for (float s : frame) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / static_cast<double>(frame.size()));
}

EnergyVad::EnergyVad(double threshold_db_rel, int window_frames)
    : ratio_(std::pow(10.0, threshold_db_rel / 20.0)),
      window_frames_(static_cast<std::size_t>(std::max(window_frames, 1))) {}

bool EnergyVad::push(double rms) {
  history_.push_back(rms);
  if (history_.size() > window_frames_) history_.pop_front();
  std::vector<double> sorted(history_.begin(), history_.end());
  const auto rank = static_cast<std::ptrdiff_t>(0.1 * static_cast<double>(sorted.size() - 1));
  std::nth_element(sorted.begin(), sorted.begin() + rank, sorted.end());
  floor_ = sorted[static_cast<std::size_t>(rank)];
  return rms > floor_ * ratio_;
}

std::vector<bool> energy_vad(const AudioBuffer& audio, const VadConfig& config) {
  if (audio.samples.empty()) throw ValidationError("energy_vad on empty audio");
  const int frame =
      static_cast<int>(std::lround(config.frame_ms * audio.sample_rate_hz / 1000.0));
  const int hop = static_cast<int>(std::lround(config.hop_ms * audio.sample_rate_hz / 1000.0));
  const int window = static_cast<int>(std::lround(config.window_s * 1000.0 / config.hop_ms));
  EnergyVad vad(config.threshold_db_rel, window);
  const int t_count = num_frames(audio.samples.size(), frame, hop);
  std::vector<bool> flags(static_cast<std::size_t>(t_count));
  for (int t = 0; t < t_count; ++t) {
    const auto frame_view = audio.view().subspan(static_cast<std::size_t>(t) * hop,
                                                 static_cast<std::size_t>(frame));
    flags[static_cast<std::size_t>(t)] = vad.push(frame_rms(frame_view));
  }
  return flags;
}

DtwResult dtw_align(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("dtw: dimension mismatch (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.cols()) + ")");
  }
  if (a.rows() < 1 || b.rows() < 1) throw ShapeError("dtw: empty sequence");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  Matrix cost(n, m);
  Eigen::MatrixXi len(n, m);
  // 0 = diagonal, 1 = from (i-1, j), 2 = from (i, j-1)
  Eigen::MatrixXi from(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double local = (a.row(i) - b.row(j)).norm();
      if (i == 0 && j == 0) {
        cost(i, j) = local;
        len(i, j) = 1;
        from(i, j) = -1;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      int best_len = std::numeric_limits<int>::max();
      int best_from = -1;
      auto consider = [&](Eigen::Index pi, Eigen::Index pj, int tag) {
        const double c = cost(pi, pj);
        const int l = len(pi, pj);
        if (c < best || (c == best && l < best_len)) {
          best = c;
          best_len = l;
          best_from = tag;
        }
      };
      if (i > 0 && j > 0) consider(i - 1, j - 1, 0);
      if (i > 0) consider(i - 1, j, 1);
      if (j > 0) consider(i, j - 1, 2);
      cost(i, j) = local + best;
      len(i, j) = best_len + 1;
      from(i, j) = best_from;
    }
  }

  DtwResult result;
  result.distance = cost(n - 1, m - 1) / len(n - 1, m - 1);
  Eigen::Index i = n - 1;
  Eigen::Index j = m - 1;
  while (true) {
    result.path.emplace_back(static_cast<int>(i), static_cast<int>(j));
    const int f = from(i, j);
    if (f < 0) break;
    if (f == 0) {
      --i;
      --j;
    } else if (f == 1) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

double dtw_distance(const Matrix& a, const Matrix& b) { return dtw_align(a, b).distance; }

double dtw_distance(const FeatureSequence& a, const FeatureSequence& b) {
  return dtw_distance(a.frames, b.frames);
}

Normalizer Normalizer::fit(std::span<const Matrix> sequences) {
  if (sequences.empty()) throw ValidationError("Normalizer::fit on no data");
  const Eigen::Index dim = sequences.front().cols();
  Vector sum = Vector::Zero(dim);
  Vector sum_sq = Vector::Zero(dim);
  double count = 0.0;
  for (const Matrix& m : sequences) {
    if (m.cols() != dim) throw ShapeError("Normalizer::fit: ragged dimensions");
    sum += m.colwise().sum().transpose();
    sum_sq += m.array().square().colwise().sum().matrix().transpose();
    count += static_cast<double>(m.rows());
  }
  if (count < 1.0) throw ValidationError("Normalizer::fit on empty sequences");
  Normalizer norm;
  norm.mean = sum / count;
  norm.inv_std.resize(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    const double var = std::max(sum_sq(d) / count - norm.mean(d) * norm.mean(d), 0.0);
    const double sd = std::sqrt(var);
    norm.inv_std(d) = sd > 1e-8 ? 1.0 / sd : 1.0;
  }
  return norm;
}

Normalizer Normalizer::identity(int dim) {
  return Normalizer{Vector::Zero(dim), Vector::Ones(dim)};
}

Matrix Normalizer::apply(const Matrix& frames) const {
  if (frames.cols() != mean.size()) {
    throw ShapeError("Normalizer::apply: expected dim " + std::to_string(mean.size()) +
                     ", got " + std::to_string(frames.cols()));
  }
  Matrix out = frames.rowwise() - mean.transpose();
  out.array().rowwise() *= inv_std.transpose().array();
  return out;
}

}  // namespace woi
