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

// Parametric phoneme synthesis for the synthetic corpus: a pulse/noise
// excitation mix through three parallel two-pole resonators per phoneme.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "woi/corpus.h"

namespace woi {
namespace {

constexpr double kSampleRate = kDefaultSampleRate;

PhonemeVoiceProfile vowel(const char* p, double f1, double f2, double f3,
                          double dur_ms = 130.0) {
  return {p, {f1, f2, f3}, {90.0, 120.0, 170.0}, 0.05, dur_ms, 0.12};
}

PhonemeVoiceProfile sonorant(const char* p, double f1, double f2, double f3) {
  return {p, {f1, f2, f3}, {100.0, 150.0, 200.0}, 0.05, 70.0, 0.07};
}

PhonemeVoiceProfile obstruent(const char* p, double f1, double f2, double f3,
                              double noise, double dur_ms) {
  return {p, {f1, f2, f3}, {400.0, 700.0, 1000.0}, noise, dur_ms, 0.06};
}

std::vector<PhonemeVoiceProfile> build_profiles() {
  return {
      vowel("IY", 270, 2290, 3010),
      vowel("IH", 390, 1990, 2550, 110),
      vowel("EY", 480, 2200, 2800, 160),
      vowel("EH", 530, 1840, 2480, 120),
      vowel("AE", 660, 1720, 2410, 140),
      vowel("AA", 730, 1090, 2440, 140),
      vowel("AO", 570, 840, 2410, 140),
      vowel("AH", 520, 1190, 2390, 100),
      vowel("UH", 440, 1020, 2240, 110),
      vowel("UW", 300, 870, 2240, 140),
      vowel("OW", 500, 900, 2300, 160),
      vowel("ER", 490, 1350, 1690, 140),
      vowel("AY", 700, 1400, 2500, 180),
      vowel("AW", 700, 1100, 2400, 180),
      vowel("OY", 550, 1000, 2400, 180),
      sonorant("M", 250, 1100, 2300),
      sonorant("N", 250, 1700, 2600),
      sonorant("NG", 250, 2300, 2900),
      sonorant("L", 360, 1300, 2700),
      sonorant("R", 420, 1300, 1600),
      sonorant("W", 300, 700, 2200),
      sonorant("Y", 280, 2200, 3000),
      obstruent("P", 800, 1500, 2500, 0.9, 60),
      obstruent("B", 300, 1200, 2300, 0.5, 60),
      obstruent("T", 1800, 4000, 5500, 0.95, 60),
      obstruent("D", 400, 1800, 2800, 0.5, 60),
      obstruent("K", 1500, 2500, 3500, 0.9, 70),
      obstruent("G", 300, 1900, 2700, 0.5, 70),
      obstruent("F", 1500, 4500, 6500, 1.0, 100),
      obstruent("V", 300, 1500, 4500, 0.6, 90),
      obstruent("TH", 1400, 5000, 6800, 1.0, 100),
      obstruent("DH", 300, 1600, 5000, 0.6, 80),
      obstruent("S", 4500, 6000, 7500, 1.0, 110),
      obstruent("Z", 300, 4500, 6500, 0.6, 100),
      obstruent("SH", 2500, 3500, 5500, 1.0, 110),
      obstruent("ZH", 300, 2500, 4500, 0.6, 100),
      obstruent("HH", 500, 1500, 2500, 1.0, 80),
      obstruent("CH", 2500, 3800, 5500, 0.95, 110),
      obstruent("JH", 300, 2500, 4200, 0.6, 100),
  };
}

const std::vector<PhonemeVoiceProfile>& profiles() {
  static const std::vector<PhonemeVoiceProfile> table = build_profiles();
  return table;
}

// Two-pole resonator y[n] = a x[n] + b y[n-1] + c y[n-2].
class Resonator {
 public:
  Resonator(double center_hz, double width_hz) {
    const double r = std::exp(-std::numbers::pi * width_hz / kSampleRate);
    const double theta = 2.0 * std::numbers::pi * center_hz / kSampleRate;
    b_ = 2.0 * r * std::cos(theta);
    c_ = -r * r;
    a_ = 1.0 - b_ - c_;
  }

  double operator()(double x) {
    const double y = a_ * x + b_ * y1_ + c_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a_ = 0.0, b_ = 0.0, c_ = 0.0;
  double y1_ = 0.0, y2_ = 0.0;
};

constexpr std::array<double, 3> kBandGains = {1.0, 0.6, 0.35};

}  // namespace

const PhonemeVoiceProfile& voice_profile(std::string_view phoneme) {
  const std::string base = base_phoneme(phoneme);
  for (const auto& p : profiles()) {
    if (p.phoneme == base) return p;
  }
  throw ValidationError("no voice profile for phoneme '" + std::string(phoneme) + "'");
}

std::vector<PhonemeVoiceProfile> all_voice_profiles() { return profiles(); }

RenderedKeyword render_keyword(const PhonemeList& phones, double f0_hz, Rng& rng,
                               const SynthesisJitter& jitter) {
  if (phones.empty()) throw ValidationError("render_keyword: no phonemes");
  RenderedKeyword out;

  struct Piece {
    const PhonemeVoiceProfile* profile;
    std::array<double, 3> centers;
  };
  std::vector<Piece> pieces;
  double total_ms = 0.0;
  for (const auto& ph : phones) {
    const PhonemeVoiceProfile& prof = voice_profile(ph);
    const double dur =
        prof.nominal_duration_ms * (1.0 + rng.uniform(-jitter.duration_rel, jitter.duration_rel));
    Piece piece{&prof, {}};
    for (std::size_t b = 0; b < 3; ++b) {
      piece.centers[b] = prof.band_centers_hz[b] *
                         (1.0 + rng.uniform(-jitter.band_center_rel, jitter.band_center_rel));
    }
    pieces.push_back(piece);
    out.phone_durations_ms.push_back(dur);
    total_ms += dur;
  }

  const auto total_samples =
      static_cast<std::size_t>(std::llround(total_ms * kSampleRate / 1000.0));
  out.samples.assign(total_samples, 0.0);

  const double pulse_period = kSampleRate / f0_hz;
  const double pulse_amp = std::sqrt(pulse_period);
  double phase = 0.0;
  double cum_ms = 0.0;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    cum_ms += out.phone_durations_ms[p];
    const std::size_t end =
        p + 1 == pieces.size()
            ? total_samples
            : std::min(total_samples,
                       static_cast<std::size_t>(std::llround(cum_ms * kSampleRate / 1000.0)));
    const PhonemeVoiceProfile& prof = *pieces[p].profile;
    std::array<Resonator, 3> bands = {
        Resonator(pieces[p].centers[0], prof.band_widths_hz[0]),
        Resonator(pieces[p].centers[1], prof.band_widths_hz[1]),
        Resonator(pieces[p].centers[2], prof.band_widths_hz[2])};
    double energy = 0.0;
    for (std::size_t n = begin; n < end; ++n) {
      double pulse = 0.0;
      phase += 1.0;
      if (phase >= pulse_period) {
        phase -= pulse_period;
        pulse = pulse_amp;
      }
      const double excitation =
          (1.0 - prof.noise_fraction) * pulse + prof.noise_fraction * rng.normal();
      double y = 0.0;
      for (std::size_t b = 0; b < 3; ++b) y += kBandGains[b] * bands[b](excitation);
      out.samples[n] = y;
      energy += y * y;
    }
    if (end > begin && energy > 0.0) {
      const double rms = std::sqrt(energy / static_cast<double>(end - begin));
      const double gain = prof.rms_level / rms;
      for (std::size_t n = begin; n < end; ++n) out.samples[n] *= gain;
    }
    begin = end;
  }

  // 2 ms fades at the keyword edges.
  const std::size_t ramp = std::min<std::size_t>(32, total_samples / 2);
  for (std::size_t n = 0; n < ramp; ++n) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(n) / ramp);
    out.samples[n] *= g;
    out.samples[total_samples - 1 - n] *= g;
  }
  return out;
}

AudioBuffer background_noise(std::size_t num_samples, std::uint64_t seed) {
  Rng rng(seed);
  AudioBuffer audio;
  audio.samples.resize(num_samples);
  for (auto& s : audio.samples) {
    const double v = std::round(rng.normal() * kBackgroundNoiseStd * 32768.0);
    s = static_cast<float>(std::clamp(v, -32768.0, 32767.0) / 32768.0);
  }
  return audio;
}

}  // namespace woi
