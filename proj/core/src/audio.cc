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

#include "woi/audio.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "woi/common.h"

namespace woi {
namespace {

void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

std::size_t time_to_sample(double t_s, int sample_rate_hz) {
  if (!(t_s >= 0.0)) return 0;
  return static_cast<std::size_t>(std::llround(t_s * sample_rate_hz));
}

std::span<const float> slice_seconds(const AudioBuffer& audio, double start_s,
                                     double end_s) {
  const std::size_t n = audio.samples.size();
  const std::size_t b = std::min(time_to_sample(start_s, audio.sample_rate_hz), n);
  const std::size_t e =
      std::clamp(time_to_sample(end_s, audio.sample_rate_hz), b, n);
  return std::span<const float>(audio.samples).subspan(b, e - b);
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
  const auto n = static_cast<std::uint32_t>(audio.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::vector<char> bytes;
  bytes.reserve(44 + data_bytes);
  auto put_tag = [&](const char* tag) { bytes.insert(bytes.end(), tag, tag + 4); };
  put_tag("RIFF");
  put_u32(bytes, 36 + data_bytes);
  put_tag("WAVE");
  put_tag("fmt ");
  put_u32(bytes, 16);
  put_u16(bytes, 1);  // PCM
  put_u16(bytes, 1);  // mono
  put_u32(bytes, static_cast<std::uint32_t>(audio.sample_rate_hz));
  put_u32(bytes, static_cast<std::uint32_t>(audio.sample_rate_hz) * 2);
  put_u16(bytes, 2);
  put_u16(bytes, 16);
  put_tag("data");
  put_u32(bytes, data_bytes);
  for (float s : audio.samples) {
    const double scaled = std::round(static_cast<double>(s) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(bytes, static_cast<std::uint16_t>(v));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path.string());
  }

  AudioBuffer audio;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw IoError("truncated chunk in " + path.string());
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw IoError("short fmt chunk in " + path.string());
      const std::uint16_t format = get_u16(bytes.data() + body);
      const std::uint16_t channels = get_u16(bytes.data() + body + 2);
      audio.sample_rate_hz = static_cast<int>(get_u32(bytes.data() + body + 4));
      const std::uint16_t bits = get_u16(bytes.data() + body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw IoError("unsupported WAVE format (need 16-bit mono PCM): " +
                      path.string());
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw IoError("data chunk before fmt in " + path.string());
      const std::size_t n = size / 2;
      audio.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::int16_t>(get_u16(bytes.data() + body + 2 * i));
        audio.samples[i] = static_cast<float>(v / 32768.0);
      }
      return audio;
    }
    pos = body + size + (size & 1u);
  }
  throw IoError("no data chunk in " + path.string());
}

}  // namespace woi
