// Copyright 2026 The slms Authors. All Rights Reserved.
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
#include "slms/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"

namespace slms {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

void validate(const Waveform& w) {
  if (w.samples.empty()) fail(ErrorKind::EmptyAudio, "waveform has no samples");
  if (w.sample_rate <= 0) {
    fail(ErrorKind::InvariantViolation, "sample_rate must be positive");
  }
  for (float x : w.samples) {
    if (!std::isfinite(x) || x < -1.0f || x > 1.0f) {
      fail(ErrorKind::InvariantViolation, "sample outside [-1, 1] or non-finite");
    }
  }
}

Waveform load_wav(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  ByteReader in(bytes, path.string());
  in.expect_magic("RIFF");
  in.u32();
  in.expect_magic("WAVE");

  FmtChunk fmt;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  while (in.remaining() >= 8 && !have_data) {
    const bool is_fmt = in.has_magic("fmt ");
    const bool is_data = in.has_magic("data");
    in.skip(4);
    const std::uint32_t size = in.u32();
    if (is_fmt) {
      if (size < 16) fail(ErrorKind::UnsupportedFormat, path.string() + ": short fmt chunk");
      const std::size_t start = in.position();
      fmt.format = in.u16();
      fmt.channels = in.u16();
      fmt.sample_rate = in.u32();
      in.u32();  // byte rate
      in.u16();  // block align
      fmt.bits_per_sample = in.u16();
      if (fmt.format == kFormatExtensible) {
        if (size < 40) fail(ErrorKind::UnsupportedFormat, path.string() + ": bad extensible fmt");
        in.u16();  // cb size
        in.u16();  // valid bits
        in.u32();  // channel mask
        fmt.format = in.u16();  // leading two bytes of the sub-format GUID
      }
      in.skip(size - (in.position() - start));
      have_fmt = true;
    } else if (is_data) {
      const std::size_t available = std::min<std::size_t>(size, in.remaining());
      data = std::span(bytes).subspan(in.position(), available);
      have_data = true;
    } else {
      in.skip(std::min<std::size_t>(size + (size & 1u), in.remaining()));
    }
    if (is_fmt && (size & 1u) && in.remaining() > 0) in.skip(1);
  }
  if (!have_fmt) fail(ErrorKind::UnsupportedFormat, path.string() + ": missing fmt chunk");
  if (!have_data) fail(ErrorKind::UnsupportedFormat, path.string() + ": missing data chunk");

  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits_per_sample == 16;
  const bool float32 = fmt.format == kFormatFloat && fmt.bits_per_sample == 32;
  if (!pcm16 && !float32) {
    fail(ErrorKind::UnsupportedFormat,
         path.string() + ": format code " + std::to_string(fmt.format) + " with " +
             std::to_string(fmt.bits_per_sample) + " bits (need PCM16 or float32)");
  }
  if (fmt.channels == 0 || fmt.sample_rate == 0) {
    fail(ErrorKind::UnsupportedFormat, path.string() + ": zero channels or sample rate");
  }

  const std::size_t bytes_per_sample = fmt.bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) fail(ErrorKind::EmptyAudio, path.string());

  ByteReader samples(data, path.string());
  Waveform w;
  w.sample_rate = static_cast<int>(fmt.sample_rate);
  w.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::uint16_t c = 0; c < fmt.channels; ++c) {
      double x;
      if (pcm16) {
        x = static_cast<std::int16_t>(samples.u16()) / 32768.0;
      } else {
        x = samples.f32();
        if (!std::isfinite(x)) fail(ErrorKind::InvariantViolation, path.string() + ": non-finite sample");
        x = std::clamp(x, -1.0, 1.0);
      }
      sum += x;
    }
    w.samples[i] = static_cast<float>(sum / fmt.channels);
  }
  return w;
}

void write_wav_channels(const std::filesystem::path& path,
                        std::span<const std::vector<float>> channels, int sample_rate,
                        WavEncoding encoding) {
  if (channels.empty()) fail(ErrorKind::InvalidArgument, "no channels to write");
  const std::size_t frames = channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != frames) fail(ErrorKind::InvalidArgument, "channel lengths differ");
  }
  const std::uint16_t n_channels = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
  const std::uint32_t block_align = n_channels * bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * block_align);

  ByteWriter out;
  out.magic("RIFF");
  out.u32(36 + data_size);
  out.magic("WAVE");
  out.magic("fmt ");
  out.u32(16);
  out.u16(encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
  out.u16(n_channels);
  out.u32(static_cast<std::uint32_t>(sample_rate));
  out.u32(static_cast<std::uint32_t>(sample_rate) * block_align);
  out.u16(static_cast<std::uint16_t>(block_align));
  out.u16(bits);
  out.magic("data");
  out.u32(data_size);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& ch : channels) {
      if (encoding == WavEncoding::Pcm16) {
        const double scaled = std::round(static_cast<double>(ch[i]) * 32768.0);
        out.u16(static_cast<std::uint16_t>(
            static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0))));
      } else {
        out.f32(ch[i]);
      }
    }
  }
  write_file_bytes(path, out.bytes());
}

void write_wav(const std::filesystem::path& path, const Waveform& w, WavEncoding encoding) {
  validate(w);
  const std::vector<float>* mono = &w.samples;
  write_wav_channels(path, std::span(mono, 1), w.sample_rate, encoding);
}

Waveform resample_linear(const Waveform& w, int target_rate) {
  if (target_rate <= 0) fail(ErrorKind::InvalidArgument, "target rate must be positive");
  validate(w);
  if (target_rate == w.sample_rate) return w;

  const std::size_t n = w.samples.size();
  const double ratio = static_cast<double>(w.sample_rate) / target_rate;
  const auto out_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * target_rate / w.sample_rate)));
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);
  for (std::size_t j = 0; j < out_len; ++j) {
    const double pos = static_cast<double>(j) * ratio;
    const auto left = static_cast<std::size_t>(std::floor(pos));
    if (left + 1 >= n) {
      out.samples[j] = w.samples[n - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(left);
    const double a = w.samples[left];
    const double b = w.samples[left + 1];
    out.samples[j] = static_cast<float>(a + (b - a) * frac);
  }
  return out;
}

Waveform peak_normalize(const Waveform& w) {
  validate(w);
  float peak = 0.0f;
  for (float x : w.samples) peak = std::max(peak, std::abs(x));
  if (peak == 0.0f) return w;
  Waveform out = w;
  for (float& x : out.samples) x = std::clamp(x / peak, -1.0f, 1.0f);
  return out;
}

}  // namespace slms
