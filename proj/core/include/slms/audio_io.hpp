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
#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace slms {

inline constexpr int kCanonicalSampleRate = 16000;

/// Mono audio. Samples are finite and lie in [-1, 1]; sample_rate > 0.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = kCanonicalSampleRate;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Throws InvariantViolation / EmptyAudio when `w` breaks the Waveform invariants.
void validate(const Waveform& w);

/// Reads a RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float samples.
/// PCM16 is scaled by 1/32768. Multi-channel input is downmixed by the
/// per-sample mean of the channels. Float samples outside [-1, 1] are clipped.
Waveform load_wav(const std::filesystem::path& path);

enum class WavEncoding { Pcm16, Float32 };

/// Writes a mono file. PCM16 rounds x*32768 and saturates to the int16 range.
void write_wav(const std::filesystem::path& path, const Waveform& w,
               WavEncoding encoding = WavEncoding::Pcm16);

/// Writes interleaved multi-channel data; used by tests and the demo corpus.
void write_wav_channels(const std::filesystem::path& path,
                        std::span<const std::vector<float>> channels, int sample_rate,
                        WavEncoding encoding = WavEncoding::Pcm16);

/// Linear-interpolation resampling. Output length is round(n * target / source),
/// output sample j reads source position j * source / target and holds the
/// last sample past the end. Returns the input unchanged when rates match.
Waveform resample_linear(const Waveform& w, int target_rate);

/// Scales so that max |x| == 1. An all-zero signal is returned unchanged.
Waveform peak_normalize(const Waveform& w);

}  // namespace slms
