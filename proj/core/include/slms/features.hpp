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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "slms/audio_io.hpp"

namespace slms {

/// T x D frame-major matrix of continuous features. T, D >= 1, entries finite,
/// frame_hop > 0.
struct FeatureSequence {
  std::size_t num_frames = 0;
  std::size_t dim = 0;
  std::vector<float> values;  // num_frames * dim, row-major
  double frame_hop = 0.020;
  std::string source_tag;

  std::span<const float> frame(std::size_t t) const {
    return std::span(values).subspan(t * dim, dim);
  }
  std::span<float> frame(std::size_t t) { return std::span(values).subspan(t * dim, dim); }
};

void validate(const FeatureSequence& fs);

struct LogMelConfig {
  int n_mels = 40;
  double window = 0.025;   // seconds
  double hop = 0.020;      // seconds; one frame per token
  int fft_size = 512;      // samples; must cover the window
  double mel_low = 20.0;   // Hz
  double mel_high = 7600.0;
  double floor = 1e-10;

  int window_samples(int sample_rate) const;
  int hop_samples(int sample_rate) const;
  /// Throws InvalidArgument when the config is inconsistent with `sample_rate`.
  void validate(int sample_rate) const;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filterbank weights, n_mels rows by (fft_size/2 + 1) columns,
/// row-major. Filter m rises from edge m to edge m+1 and falls to edge m+2,
/// with the n_mels + 2 edges equally spaced on the mel scale.
std::vector<double> mel_filterbank(const LogMelConfig& cfg, int sample_rate);

/// Frames are log(mel energies + floor) of the Hann-windowed power spectrum.
/// T = 1 + floor((n - window) / hop). Throws TooShort below one window.
FeatureSequence extract_logmel(const Waveform& w, const LogMelConfig& cfg = {});

inline constexpr std::uint32_t kFeatureFileVersion = 1;

/// "SLMF" | u32 version | u32 T | u32 D | T*D float32, all little-endian.
void write_features(const FeatureSequence& fs, const std::filesystem::path& path);
FeatureSequence read_features(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_features(const FeatureSequence& fs);
FeatureSequence decode_features(std::span<const std::uint8_t> bytes, const std::string& what);

/// Audio front end applied before feature extraction.
struct FrontEndConfig {
  LogMelConfig logmel;
  int target_rate = kCanonicalSampleRate;
  bool resample = true;  // false: a rate mismatch is an error
  bool peak_normalize = false;
};

Waveform prepare_waveform(const Waveform& w, const FrontEndConfig& cfg);

/// Loads features for one input file: ".slmf" files are read as stored
/// features, anything else is decoded as WAV and run through the log-mel encoder.
FeatureSequence load_input_features(const std::filesystem::path& path, const FrontEndConfig& cfg);

}  // namespace slms
