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
#include "slms/features.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"

namespace slms {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// FFTW planning is not thread-safe; executing a plan on new arrays is.
class R2cPlanCache {
 public:
  fftw_plan get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(static_cast<std::size_t>(n)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE);
    plans_.emplace(n, plan);
    return plan;
  }

  ~R2cPlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<int, fftw_plan> plans_;
};

R2cPlanCache& plan_cache() {
  static R2cPlanCache cache;
  return cache;
}

}  // namespace

void validate(const FeatureSequence& fs) {
  if (fs.num_frames == 0 || fs.dim == 0) {
    fail(ErrorKind::InvariantViolation, "feature sequence needs T >= 1 and D >= 1");
  }
  if (fs.values.size() != fs.num_frames * fs.dim) {
    fail(ErrorKind::DimensionMismatch, "feature storage does not match T*D");
  }
  if (!(fs.frame_hop > 0.0)) fail(ErrorKind::InvariantViolation, "frame_hop must be positive");
  for (float v : fs.values) {
    if (!std::isfinite(v)) fail(ErrorKind::InvariantViolation, "non-finite feature value");
  }
}

int LogMelConfig::window_samples(int sample_rate) const {
  return static_cast<int>(std::lround(window * sample_rate));
}

int LogMelConfig::hop_samples(int sample_rate) const {
  return static_cast<int>(std::lround(hop * sample_rate));
}

void LogMelConfig::validate(int sample_rate) const {
  if (n_mels < 1) fail(ErrorKind::InvalidArgument, "n_mels must be >= 1");
  if (!(mel_low > 0.0 && mel_low < mel_high && mel_high <= sample_rate / 2.0)) {
    fail(ErrorKind::InvalidArgument, "need 0 < mel_low < mel_high <= sample_rate/2");
  }
  if (!(hop > 0.0) || hop > window) fail(ErrorKind::InvalidArgument, "need 0 < hop <= window");
  if (hop_samples(sample_rate) < 1) fail(ErrorKind::InvalidArgument, "hop shorter than a sample");
  if (fft_size < window_samples(sample_rate)) {
    fail(ErrorKind::InvalidArgument, "fft_size " + std::to_string(fft_size) +
                                         " is shorter than the window (" +
                                         std::to_string(window_samples(sample_rate)) + ")");
  }
  if (!(floor > 0.0)) fail(ErrorKind::InvalidArgument, "floor must be positive");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> mel_filterbank(const LogMelConfig& cfg, int sample_rate) {
  cfg.validate(sample_rate);
  const int n_bins = cfg.fft_size / 2 + 1;
  const double mel_lo = hz_to_mel(cfg.mel_low);
  const double mel_hi = hz_to_mel(cfg.mel_high);
  std::vector<double> edges(static_cast<std::size_t>(cfg.n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(cfg.n_mels + 1));
  }
  std::vector<double> weights(static_cast<std::size_t>(cfg.n_mels) * n_bins, 0.0);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m];
    const double center = edges[m + 1];
    const double right = edges[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / cfg.fft_size;
      double w = 0.0;
      if (f > left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      weights[static_cast<std::size_t>(m) * n_bins + k] = w;
    }
  }
  return weights;
}

FeatureSequence extract_logmel(const Waveform& w, const LogMelConfig& cfg) {
  validate(w);
  cfg.validate(w.sample_rate);
  const int win = cfg.window_samples(w.sample_rate);
  const int hop = cfg.hop_samples(w.sample_rate);
  const auto n = static_cast<long>(w.samples.size());
  if (n < win) {
    fail(ErrorKind::TooShort, "waveform has " + std::to_string(n) + " samples, window needs " +
                                  std::to_string(win));
  }
  const std::size_t num_frames = 1 + static_cast<std::size_t>((n - win) / hop);
  const int n_bins = cfg.fft_size / 2 + 1;
  const auto bank = mel_filterbank(cfg, w.sample_rate);

  std::vector<double> hann(static_cast<std::size_t>(win));
  for (int i = 0; i < win; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (win - 1 > 0 ? win - 1 : 1));
  }

  fftw_plan plan = plan_cache().get(cfg.fft_size);
  std::unique_ptr<double, FftwFree> buf(fftw_alloc_real(static_cast<std::size_t>(cfg.fft_size)));
  std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(static_cast<std::size_t>(n_bins)));
  std::vector<double> power(static_cast<std::size_t>(n_bins));

  FeatureSequence out;
  out.num_frames = num_frames;
  out.dim = static_cast<std::size_t>(cfg.n_mels);
  out.values.resize(num_frames * out.dim);
  out.frame_hop = static_cast<double>(hop) / w.sample_rate;
  out.source_tag = "logmel" + std::to_string(cfg.n_mels);

  for (std::size_t t = 0; t < num_frames; ++t) {
    const std::size_t start = t * static_cast<std::size_t>(hop);
    double* frame = buf.get();
    for (int i = 0; i < cfg.fft_size; ++i) {
      frame[i] = i < win ? w.samples[start + static_cast<std::size_t>(i)] * hann[i] : 0.0;
    }
    fftw_execute_dft_r2c(plan, frame, spec.get());
    for (int k = 0; k < n_bins; ++k) {
      power[k] = spec.get()[k][0] * spec.get()[k][0] + spec.get()[k][1] * spec.get()[k][1];
    }
    auto row = out.frame(t);
    for (int m = 0; m < cfg.n_mels; ++m) {
      const double* wts = bank.data() + static_cast<std::size_t>(m) * n_bins;
      double energy = 0.0;
      for (int k = 0; k < n_bins; ++k) energy += wts[k] * power[k];
      row[m] = static_cast<float>(std::log(energy + cfg.floor));
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_features(const FeatureSequence& fs) {
  validate(fs);
  ByteWriter out;
  out.magic("SLMF");
  out.u32(kFeatureFileVersion);
  out.u32(static_cast<std::uint32_t>(fs.num_frames));
  out.u32(static_cast<std::uint32_t>(fs.dim));
  out.f32s(fs.values);
  return out.bytes();
}

FeatureSequence decode_features(std::span<const std::uint8_t> bytes, const std::string& what) {
  ByteReader in(bytes, what);
  in.expect_magic("SLMF");
  const auto version = in.u32();
  if (version != kFeatureFileVersion) {
    fail(ErrorKind::UnsupportedFormat, what + ": feature file version " + std::to_string(version));
  }
  FeatureSequence fs;
  fs.num_frames = in.u32();
  fs.dim = in.u32();
  if (fs.num_frames == 0 || fs.dim == 0) {
    fail(ErrorKind::InvariantViolation, what + ": T and D must be positive");
  }
  const std::size_t count = fs.num_frames * fs.dim;
  if (in.remaining() < count * 4) {
    fail(ErrorKind::TruncatedFile, what + ": header declares " + std::to_string(count) +
                                       " floats, payload holds " +
                                       std::to_string(in.remaining() / 4));
  }
  if (in.remaining() > count * 4) {
    fail(ErrorKind::DimensionMismatch, what + ": payload longer than declared T*D");
  }
  fs.values = in.f32s(count);
  fs.frame_hop = 0.020;
  fs.source_tag = "file";
  validate(fs);
  return fs;
}

void write_features(const FeatureSequence& fs, const std::filesystem::path& path) {
  write_file_bytes(path, encode_features(fs));
}

FeatureSequence read_features(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_features(bytes, path.string());
}

Waveform prepare_waveform(const Waveform& w, const FrontEndConfig& cfg) {
  Waveform out = w;
  if (out.sample_rate != cfg.target_rate) {
    if (!cfg.resample) {
      fail(ErrorKind::UnsupportedFormat, "sample rate " + std::to_string(out.sample_rate) +
                                             " Hz, expected " + std::to_string(cfg.target_rate));
    }
    out = resample_linear(out, cfg.target_rate);
  }
  if (cfg.peak_normalize) out = peak_normalize(out);
  return out;
}

FeatureSequence load_input_features(const std::filesystem::path& path, const FrontEndConfig& cfg) {
  if (path.extension() == ".slmf") {
    FeatureSequence fs = read_features(path);
    fs.source_tag = "external:" + path.filename().string();
    return fs;
  }
  return extract_logmel(prepare_waveform(load_wav(path), cfg), cfg.logmel);
}

}  // namespace slms
