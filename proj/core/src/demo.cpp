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

#include "slms/demo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "slms/audio_io.hpp"
#include "slms/error.hpp"
#include "slms/ngram.hpp"

namespace slms {
namespace {

std::string padded(std::size_t v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

constexpr std::size_t kPhones = 10;

struct Phone {
  double f0;
  std::array<double, 2> formants;
};

struct PhoneChain {
  std::vector<Phone> phones;
  std::vector<std::array<std::size_t, 2>> next;
};

PhoneChain make_chain(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> f0(110.0, 220.0);
  std::uniform_real_distribution<double> f1(300.0, 900.0);
  std::uniform_real_distribution<double> f2(1000.0, 2800.0);
  std::uniform_int_distribution<std::size_t> pick(0, kPhones - 1);
  PhoneChain chain;
  for (std::size_t p = 0; p < kPhones; ++p) chain.phones.push_back({f0(rng), {f1(rng), f2(rng)}});
  for (std::size_t p = 0; p < kPhones; ++p) {
    std::size_t a = (p + 1 + pick(rng) % (kPhones - 1)) % kPhones;
    std::size_t b = a;
    while (b == a || b == p) b = pick(rng);
    chain.next.push_back({a, b});
  }
  return chain;
}

// Harmonics of f0 shaped by two resonances, with a raised-cosine envelope.
void render_phone(const Phone& ph, std::size_t samples, std::vector<float>& out) {
  const double sr = kCanonicalSampleRate;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / sr;
    double x = 0.0;
    for (int h = 1; h * ph.f0 < 4000.0; ++h) {
      const double f = h * ph.f0;
      double gain = 0.0;
      for (double fm : ph.formants) gain += 1.0 / (1.0 + std::pow((f - fm) / 120.0, 2.0));
      x += gain * std::sin(2.0 * std::numbers::pi * f * t);
    }
    const double env = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                            static_cast<double>(samples));
    out.push_back(static_cast<float>(0.08 * env * x));
  }
}

Waveform render_utterance(const PhoneChain& chain, std::size_t num_phones, double shuffle_prob,
                          double snr_db, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, kPhones - 1);
  std::uniform_int_distribution<std::size_t> dur(1600, 3200);  // 100-200 ms
  std::bernoulli_distribution branch(0.3);
  std::bernoulli_distribution broken(shuffle_prob);
  Waveform w;
  std::size_t cur = pick(rng);
  for (std::size_t k = 0; k < num_phones; ++k) {
    render_phone(chain.phones[cur], dur(rng), w.samples);
    cur = broken(rng) ? pick(rng) : chain.next[cur][branch(rng) ? 1 : 0];
  }
  if (std::isfinite(snr_db)) {
    double power = 0.0;
    for (float x : w.samples) power += static_cast<double>(x) * x;
    power /= static_cast<double>(w.samples.size());
    std::normal_distribution<double> noise(0.0, std::sqrt(power / std::pow(10.0, snr_db / 10.0)));
    for (float& x : w.samples) x = static_cast<float>(std::clamp(x + noise(rng), -1.0, 1.0));
  }
  return w;
}

}  // namespace

std::vector<TokenSequence> synthetic_token_corpus(const SyntheticTokenConfig& cfg) {
  if (cfg.vocab_size < 2 || cfg.successors < 1 || cfg.successors >= cfg.vocab_size ||
      cfg.min_len < 1 || cfg.max_len < cfg.min_len) {
    fail(ErrorKind::InvalidArgument, "bad synthetic token corpus config");
  }
  std::mt19937_64 rng(cfg.seed);
  const std::size_t V = cfg.vocab_size;
  std::vector<std::vector<Token>> succ(V);
  std::uniform_int_distribution<Token> unit(0, static_cast<Token>(V - 1));
  for (std::size_t v = 0; v < V; ++v) {
    while (succ[v].size() < cfg.successors) {
      const Token t = unit(rng);
      if (t != v && std::find(succ[v].begin(), succ[v].end(), t) == succ[v].end()) succ[v].push_back(t);
    }
  }
  std::vector<double> weights(cfg.successors);
  for (std::size_t k = 0; k < cfg.successors; ++k) weights[k] = std::pow(0.5, static_cast<double>(k));
  std::discrete_distribution<std::size_t> choose(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> length(cfg.min_len, cfg.max_len);

  std::vector<TokenSequence> corpus(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    TokenSequence& ts = corpus[i];
    ts.vocab_size = V;
    ts.dedup_applied = true;
    ts.utt_id = "syn" + padded(i, 5);
    const std::size_t len = length(rng);
    Token cur = unit(rng);
    for (std::size_t k = 0; k < len; ++k) {
      ts.tokens.push_back(cur);
      cur = succ[cur][choose(rng)];
    }
  }
  return corpus;
}

SyntheticCorruptionSetup synthetic_corruption_setup(std::size_t vocab_size, std::size_t train_count,
                                                    std::size_t eval_count, int order,
                                                    std::uint64_t seed) {
  SyntheticTokenConfig cfg;
  cfg.vocab_size = vocab_size;
  cfg.count = train_count + eval_count;
  cfg.seed = seed;
  std::vector<TokenSequence> corpus = synthetic_token_corpus(cfg);
  SyntheticCorruptionSetup setup;
  setup.clean.assign(corpus.begin() + static_cast<std::ptrdiff_t>(train_count), corpus.end());
  corpus.resize(train_count);
  setup.lm = std::make_shared<NgramModel>(
      train_ngram(corpus, vocab_size, TokenPolicy::Dedup, order, TrainConfig{}.discount));
  return setup;
}

EvalManifest synthetic_manifest(std::size_t systems, std::size_t per_system, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> quality(1.5, 4.5);
  std::normal_distribution<double> rater(0.0, 0.8);
  EvalManifest m;
  for (std::size_t s = 0; s < systems; ++s) {
    const double q = quality(rng);
    const std::string sys = "sys" + padded(s, 3);
    for (std::size_t u = 0; u < per_system; ++u) {
      double sum = 0.0;
      for (int r = 0; r < 8; ++r) sum += std::clamp(std::round(q + rater(rng)), 1.0, 5.0);
      ManifestRow row;
      row.system_id = sys;
      row.utt_id = sys + "_utt" + padded(u, 2);
      row.path = sys + "/utt" + padded(u, 2) + ".wav";
      row.mos = sum / 8.0;
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

void write_demo_corpus(const std::filesystem::path& dir, const DemoCorpusConfig& cfg) {
  if (cfg.num_systems < 1 || cfg.files_per_system < 1) {
    fail(ErrorKind::InvalidArgument, "demo corpus needs at least one system and one file");
  }
  std::filesystem::create_directories(dir / "train");
  std::filesystem::create_directories(dir / "eval");
  const PhoneChain chain = make_chain(cfg.seed);
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_int_distribution<std::size_t> phones(8, 14);

  for (std::size_t i = 0; i < cfg.num_train_files; ++i) {
    const Waveform w = render_utterance(chain, phones(rng), 0.0, INFINITY, rng);
    write_wav(dir / "train" / ("train" + padded(i, 3) + ".wav"), w);
  }

  EvalManifest manifest;
  std::normal_distribution<double> jitter(0.0, 0.25);
  for (std::size_t s = 0; s < cfg.num_systems; ++s) {
    const double level = cfg.num_systems == 1 ? 0.0 : static_cast<double>(s) / (cfg.num_systems - 1);
    const double snr_db = s == 0 ? INFINITY : 30.0 - 27.0 * level;
    const double broken = 0.5 * level;
    for (std::size_t u = 0; u < cfg.files_per_system; ++u) {
      const std::string sys = "sys" + padded(s, 2);
      const std::string name = sys + "_utt" + padded(u, 2);
      const Waveform w = render_utterance(chain, phones(rng), broken, snr_db, rng);
      write_wav(dir / "eval" / (name + ".wav"), w);
      ManifestRow row;
      row.utt_id = name;
      row.system_id = sys;
      row.path = "eval/" + name + ".wav";
      row.mos = std::clamp(4.6 - 3.2 * level + jitter(rng), 1.0, 5.0);
      manifest.rows.push_back(std::move(row));
    }
  }
  write_manifest(manifest, dir / "manifest.csv");
}

}  // namespace slms
