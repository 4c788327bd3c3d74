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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "slms/demo.hpp"
#include "slms/features.hpp"
#include "slms/ngram.hpp"
#include "slms/quantizer.hpp"
#include "slms/rnn.hpp"
#include "slms/scoring.hpp"

namespace {

using namespace slms;

FeatureSequence random_frames(std::size_t T, std::size_t D, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g;
  FeatureSequence fs;
  fs.num_frames = T;
  fs.dim = D;
  fs.values.resize(T * D);
  for (auto& x : fs.values) x = g(rng);
  return fs;
}

void BM_LogMel(benchmark::State& state) {
  Waveform w;
  w.samples.resize(static_cast<std::size_t>(state.range(0)) * 16000);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    w.samples[i] = 0.3f * static_cast<float>(std::sin(0.05 * static_cast<double>(i)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(extract_logmel(w));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.samples.size()));
}
BENCHMARK(BM_LogMel)->Arg(1)->Arg(10);

void BM_KMeansAssign(benchmark::State& state) {
  const auto V = static_cast<std::size_t>(state.range(0));
  const FeatureSequence fs = random_frames(500, 40, 1);
  const FeatureSequence cents = random_frames(V, 40, 2);
  Codebook cb;
  cb.vocab_size = V;
  cb.dim = 40;
  cb.centroids = cents.values;
  for (auto _ : state) benchmark::DoNotOptimize(assign(fs, cb));
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_KMeansAssign)->Arg(50)->Arg(100)->Arg(200);

void BM_NgramScore(benchmark::State& state) {
  SyntheticTokenConfig cfg;
  cfg.count = 600;
  const auto corpus = synthetic_token_corpus(cfg);
  const std::span<const TokenSequence> train(corpus.data(), 500);
  const NgramModel m = train_ngram(train, cfg.vocab_size, TokenPolicy::Dedup, static_cast<int>(state.range(0)), 0.75);
  std::size_t i = 500;
  for (auto _ : state) {
    benchmark::DoNotOptimize(speechlm_score(corpus[i], m));
    i = i + 1 < corpus.size() ? i + 1 : 500;
  }
}
BENCHMARK(BM_NgramScore)->Arg(2)->Arg(3)->Arg(5);

void BM_RnnForward(benchmark::State& state) {
  const auto H = static_cast<std::size_t>(state.range(0));
  const RnnModel m = RnnModel::initialize({50, 32, H, 1}, TokenPolicy::Dedup, 3);
  std::vector<Token> t(100);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Token>((i * 7) % 50);
  for (auto _ : state) benchmark::DoNotOptimize(m.token_logprobs(t, false));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_RnnForward)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
