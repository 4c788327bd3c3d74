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
#include <memory>
#include <vector>

#include "slms/manifest.hpp"
#include "slms/tokenizer.hpp"
#include "slms/ulm.hpp"

namespace slms {

/// Token streams from a sparse first-order Markov chain: every unit has
/// `successors` distinct successors (never itself) with geometrically
/// decaying probabilities, so the sequences are already deduplicated.
struct SyntheticTokenConfig {
  std::size_t vocab_size = 50;
  std::size_t count = 500;
  std::size_t min_len = 20;
  std::size_t max_len = 60;
  std::size_t successors = 3;
  std::uint64_t seed = 0;
};

std::vector<TokenSequence> synthetic_token_corpus(const SyntheticTokenConfig& cfg);

/// Clean held-out sequences plus an n-gram trained on sequences from the same
/// chain, the input of a corruption benchmark run.
struct SyntheticCorruptionSetup {
  std::shared_ptr<const UnitLM> lm;
  std::vector<TokenSequence> clean;
};

SyntheticCorruptionSetup synthetic_corruption_setup(std::size_t vocab_size, std::size_t train_count,
                                                    std::size_t eval_count, int order,
                                                    std::uint64_t seed);

/// systems x per_system rows. Each system has a latent quality; an
/// utterance's MOS is the mean of 8 integer ratings around it.
EvalManifest synthetic_manifest(std::size_t systems, std::size_t per_system, std::uint64_t seed);

/// A small audio corpus for running the whole pipeline without external data:
/// clean "phone" sequences from a Markov chain rendered as harmonic tones.
/// train/ holds clean files; eval/ holds num_systems systems whose quality
/// drops with the system index (additive noise, broken phone order), listed
/// in manifest.csv with a matching MOS.
struct DemoCorpusConfig {
  std::size_t num_train_files = 40;
  std::size_t num_systems = 4;
  std::size_t files_per_system = 5;
  std::uint64_t seed = 0;
};

void write_demo_corpus(const std::filesystem::path& dir, const DemoCorpusConfig& cfg);

}  // namespace slms
