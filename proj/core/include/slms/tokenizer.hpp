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
#include <string_view>
#include <vector>

#include "slms/audio_io.hpp"
#include "slms/features.hpp"
#include "slms/quantizer.hpp"

namespace slms {

using Token = std::uint32_t;

enum class TokenPolicy { Dedup, KeepRepeats };

std::string_view to_string(TokenPolicy policy);
/// Accepts "dedup", "keep-repeats" and "keep_repeats".
TokenPolicy parse_policy(std::string_view text);

/// Discrete units d_1..d_T in [0, V). When dedup_applied no two neighbours
/// are equal.
struct TokenSequence {
  std::vector<Token> tokens;
  std::size_t vocab_size = 0;
  bool dedup_applied = false;
  std::string utt_id;

  TokenPolicy policy() const {
    return dedup_applied ? TokenPolicy::Dedup : TokenPolicy::KeepRepeats;
  }
};

void validate(const TokenSequence& ts);

/// Collapses runs of equal neighbours to their first element. Throws EmptyInput.
TokenSequence dedup(const TokenSequence& ts);
std::vector<Token> dedup(std::span<const Token> tokens);

TokenSequence apply_policy(TokenSequence ts, TokenPolicy policy);

TokenSequence tokenize(const FeatureSequence& fs, const Codebook& cb, TokenPolicy policy,
                       std::string utt_id = {});
TokenSequence tokenize(const Waveform& w, const LogMelConfig& logmel, const Codebook& cb,
                       TokenPolicy policy, std::string utt_id = {});

/// One utterance per line: "utt_id<TAB>t1 t2 t3".
std::string format_token_corpus(std::span<const TokenSequence> corpus);
void write_token_corpus(const std::filesystem::path& path, std::span<const TokenSequence> corpus);

/// Parses a token corpus, checking every token < vocab_size and, for the
/// dedup policy, that no line has equal neighbours (PolicyMismatch otherwise).
std::vector<TokenSequence> parse_token_corpus(std::string_view text, std::size_t vocab_size,
                                              TokenPolicy policy, const std::string& what = "tokens");
std::vector<TokenSequence> read_token_corpus(const std::filesystem::path& path,
                                             std::size_t vocab_size, TokenPolicy policy);

}  // namespace slms
