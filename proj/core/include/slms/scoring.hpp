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
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slms/features.hpp"
#include "slms/manifest.hpp"
#include "slms/quantizer.hpp"
#include "slms/tokenizer.hpp"
#include "slms/ulm.hpp"

namespace slms {

/// Per-utterance SpeechLMScore in nats per token (higher = more natural).
/// Failed utterances carry status "error:<Kind>" and a NaN score.
struct ScoreReport {
  std::string utt_id;
  double score = 0.0;
  std::size_t num_tokens = 0;
  TokenPolicy policy = TokenPolicy::Dedup;
  double temperature = 1.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Sequential left-to-right mean.
double mean_logprob(std::span<const double> logprobs);

/// Mean of cond_logprobs over the T tokens; include_eos adds the EOS term to
/// the sum and to the denominator.
ScoreReport speechlm_score(const TokenSequence& tokens, const UnitLM& lm, double temperature = 1.0,
                           bool include_eos = false);

struct ScoringPipeline {
  std::shared_ptr<const Codebook> codebook;
  TokenPolicy policy = TokenPolicy::Dedup;
  std::shared_ptr<const UnitLM> lm;
  double temperature = 1.0;
  bool include_eos = false;
  FrontEndConfig frontend;
};

/// Throws ComponentMismatch when codebook V, model V, or the policies disagree.
void check_components(const ScoringPipeline& pipeline);

/// One report per manifest row, sorted by utt_id. Unreadable or unscorable
/// inputs become error rows; component mismatches abort before any work.
std::vector<ScoreReport> score_corpus(const EvalManifest& manifest, const ScoringPipeline& pipeline,
                                      std::size_t workers = 1);

/// "utt_id,score,num_tokens,status" with 9 significant digits.
std::string format_scores_csv(std::span<const ScoreReport> reports);
void write_scores_csv(std::span<const ScoreReport> reports, const std::filesystem::path& path);
std::vector<ScoreReport> parse_scores_csv(std::string_view text, const std::string& what = "scores");
std::vector<ScoreReport> read_scores_csv(const std::filesystem::path& path);

}  // namespace slms
