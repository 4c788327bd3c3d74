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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slms/tokenizer.hpp"

namespace slms {

/// V unit ids, plus BOS = V (context only) and EOS = V + 1 (predicted only).
/// Distributions range over V + 1 outcomes: the units, then EOS at index V.
struct Vocabulary {
  std::size_t units = 0;

  Token bos() const { return static_cast<Token>(units); }
  Token eos() const { return static_cast<Token>(units + 1); }
  std::size_t outcomes() const { return units + 1; }
  std::size_t eos_index() const { return units; }
};

/// Autoregressive model over unit tokens. Implementations are immutable after
/// construction and safe to share between threads.
class UnitLM {
 public:
  virtual ~UnitLM() = default;

  virtual const Vocabulary& vocab() const = 0;
  virtual TokenPolicy policy() const = 0;
  virtual std::string_view backend() const = 0;

  /// ln p(tokens[i] | tokens[0..i)) for every i; with_eos appends ln p(EOS | tokens).
  virtual std::vector<double> token_logprobs(std::span<const Token> tokens, bool with_eos) const = 0;

  /// Row i (0 <= i <= T) is the natural-log distribution over the V + 1
  /// outcomes after the prefix tokens[0..i).
  virtual std::vector<std::vector<double>> log_distributions(std::span<const Token> tokens) const = 0;

  /// Key/value lines for `info`.
  virtual std::vector<std::pair<std::string, std::string>> describe() const = 0;
};

enum class Backend { Ngram, Rnn };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view text);

struct TrainConfig {
  Backend backend = Backend::Ngram;
  // n-gram
  int order = 3;
  double discount = 0.75;
  // recurrent
  int embed = 64;
  int hidden = 128;
  int layers = 1;
  double lr = 0.002;
  double dropout = 0.2;
  int epochs = 40;
  int bptt_len = 128;
  double grad_clip = 5.0;
  std::uint64_t seed = 0;
  int batch_size = 32;

  void validate() const;
};

/// Temperature-scaled log-softmax of a natural-log distribution: probabilities
/// raised to 1/temperature and renormalized.
std::vector<double> temper(std::span<const double> log_dist, double temperature);

/// ln p(d_i | d_<i) for i = 1..T (plus the EOS term when include_eos). At
/// temperature 1 this is exactly the model's own probabilities. Checks the
/// sequence's policy and vocabulary against the model.
std::vector<double> cond_logprobs(const UnitLM& lm, const TokenSequence& ts,
                                  double temperature = 1.0, bool include_eos = false);

/// Trains the configured backend. Every sequence must follow `policy`.
std::shared_ptr<const UnitLM> train_lm(std::span<const TokenSequence> corpus,
                                       std::size_t vocab_size, TokenPolicy policy,
                                       const TrainConfig& cfg,
                                       std::vector<double>* loss_trace = nullptr);

/// ARPA text for n-gram models, "SLMR" binary for recurrent ones.
void save_lm(const UnitLM& lm, const std::filesystem::path& path);
/// Detects the format from the file contents.
std::shared_ptr<const UnitLM> load_lm(const std::filesystem::path& path);

}  // namespace slms
