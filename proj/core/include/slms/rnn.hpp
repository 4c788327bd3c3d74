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

#include "slms/ulm.hpp"

namespace slms {

struct RnnShape {
  std::size_t units = 0;   // V
  std::size_t embed = 0;   // E
  std::size_t hidden = 0;  // H
  std::size_t layers = 1;

  /// Number of scalar parameters in the flat layout below.
  std::size_t parameter_count() const;
};

/// Stacked LSTM unit language model.
///
/// Parameters live in one flat vector, in file order:
///   embedding      (V+2) x E            row-major, rows are unit ids, BOS, EOS
///   per layer l:   W_ih 4H x In, W_hh 4H x H, bias 4H
///                  (gate blocks i, f, g, o; In = E for layer 0, else H)
///   output         W_out (V+1) x H, bias (V+1)
/// Values are held in double precision but trained and loaded models are
/// rounded to float32 so that saving is lossless.
class RnnModel final : public UnitLM {
 public:
  RnnModel(RnnShape shape, TokenPolicy policy, std::vector<double> params);

  /// Uniform(-1/sqrt(H), 1/sqrt(H)) weights, Uniform(-0.1, 0.1) embeddings.
  static RnnModel initialize(RnnShape shape, TokenPolicy policy, std::uint64_t seed);

  const Vocabulary& vocab() const override { return vocab_; }
  TokenPolicy policy() const override { return policy_; }
  std::string_view backend() const override { return "rnn"; }
  std::vector<double> token_logprobs(std::span<const Token> tokens, bool with_eos) const override;
  std::vector<std::vector<double>> log_distributions(std::span<const Token> tokens) const override;
  std::vector<std::pair<std::string, std::string>> describe() const override;

  const RnnShape& shape() const { return shape_; }
  const std::vector<double>& parameters() const { return params_; }

  /// Mean next-token cross-entropy (nats per target, EOS included) of the
  /// batch with full backpropagation through each sequence and no dropout.
  /// When \p grad is given it receives d(loss)/d(params).
  double loss(std::span<const TokenSequence> batch, std::vector<double>* grad) const;

 private:
  RnnShape shape_;
  Vocabulary vocab_;
  TokenPolicy policy_;
  std::vector<double> params_;
};

struct RnnTrainResult {
  RnnModel model;
  std::vector<double> loss_trace;  // mean training cross-entropy per epoch
};

/// Adam on mean per-token cross-entropy with global-norm clipping and
/// truncated BPTT; batches keep a fixed seeded order. Throws DivergedLoss.
RnnTrainResult train_rnn(std::span<const TokenSequence> corpus, std::size_t vocab_size,
                         TokenPolicy policy, const TrainConfig& cfg);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::vector<double> analytic;
  std::vector<double> numeric;
};

/// Compares RnnModel::loss gradients against central differences for every
/// parameter, both evaluated in long double: max |a - n| / max(1e-8, |a| + |n|).
GradCheckResult gradcheck_rnn(const RnnModel& model, std::span<const TokenSequence> batch,
                              double epsilon);

inline constexpr std::uint32_t kRnnFileVersion = 1;

/// "SLMR" | u32 version | u32 V | u32 E | u32 H | u32 layers | u8 policy
/// | float32 parameters in the flat order above.
std::vector<std::uint8_t> encode_rnn(const RnnModel& model);
RnnModel decode_rnn(std::span<const std::uint8_t> bytes, const std::string& what);
void save_rnn(const RnnModel& model, const std::filesystem::path& path);
RnnModel load_rnn(const std::filesystem::path& path);

}  // namespace slms
