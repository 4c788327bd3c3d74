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

#include "slms/ulm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"
#include "slms/ngram.hpp"
#include "slms/rnn.hpp"

namespace slms {

std::string_view to_string(Backend b) { return b == Backend::Ngram ? "ngram" : "rnn"; }

Backend parse_backend(std::string_view text) {
  if (text == "ngram") return Backend::Ngram;
  if (text == "rnn") return Backend::Rnn;
  fail(ErrorKind::InvalidArgument, "unknown backend '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (backend == Backend::Ngram) {
    if (order < 1) fail(ErrorKind::InvalidArgument, "order must be >= 1");
    if (!(discount > 0.0 && discount < 1.0)) fail(ErrorKind::InvalidArgument, "discount must lie in (0, 1)");
    return;
  }
  if (embed < 1 || hidden < 1 || layers < 1) {
    fail(ErrorKind::InvalidArgument, "embed, hidden and layers must be >= 1");
  }
  if (!(lr > 0.0)) fail(ErrorKind::InvalidArgument, "lr must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail(ErrorKind::InvalidArgument, "dropout must lie in [0, 1)");
  if (epochs < 1) fail(ErrorKind::InvalidArgument, "epochs must be >= 1");
  if (bptt_len < 1) fail(ErrorKind::InvalidArgument, "bptt length must be >= 1");
  if (!(grad_clip > 0.0)) fail(ErrorKind::InvalidArgument, "grad clip must be positive");
  if (batch_size < 1) fail(ErrorKind::InvalidArgument, "batch size must be >= 1");
}

std::vector<double> temper(std::span<const double> log_dist, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(ErrorKind::InvalidArgument, "temperature must be positive and finite");
  }
  std::vector<double> out(log_dist.begin(), log_dist.end());
  if (temperature == 1.0) return out;
  double mx = -std::numeric_limits<double>::infinity();
  for (double& x : out) {
    x /= temperature;
    mx = std::max(mx, x);
  }
  double sum = 0.0;
  for (double x : out) sum += std::exp(x - mx);
  const double lse = mx + std::log(sum);
  for (double& x : out) x -= lse;
  return out;
}

std::vector<double> cond_logprobs(const UnitLM& lm, const TokenSequence& ts, double temperature,
                                  bool include_eos) {
  if (ts.tokens.empty()) fail(ErrorKind::EmptyInput, "cannot score empty sequence '" + ts.utt_id + "'");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(ErrorKind::InvalidArgument, "temperature must be positive and finite");
  }
  if (ts.policy() != lm.policy()) {
    fail(ErrorKind::PolicyMismatch, "sequence '" + ts.utt_id + "' is " +
                                        std::string(to_string(ts.policy())) + ", model expects " +
                                        std::string(to_string(lm.policy())));
  }
  for (Token t : ts.tokens) {
    if (t >= lm.vocab().units) {
      fail(ErrorKind::TokenOutOfRange, "token " + std::to_string(t) + " >= V=" +
                                           std::to_string(lm.vocab().units));
    }
  }
  if (temperature == 1.0) return lm.token_logprobs(ts.tokens, include_eos);

  const auto rows = lm.log_distributions(ts.tokens);
  std::vector<double> out;
  out.reserve(ts.tokens.size() + 1);
  for (std::size_t i = 0; i < ts.tokens.size(); ++i) {
    out.push_back(temper(rows[i], temperature)[ts.tokens[i]]);
  }
  if (include_eos) out.push_back(temper(rows.back(), temperature)[lm.vocab().eos_index()]);
  return out;
}

std::shared_ptr<const UnitLM> train_lm(std::span<const TokenSequence> corpus, std::size_t vocab_size,
                                       TokenPolicy policy, const TrainConfig& cfg,
                                       std::vector<double>* loss_trace) {
  cfg.validate();
  if (cfg.backend == Backend::Ngram) {
    return std::make_shared<NgramModel>(train_ngram(corpus, vocab_size, policy, cfg.order, cfg.discount));
  }
  auto result = train_rnn(corpus, vocab_size, policy, cfg);
  if (loss_trace) *loss_trace = result.loss_trace;
  return std::make_shared<RnnModel>(std::move(result.model));
}

void save_lm(const UnitLM& lm, const std::filesystem::path& path) {
  if (const auto* ngram = dynamic_cast<const NgramModel*>(&lm)) {
    save_arpa(*ngram, path);
  } else if (const auto* rnn = dynamic_cast<const RnnModel*>(&lm)) {
    save_rnn(*rnn, path);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown model type");
  }
}

std::shared_ptr<const UnitLM> load_lm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  ByteReader probe(bytes, path.string());
  if (probe.has_magic("SLMR")) return std::make_shared<RnnModel>(decode_rnn(bytes, path.string()));
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (text.find("\\data\\") == std::string_view::npos) {
    fail(ErrorKind::BadMagic, path.string() + ": neither an SLMR model nor an ARPA file");
  }
  return std::make_shared<NgramModel>(parse_arpa(text, path.string()));
}

}  // namespace slms
