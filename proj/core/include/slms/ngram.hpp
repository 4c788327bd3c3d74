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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slms/ulm.hpp"

namespace slms {

/// Raw event counts for orders 1..n. counts[k-1] maps a context of length
/// k-1 to its continuation counts. Sequences are padded with (n-1) BOS and
/// one EOS; EOS counts are keyed by Vocabulary::eos().
struct NgramCounts {
  int order = 0;
  std::vector<std::map<std::vector<Token>, std::map<Token, std::uint64_t>>> counts;
};

NgramCounts count_ngrams(std::span<const TokenSequence> corpus, const Vocabulary& vocab, int order);

/// Back-off n-gram model with natural-log probabilities. Trained models hold
/// interpolated absolute-discounting estimates in back-off form:
///   p(w|h) = max(c(h,w) - d, 0) / c(h) + d * N1+(h,.) / c(h) * p(w|h')
/// down to a uniform 1/(V+1) base. The listed entries are exactly the seen
/// (h, w) pairs and each context carries back-off weight d * N1+(h,.) / c(h),
/// so the same tables serialize losslessly to ARPA.
class NgramModel final : public UnitLM {
 public:
  struct Entry {
    double logprob = 0.0;
    double backoff = 0.0;  // ln of the back-off weight; 0 when not a context
  };
  using Table = std::map<std::vector<Token>, Entry>;

  NgramModel(Vocabulary vocab, TokenPolicy policy, int order, double discount,
             std::vector<Table> tables);

  const Vocabulary& vocab() const override { return vocab_; }
  TokenPolicy policy() const override { return policy_; }
  std::string_view backend() const override { return "ngram"; }
  std::vector<double> token_logprobs(std::span<const Token> tokens, bool with_eos) const override;
  std::vector<std::vector<double>> log_distributions(std::span<const Token> tokens) const override;
  std::vector<std::pair<std::string, std::string>> describe() const override;

  int order() const { return order_; }
  /// NaN when loaded from an ARPA file without a recorded discount.
  double discount() const { return discount_; }
  const std::vector<Table>& tables() const { return tables_; }

  /// ln p(w | context) where context holds up to order-1 preceding symbols
  /// (BOS allowed); longer contexts are truncated to their tail.
  double logprob(std::span<const Token> context, Token word) const;

  /// Natural-log distribution over the V + 1 outcomes for one context.
  std::vector<double> log_distribution(std::span<const Token> context) const;

 private:
  std::vector<Token> history(std::span<const Token> tokens, std::size_t position) const;

  Vocabulary vocab_;
  TokenPolicy policy_;
  int order_;
  double discount_;
  std::vector<Table> tables_;
};

NgramModel train_ngram(std::span<const TokenSequence> corpus, std::size_t vocab_size,
                       TokenPolicy policy, int order, double discount);

/// ARPA text: a \data\ block of per-order counts, one section per order with log10
/// probabilities and back-off weights, "<s>"/"</s>" for BOS/EOS and decimal
/// strings for units. A leading comment block records the token policy.
std::string format_arpa(const NgramModel& model);
NgramModel parse_arpa(std::string_view text, const std::string& what = "arpa");
void save_arpa(const NgramModel& model, const std::filesystem::path& path);
NgramModel load_arpa(const std::filesystem::path& path);

}  // namespace slms
