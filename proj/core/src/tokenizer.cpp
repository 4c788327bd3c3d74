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
#include "slms/tokenizer.hpp"

#include <charconv>
#include <sstream>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"

namespace slms {

std::string_view to_string(TokenPolicy policy) {
  return policy == TokenPolicy::Dedup ? "dedup" : "keep-repeats";
}

TokenPolicy parse_policy(std::string_view text) {
  if (text == "dedup") return TokenPolicy::Dedup;
  if (text == "keep-repeats" || text == "keep_repeats") return TokenPolicy::KeepRepeats;
  fail(ErrorKind::InvalidArgument, "unknown token policy '" + std::string(text) + "'");
}

void validate(const TokenSequence& ts) {
  if (ts.tokens.empty()) fail(ErrorKind::EmptyInput, "token sequence '" + ts.utt_id + "' is empty");
  for (Token t : ts.tokens) {
    if (t >= ts.vocab_size) {
      fail(ErrorKind::TokenOutOfRange, "token " + std::to_string(t) + " >= V=" +
                                           std::to_string(ts.vocab_size) + " in '" + ts.utt_id + "'");
    }
  }
  if (ts.dedup_applied) {
    for (std::size_t i = 1; i < ts.tokens.size(); ++i) {
      if (ts.tokens[i] == ts.tokens[i - 1]) {
        fail(ErrorKind::PolicyMismatch, "repeated token in dedup sequence '" + ts.utt_id + "'");
      }
    }
  }
}

std::vector<Token> dedup(std::span<const Token> tokens) {
  if (tokens.empty()) fail(ErrorKind::EmptyInput, "dedup of an empty sequence");
  std::vector<Token> out;
  out.reserve(tokens.size());
  out.push_back(tokens.front());
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] != tokens[i - 1]) out.push_back(tokens[i]);
  }
  return out;
}

TokenSequence dedup(const TokenSequence& ts) {
  TokenSequence out;
  out.tokens = dedup(std::span<const Token>(ts.tokens));
  out.vocab_size = ts.vocab_size;
  out.dedup_applied = true;
  out.utt_id = ts.utt_id;
  return out;
}

TokenSequence apply_policy(TokenSequence ts, TokenPolicy policy) {
  if (policy == TokenPolicy::Dedup) return dedup(ts);
  if (ts.dedup_applied) {
    fail(ErrorKind::PolicyMismatch, "cannot restore repeats of a deduplicated sequence");
  }
  return ts;
}

TokenSequence tokenize(const FeatureSequence& fs, const Codebook& cb, TokenPolicy policy,
                       std::string utt_id) {
  TokenSequence ts;
  ts.tokens = assign(fs, cb);
  ts.vocab_size = cb.vocab_size;
  ts.utt_id = std::move(utt_id);
  return apply_policy(std::move(ts), policy);
}

TokenSequence tokenize(const Waveform& w, const LogMelConfig& logmel, const Codebook& cb,
                       TokenPolicy policy, std::string utt_id) {
  return tokenize(extract_logmel(w, logmel), cb, policy, std::move(utt_id));
}

std::string format_token_corpus(std::span<const TokenSequence> corpus) {
  std::string out;
  for (const auto& ts : corpus) {
    if (ts.utt_id.find_first_of("\t\n") != std::string::npos) {
      fail(ErrorKind::InvalidArgument, "utt_id contains tab or newline: '" + ts.utt_id + "'");
    }
    out += ts.utt_id;
    out += '\t';
    for (std::size_t i = 0; i < ts.tokens.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(ts.tokens[i]);
    }
    out += '\n';
  }
  return out;
}

void write_token_corpus(const std::filesystem::path& path, std::span<const TokenSequence> corpus) {
  write_file_text(path, format_token_corpus(corpus));
}

std::vector<TokenSequence> parse_token_corpus(std::string_view text, std::size_t vocab_size,
                                              TokenPolicy policy, const std::string& what) {
  std::vector<TokenSequence> corpus;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorKind::ParseError, what + ":" + std::to_string(line_no) + ": missing tab after utt_id");
    }
    TokenSequence ts;
    ts.utt_id = std::string(line.substr(0, tab));
    ts.vocab_size = vocab_size;
    ts.dedup_applied = policy == TokenPolicy::Dedup;
    std::string_view rest = line.substr(tab + 1);
    const char* p = rest.data();
    const char* end = rest.data() + rest.size();
    while (p < end) {
      if (*p == ' ') {
        ++p;
        continue;
      }
      Token t = 0;
      auto [next, ec] = std::from_chars(p, end, t);
      if (ec != std::errc{} || (next < end && *next != ' ')) {
        fail(ErrorKind::ParseError, what + ":" + std::to_string(line_no) + ": bad token");
      }
      ts.tokens.push_back(t);
      p = next;
    }
    validate(ts);
    corpus.push_back(std::move(ts));
  }
  return corpus;
}

std::vector<TokenSequence> read_token_corpus(const std::filesystem::path& path,
                                             std::size_t vocab_size, TokenPolicy policy) {
  return parse_token_corpus(read_file_text(path), vocab_size, policy, path.string());
}

}  // namespace slms
