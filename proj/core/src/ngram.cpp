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

#include "slms/ngram.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"

namespace slms {
namespace {

constexpr double kArpaMissing = -99.0;  // log10 probability written for <s>

double log10_to_ln(double x) { return x * std::numbers::ln10; }
double ln_to_log10(double x) { return x / std::numbers::ln10; }

void check_policy(std::span<const TokenSequence> corpus, TokenPolicy policy) {
  for (const auto& ts : corpus) {
    if (ts.policy() != policy) {
      fail(ErrorKind::PolicyMismatch, "sequence '" + ts.utt_id + "' is " +
                                          std::string(to_string(ts.policy())) + ", model is " +
                                          std::string(to_string(policy)));
    }
  }
}

std::string symbol(const Vocabulary& vocab, Token t) {
  if (t == vocab.bos()) return "<s>";
  if (t == vocab.eos()) return "</s>";
  return std::to_string(t);
}

}  // namespace

NgramCounts count_ngrams(std::span<const TokenSequence> corpus, const Vocabulary& vocab, int order) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "n-gram order must be >= 1");
  if (corpus.empty()) fail(ErrorKind::EmptyCorpus, "no training sequences");
  NgramCounts nc;
  nc.order = order;
  nc.counts.resize(static_cast<std::size_t>(order));
  const std::size_t pad = static_cast<std::size_t>(order - 1);
  std::vector<Token> padded;
  for (const auto& ts : corpus) {
    if (ts.tokens.empty()) fail(ErrorKind::EmptyCorpus, "empty sequence '" + ts.utt_id + "'");
    for (Token t : ts.tokens) {
      if (t >= vocab.units) {
        fail(ErrorKind::TokenOutOfRange, "token " + std::to_string(t) + " >= V=" +
                                             std::to_string(vocab.units) + " in '" + ts.utt_id + "'");
      }
    }
    padded.assign(pad, vocab.bos());
    padded.insert(padded.end(), ts.tokens.begin(), ts.tokens.end());
    padded.push_back(vocab.eos());
    for (std::size_t pos = pad; pos < padded.size(); ++pos) {
      for (std::size_t k = 1; k <= static_cast<std::size_t>(order); ++k) {
        std::vector<Token> ctx(padded.begin() + static_cast<long>(pos - (k - 1)),
                               padded.begin() + static_cast<long>(pos));
        ++nc.counts[k - 1][ctx][padded[pos]];
      }
    }
  }
  return nc;
}

NgramModel::NgramModel(Vocabulary vocab, TokenPolicy policy, int order, double discount,
                       std::vector<Table> tables)
    : vocab_(vocab), policy_(policy), order_(order), discount_(discount), tables_(std::move(tables)) {
  if (order_ < 1 || tables_.size() != static_cast<std::size_t>(order_)) {
    fail(ErrorKind::InvariantViolation, "n-gram tables do not match the order");
  }
  for (std::size_t w = 0; w < vocab_.outcomes(); ++w) {
    const Token word = w == vocab_.eos_index() ? vocab_.eos() : static_cast<Token>(w);
    if (!tables_[0].contains({word})) {
      fail(ErrorKind::InvariantViolation, "unigram table lacks '" + symbol(vocab_, word) + "'");
    }
  }
}

double NgramModel::logprob(std::span<const Token> context, Token word) const {
  const std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
  if (context.size() > max_ctx) context = context.subspan(context.size() - max_ctx);
  double backoff = 0.0;
  std::vector<Token> key;
  for (std::size_t skip = 0;; ++skip) {
    const auto ctx = context.subspan(skip);
    key.assign(ctx.begin(), ctx.end());
    key.push_back(word);
    const auto& table = tables_[ctx.size()];
    if (auto it = table.find(key); it != table.end()) return backoff + it->second.logprob;
    if (ctx.empty()) {
      fail(ErrorKind::TokenOutOfRange, "no unigram for '" + symbol(vocab_, word) + "'");
    }
    key.pop_back();
    const auto& ctx_table = tables_[ctx.size() - 1];
    if (auto it = ctx_table.find(key); it != ctx_table.end()) backoff += it->second.backoff;
  }
}

std::vector<double> NgramModel::log_distribution(std::span<const Token> context) const {
  std::vector<double> out(vocab_.outcomes());
  for (std::size_t w = 0; w < out.size(); ++w) {
    const Token word = w == vocab_.eos_index() ? vocab_.eos() : static_cast<Token>(w);
    out[w] = logprob(context, word);
  }
  return out;
}

std::vector<Token> NgramModel::history(std::span<const Token> tokens, std::size_t position) const {
  const std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
  std::vector<Token> ctx;
  ctx.reserve(max_ctx);
  const std::size_t from_tokens = std::min(position, max_ctx);
  ctx.assign(max_ctx - from_tokens, vocab_.bos());
  ctx.insert(ctx.end(), tokens.begin() + static_cast<long>(position - from_tokens),
             tokens.begin() + static_cast<long>(position));
  return ctx;
}

std::vector<double> NgramModel::token_logprobs(std::span<const Token> tokens, bool with_eos) const {
  std::vector<double> out;
  out.reserve(tokens.size() + 1);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= vocab_.units) {
      fail(ErrorKind::TokenOutOfRange, "token " + std::to_string(tokens[i]));
    }
    out.push_back(logprob(history(tokens, i), tokens[i]));
  }
  if (with_eos) out.push_back(logprob(history(tokens, tokens.size()), vocab_.eos()));
  return out;
}

std::vector<std::vector<double>> NgramModel::log_distributions(std::span<const Token> tokens) const {
  std::vector<std::vector<double>> rows;
  rows.reserve(tokens.size() + 1);
  for (std::size_t i = 0; i <= tokens.size(); ++i) rows.push_back(log_distribution(history(tokens, i)));
  return rows;
}

std::vector<std::pair<std::string, std::string>> NgramModel::describe() const {
  std::vector<std::pair<std::string, std::string>> out = {
      {"backend", "ngram"},
      {"V", std::to_string(vocab_.units)},
      {"order", std::to_string(order_)},
      {"policy", std::string(to_string(policy_))},
  };
  if (!std::isnan(discount_)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", discount_);
    out.emplace_back("discount", buf);
  }
  for (int k = 1; k <= order_; ++k) {
    out.emplace_back("ngram " + std::to_string(k), std::to_string(tables_[k - 1].size()));
  }
  return out;
}

NgramModel train_ngram(std::span<const TokenSequence> corpus, std::size_t vocab_size,
                       TokenPolicy policy, int order, double discount) {
  if (!(discount > 0.0 && discount < 1.0)) {
    fail(ErrorKind::InvalidArgument, "discount must lie in (0, 1)");
  }
  if (vocab_size == 0) fail(ErrorKind::InvalidArgument, "vocabulary is empty");
  check_policy(corpus, policy);
  const Vocabulary vocab{vocab_size};
  const NgramCounts nc = count_ngrams(corpus, vocab, order);

  std::vector<NgramModel::Table> tables(static_cast<std::size_t>(order));
  const double uniform = -std::log(static_cast<double>(vocab.outcomes()));
  const double bos_logprob = log10_to_ln(kArpaMissing);

  // Unigrams: every outcome is listed, so lookups always terminate.
  {
    const auto& cont = nc.counts[0].at({});
    double total = 0.0;
    for (const auto& [w, c] : cont) total += static_cast<double>(c);
    const double gamma = discount * static_cast<double>(cont.size()) / total;
    for (std::size_t w = 0; w < vocab.outcomes(); ++w) {
      const Token word = w == vocab.eos_index() ? vocab.eos() : static_cast<Token>(w);
      const auto it = cont.find(word);
      const double c = it == cont.end() ? 0.0 : static_cast<double>(it->second);
      const double p = std::max(c - discount, 0.0) / total + gamma * std::exp(uniform);
      tables[0][{word}] = {std::log(p), 0.0};
    }
    if (order > 1) tables[0][{vocab.bos()}] = {bos_logprob, 0.0};
  }

  // Higher orders reuse the finished lower-order tables through logprob().
  for (int k = 2; k <= order; ++k) {
    NgramModel partial(vocab, policy, k - 1, discount,
                       std::vector<NgramModel::Table>(tables.begin(), tables.begin() + (k - 1)));
    auto& table = tables[static_cast<std::size_t>(k - 1)];
    auto& ctx_table = tables[static_cast<std::size_t>(k - 2)];
    for (const auto& [ctx, cont] : nc.counts[static_cast<std::size_t>(k - 1)]) {
      double total = 0.0;
      for (const auto& [w, c] : cont) total += static_cast<double>(c);
      const double gamma = discount * static_cast<double>(cont.size()) / total;
      const std::span<const Token> shorter = std::span(ctx).subspan(1);
      for (const auto& [w, c] : cont) {
        const double p = (static_cast<double>(c) - discount) / total +
                         gamma * std::exp(partial.logprob(shorter, w));
        std::vector<Token> key = ctx;
        key.push_back(w);
        table[key] = {std::log(p), 0.0};
      }
      auto [it, inserted] = ctx_table.try_emplace(ctx, NgramModel::Entry{bos_logprob, 0.0});
      it->second.backoff = std::log(gamma);
    }
  }
  return NgramModel(vocab, policy, order, discount, std::move(tables));
}

std::string format_arpa(const NgramModel& model) {
  const auto& vocab = model.vocab();
  std::string out;
  char buf[64];
  out += "# slms n-gram unit language model\n";
  out += "# slms-policy: " + std::string(to_string(model.policy())) + "\n";
  out += "# slms-units: " + std::to_string(vocab.units) + "\n";
  if (!std::isnan(model.discount())) {
    std::snprintf(buf, sizeof buf, "%.17g", model.discount());
    out += "# slms-discount: " + std::string(buf) + "\n";
  }
  out += "\n\\data\\\n";
  for (int k = 1; k <= model.order(); ++k) {
    out += "ngram " + std::to_string(k) + "=" + std::to_string(model.tables()[k - 1].size()) + "\n";
  }
  for (int k = 1; k <= model.order(); ++k) {
    out += "\n\\" + std::to_string(k) + "-grams:\n";
    for (const auto& [key, entry] : model.tables()[k - 1]) {
      const bool is_bos = key.size() == 1 && key[0] == vocab.bos();
      std::snprintf(buf, sizeof buf, "%.10g", is_bos ? kArpaMissing : ln_to_log10(entry.logprob));
      out += buf;
      out += '\t';
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) out += ' ';
        out += symbol(vocab, key[i]);
      }
      if (k < model.order() && entry.backoff != 0.0) {
        std::snprintf(buf, sizeof buf, "\t%.10g", ln_to_log10(entry.backoff));
        out += buf;
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_double(std::string_view s, const std::string& where) {
  // from_chars for double is not available on every libstdc++ we target.
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size()) fail(ErrorKind::MalformedArpa, where + ": bad number '" + tmp + "'");
  return v;
}

}  // namespace

NgramModel parse_arpa(std::string_view text, const std::string& what) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }

  TokenPolicy policy = TokenPolicy::Dedup;
  double discount = std::numeric_limits<double>::quiet_NaN();
  std::size_t i = 0;
  for (; i < lines.size() && lines[i] != "\\data\\"; ++i) {
    const auto f = split_ws(lines[i]);
    if (f.size() == 3 && f[0] == "#" && f[1] == "slms-policy:") policy = parse_policy(f[2]);
    if (f.size() == 3 && f[0] == "#" && f[1] == "slms-discount:") discount = parse_double(f[2], what);
  }
  if (i == lines.size()) fail(ErrorKind::MalformedArpa, what + ": missing \\data\\ header");
  ++i;

  std::vector<std::size_t> declared;
  for (; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (line.empty()) {
      if (!declared.empty()) break;
      continue;
    }
    if (!line.starts_with("ngram ")) break;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorKind::MalformedArpa, what + ": bad count line");
    std::size_t k = 0;
    std::size_t n = 0;
    const auto ks = line.substr(6, eq - 6);
    const auto ns = line.substr(eq + 1);
    if (std::from_chars(ks.data(), ks.data() + ks.size(), k).ec != std::errc{} ||
        std::from_chars(ns.data(), ns.data() + ns.size(), n).ec != std::errc{} ||
        k != declared.size() + 1) {
      fail(ErrorKind::MalformedArpa, what + ": bad count line '" + std::string(line) + "'");
    }
    declared.push_back(n);
  }
  if (declared.empty()) fail(ErrorKind::MalformedArpa, what + ": no n-gram counts");
  const int order = static_cast<int>(declared.size());

  // Raw entries by order; symbols are resolved once the unit count is known.
  struct RawEntry {
    double log10p;
    std::vector<std::string_view> words;
    double log10bow;
  };
  std::vector<std::vector<RawEntry>> raw(declared.size());
  int section = 0;
  bool ended = false;
  for (; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (line.empty()) continue;
    if (line == "\\end\\") {
      ended = true;
      break;
    }
    if (line.front() == '\\') {
      int k = 0;
      if (!line.ends_with("-grams:") ||
          std::from_chars(line.data() + 1, line.data() + line.size(), k).ec != std::errc{} ||
          k != section + 1 || k > order) {
        fail(ErrorKind::MalformedArpa, what + ": unexpected section '" + std::string(line) + "'");
      }
      section = k;
      continue;
    }
    if (section == 0) fail(ErrorKind::MalformedArpa, what + ": entry outside a section");
    const auto f = split_ws(line);
    const std::size_t k = static_cast<std::size_t>(section);
    if (f.size() != k + 1 && f.size() != k + 2) {
      fail(ErrorKind::MalformedArpa, what + ": entry with wrong arity '" + std::string(line) + "'");
    }
    RawEntry e{parse_double(f[0], what), {f.begin() + 1, f.begin() + 1 + static_cast<long>(k)},
               f.size() == k + 2 ? parse_double(f[k + 1], what) : 0.0};
    raw[k - 1].push_back(std::move(e));
  }
  if (!ended) fail(ErrorKind::MalformedArpa, what + ": missing \\end\\");
  for (std::size_t k = 0; k < declared.size(); ++k) {
    if (raw[k].size() != declared[k]) {
      fail(ErrorKind::MalformedArpa, what + ": " + std::to_string(k + 1) + "-gram section declares " +
                                         std::to_string(declared[k]) + " entries, lists " +
                                         std::to_string(raw[k].size()));
    }
  }

  std::size_t units = 0;
  for (const auto& e : raw[0]) {
    if (e.words[0] != "<s>" && e.words[0] != "</s>") ++units;
  }
  const Vocabulary vocab{units};
  auto resolve = [&](std::string_view w) -> Token {
    if (w == "<s>") return vocab.bos();
    if (w == "</s>") return vocab.eos();
    Token t = 0;
    if (std::from_chars(w.data(), w.data() + w.size(), t).ec != std::errc{} || t >= units) {
      fail(ErrorKind::MalformedArpa, what + ": unknown symbol '" + std::string(w) + "'");
    }
    return t;
  };

  std::vector<NgramModel::Table> tables(declared.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    for (const auto& e : raw[k]) {
      std::vector<Token> key;
      for (auto w : e.words) key.push_back(resolve(w));
      if (!tables[k].emplace(key, NgramModel::Entry{log10_to_ln(e.log10p), log10_to_ln(e.log10bow)}).second) {
        fail(ErrorKind::MalformedArpa, what + ": duplicate entry");
      }
    }
  }
  try {
    return NgramModel(vocab, policy, order, discount, std::move(tables));
  } catch (const Error& e) {
    fail(ErrorKind::MalformedArpa, what + ": " + e.what());
  }
}

void save_arpa(const NgramModel& model, const std::filesystem::path& path) {
  write_file_text(path, format_arpa(model));
}

NgramModel load_arpa(const std::filesystem::path& path) {
  return parse_arpa(read_file_text(path), path.string());
}

}  // namespace slms
