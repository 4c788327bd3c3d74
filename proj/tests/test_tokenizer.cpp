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

#include <random>
#include <vector>

#include "doctest.h"
#include "slms/audio_io.hpp"
#include "slms/error.hpp"
#include "slms/features.hpp"
#include "slms/tokenizer.hpp"
#include "support.hpp"

using namespace slms;
using slms::test::make_codebook;
using slms::test::make_features;
using slms::test::make_tokens;

namespace {

std::vector<Token> run_firsts(const std::vector<Token>& x) {
  std::vector<Token> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == 0 || x[i] != x[i - 1]) out.push_back(x[i]);
  }
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no slms::Error thrown");
  return ErrorKind::InvalidArgument;
}

// 1-D centroids at 0..7 so a frame value picks the nearest integer.
const Codebook kLine = make_codebook(8, 1, {0, 1, 2, 3, 4, 5, 6, 7});

}  // namespace

TEST_CASE("dedup examples") {
  CHECK(dedup(std::vector<Token>{20, 20, 20, 16, 17, 17}) == std::vector<Token>{20, 16, 17});
  CHECK(dedup(std::vector<Token>{5}) == std::vector<Token>{5});
  CHECK(dedup(std::vector<Token>{1, 2, 1, 2}) == std::vector<Token>{1, 2, 1, 2});
  const TokenSequence d = dedup(make_tokens({20, 20, 20, 16, 17, 17}, 21, false, "x"));
  CHECK(d.tokens == std::vector<Token>{20, 16, 17});
  CHECK(d.dedup_applied);
  CHECK(d.utt_id == "x");
  CHECK(kind_of([] { dedup(std::vector<Token>{}); }) == ErrorKind::EmptyInput);
}

TEST_CASE("dedup properties on random sequences") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Token> tok(0, 4);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<Token> x(len(rng));
    for (auto& t : x) t = tok(rng);
    const auto d = dedup(x);
    CHECK(dedup(d) == d);
    CHECK(d.size() <= x.size());
    bool has_adjacent = false;
    for (std::size_t i = 1; i < x.size(); ++i) has_adjacent |= x[i] == x[i - 1];
    CHECK((d.size() == x.size()) == !has_adjacent);
    CHECK(d == run_firsts(x));
  }
}

TEST_CASE("tokenize composes assign and the policy") {
  const FeatureSequence fs = make_features(3, 1, {3.1f, 2.9f, 7.0f});
  const TokenSequence d = tokenize(fs, kLine, TokenPolicy::Dedup, "a");
  CHECK(d.tokens == std::vector<Token>{3, 7});
  CHECK(d.dedup_applied);
  CHECK(d.vocab_size == 8);
  const TokenSequence k = tokenize(fs, kLine, TokenPolicy::KeepRepeats, "a");
  CHECK(k.tokens == std::vector<Token>{3, 3, 7});
  CHECK(!k.dedup_applied);
  CHECK(dedup(k).tokens == d.tokens);
}

TEST_CASE("keep-repeats length equals the frame count") {
  Waveform w;
  std::mt19937_64 rng(2);
  std::normal_distribution<float> g(0.0f, 0.1f);
  w.samples.resize(16000);
  for (auto& x : w.samples) x = g(rng);
  const LogMelConfig cfg;
  std::vector<float> cents(4 * 40);
  for (auto& c : cents) c = g(rng) - 5.0f;
  const Codebook cb = make_codebook(4, 40, cents);
  const TokenSequence k = tokenize(w, cfg, cb, TokenPolicy::KeepRepeats);
  CHECK(k.tokens.size() == 49);
  const TokenSequence d = tokenize(w, cfg, cb, TokenPolicy::Dedup);
  CHECK(d.tokens.size() <= 49);
  CHECK(dedup(k).tokens == d.tokens);
}

TEST_CASE("keep-repeats then dedup equals dedup on random features") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> u(-1.0f, 8.0f);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<float> v(1 + trial % 37);
    for (auto& x : v) x = u(rng);
    const FeatureSequence fs = make_features(v.size(), 1, v);
    const TokenSequence k = tokenize(fs, kLine, TokenPolicy::KeepRepeats);
    CHECK(k.tokens.size() == v.size());
    CHECK(dedup(k).tokens == tokenize(fs, kLine, TokenPolicy::Dedup).tokens);
  }
}

TEST_CASE("validate and policies") {
  CHECK(kind_of([] { validate(make_tokens({}, 3, false)); }) == ErrorKind::EmptyInput);
  CHECK(kind_of([] { validate(make_tokens({0, 3}, 3, false)); }) == ErrorKind::TokenOutOfRange);
  CHECK(kind_of([] { validate(make_tokens({1, 1}, 3, true)); }) == ErrorKind::PolicyMismatch);
  CHECK_NOTHROW(validate(make_tokens({1, 1}, 3, false)));
  CHECK(parse_policy("dedup") == TokenPolicy::Dedup);
  CHECK(parse_policy("keep-repeats") == TokenPolicy::KeepRepeats);
  CHECK(to_string(TokenPolicy::KeepRepeats) == "keep-repeats");
  CHECK(kind_of([] { parse_policy("both"); }) == ErrorKind::InvalidArgument);
  CHECK(apply_policy(make_tokens({2, 2, 1}, 3, false), TokenPolicy::Dedup).tokens == std::vector<Token>{2, 1});
  CHECK(kind_of([] { apply_policy(make_tokens({2, 1}, 3, true), TokenPolicy::KeepRepeats); }) ==
        ErrorKind::PolicyMismatch);
}

TEST_CASE("token corpus text round trip") {
  std::vector<TokenSequence> corpus = {make_tokens({0, 5, 5, 2}, 6, false, "b"),
                                       make_tokens({1}, 6, false, "a")};
  const std::string text = format_token_corpus(corpus);
  CHECK(text == "b\t0 5 5 2\na\t1\n");
  const auto back = parse_token_corpus(text, 6, TokenPolicy::KeepRepeats);
  REQUIRE(back.size() == 2);
  CHECK(back[0].tokens == corpus[0].tokens);
  CHECK(back[0].utt_id == "b");
  CHECK(back[1].tokens == corpus[1].tokens);

  CHECK(kind_of([&] { parse_token_corpus(text, 6, TokenPolicy::Dedup); }) == ErrorKind::PolicyMismatch);
  CHECK(kind_of([&] { parse_token_corpus(text, 5, TokenPolicy::KeepRepeats); }) == ErrorKind::TokenOutOfRange);
  CHECK(kind_of([] { parse_token_corpus("a 1 2\n", 6, TokenPolicy::KeepRepeats); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_token_corpus("a\t1 x\n", 6, TokenPolicy::KeepRepeats); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_token_corpus("a\t\n", 6, TokenPolicy::KeepRepeats); }) == ErrorKind::EmptyInput);
  CHECK(parse_token_corpus("a\t1 2\r\n\n", 6, TokenPolicy::Dedup).size() == 1);
}
