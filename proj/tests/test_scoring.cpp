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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "slms/binary_io.hpp"
#include "slms/error.hpp"
#include "slms/manifest.hpp"
#include "slms/ngram.hpp"
#include "slms/rnn.hpp"
#include "slms/scoring.hpp"
#include "support.hpp"

using namespace slms;
using slms::test::make_tokens;
using slms::test::NgramOracle;
using slms::test::TempDir;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no slms::Error thrown");
  return ErrorKind::InvalidArgument;
}

std::shared_ptr<const UnitLM> uniform_lm(std::size_t V, TokenPolicy policy) {
  RnnShape shape{V, 2, 2, 1};
  return std::make_shared<RnnModel>(shape, policy, std::vector<double>(shape.parameter_count(), 0.0));
}

// Units a = 0, b = 1 with p(a | <s>) = 0.5 and p(b | a) = 0.25.
NgramModel hand_bigram() {
  const Vocabulary v{2};
  std::vector<NgramModel::Table> tables(2);
  for (Token w : {Token{0}, Token{1}, v.eos()}) tables[0][{w}] = {std::log(1.0 / 3.0), 0.0};
  tables[1][{v.bos(), 0}] = {std::log(0.5), 0.0};
  tables[1][{0, 1}] = {std::log(0.25), 0.0};
  return NgramModel(v, TokenPolicy::Dedup, 2, NAN, std::move(tables));
}

struct Fixture {
  TempDir dir;
  ScoringPipeline pipeline;
  EvalManifest manifest;

  explicit Fixture(std::size_t n_utts) {
    std::mt19937_64 rng(42);
    const std::size_t V = 6, D = 3;
    auto cents = slms::test::random_features(V, D, rng);
    pipeline.codebook = std::make_shared<Codebook>(slms::test::make_codebook(V, D, cents.values));
    pipeline.policy = TokenPolicy::KeepRepeats;
    std::vector<TokenSequence> train;
    for (std::size_t i = 0; i < n_utts; ++i) {
      const FeatureSequence fs = slms::test::random_features(5 + i % 13, D, rng);
      const std::string id = "utt" + std::to_string((i * 7919) % 1000);
      write_features(fs, dir / (id + ".slmf"));
      manifest.rows.push_back({id, "sys" + std::to_string(i % 4), id + ".slmf", std::nullopt});
      train.push_back(tokenize(fs, *pipeline.codebook, pipeline.policy, id));
    }
    manifest.base_dir = dir.path();
    pipeline.lm = std::make_shared<NgramModel>(train_ngram(train, V, pipeline.policy, 3, 0.5));
  }
};

}  // namespace

TEST_CASE("uniform model scores -ln(V+1)") {
  for (std::size_t V : {50u, 100u, 200u}) {
    const auto lm = uniform_lm(V, TokenPolicy::Dedup);
    std::vector<Token> t;
    for (Token i = 0; i < 10; ++i) t.push_back((i * 13) % static_cast<Token>(V));
    const ScoreReport r = speechlm_score(make_tokens(t, V, true), *lm);
    CHECK(std::abs(r.score + std::log(static_cast<double>(V + 1))) <= 1e-12);
    CHECK(r.num_tokens == 10);
    CHECK(r.temperature == 1.0);
    CHECK(r.ok());
  }
}

TEST_CASE("hand-computed bigram score") {
  const NgramModel m = hand_bigram();
  const ScoreReport r = speechlm_score(make_tokens({0, 1}, 2, true), m);
  CHECK(std::abs(r.score - (std::log(0.5) + std::log(0.25)) / 2.0) <= 1e-9);
  CHECK(r.score == doctest::Approx(-1.0397).epsilon(1e-4));
}

TEST_CASE("mean is invariant to repeating the log-probability list") {
  const std::vector<double> lp = {-0.5, -1.25, -3.0, -0.125};
  std::vector<double> twice = lp;
  twice.insert(twice.end(), lp.begin(), lp.end());
  CHECK(mean_logprob(twice) == mean_logprob(lp));
  CHECK(mean_logprob(lp) == (-0.5 - 1.25 - 3.0 - 0.125) / 4);
  CHECK(kind_of([] { mean_logprob(std::vector<double>{}); }) == ErrorKind::EmptyInput);
}

TEST_CASE("include_eos adds one term") {
  std::mt19937_64 rng(3);
  std::vector<TokenSequence> corpus;
  for (int i = 0; i < 20; ++i) corpus.push_back(make_tokens({0, 1, 2, 1}, 3, true));
  const NgramModel m = train_ngram(corpus, 3, TokenPolicy::Dedup, 2, 0.5);
  const auto ts = make_tokens({0, 2, 1}, 3, true);
  const auto lp = m.token_logprobs(ts.tokens, true);
  CHECK(speechlm_score(ts, m, 1.0, true).score == doctest::Approx((lp[0] + lp[1] + lp[2] + lp[3]) / 4));
  CHECK(speechlm_score(ts, m, 1.0, false).score == doctest::Approx((lp[0] + lp[1] + lp[2]) / 3));
  CHECK(speechlm_score(ts, m, 1.0, true).num_tokens == 3);
}

TEST_CASE("perplexity equals exp(-score) under an independent oracle") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<Token> tok(0, 7);
  std::vector<std::vector<Token>> raw;
  std::vector<TokenSequence> corpus;
  for (int i = 0; i < 80; ++i) {
    std::vector<Token> t(1 + i % 17);
    for (auto& x : t) x = tok(rng);
    corpus.push_back(make_tokens(t, 8, false));
    raw.push_back(t);
  }
  const NgramModel m = train_ngram(corpus, 8, TokenPolicy::KeepRepeats, 3, 0.7);
  const NgramOracle oracle(raw, 8, 3, 0.7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Token> t(1 + trial % 23);
    for (auto& x : t) x = tok(rng);
    double nll = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<Token> h(2, 8);
      h.insert(h.end(), t.begin(), t.begin() + static_cast<long>(i));
      nll -= std::log(oracle.prob(h, t[i]));
    }
    const double ppl = std::exp(nll / static_cast<double>(t.size()));
    const double score = speechlm_score(make_tokens(t, 8, false), m).score;
    CHECK(std::abs(std::exp(-score) - ppl) <= 1e-9 * ppl);
  }
}

TEST_CASE("temperature moves scores toward -ln(V+1)") {
  std::vector<TokenSequence> corpus;
  for (int i = 0; i < 30; ++i) corpus.push_back(make_tokens({0, 1, 2, 3, 4}, 5, true));
  const NgramModel m = train_ngram(corpus, 5, TokenPolicy::Dedup, 2, 0.5);
  const double flat = -std::log(6.0);
  for (const auto& t : {std::vector<Token>{0, 1, 2}, std::vector<Token>{4, 3, 2, 1}}) {
    const auto ts = make_tokens(t, 5, true);
    double prev = INFINITY;
    for (double T : {1.0, 10.0, 1e6}) {
      const double gap = std::abs(speechlm_score(ts, m, T).score - flat);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev <= 1e-3);
  }
}

TEST_CASE("score errors") {
  const auto lm = uniform_lm(4, TokenPolicy::Dedup);
  CHECK(kind_of([&] { speechlm_score(make_tokens({}, 4, true), *lm); }) == ErrorKind::EmptyInput);
  CHECK(kind_of([&] { speechlm_score(make_tokens({1, 1}, 4, false), *lm); }) == ErrorKind::PolicyMismatch);
}

TEST_CASE("score_corpus") {
  Fixture fx(12);
  const auto one = score_corpus(fx.manifest, fx.pipeline, 1);
  REQUIRE(one.size() == 12);
  CHECK(std::is_sorted(one.begin(), one.end(), [](const auto& a, const auto& b) { return a.utt_id < b.utt_id; }));
  for (const auto& r : one) {
    CHECK(r.ok());
    CHECK(r.score <= 0.0);
  }
  const std::string csv = format_scores_csv(one);
  CHECK(format_scores_csv(score_corpus(fx.manifest, fx.pipeline, 8)) == csv);
  EvalManifest shuffled = fx.manifest;
  std::reverse(shuffled.rows.begin(), shuffled.rows.end());
  CHECK(format_scores_csv(score_corpus(shuffled, fx.pipeline, 3)) == csv);

  EvalManifest empty;
  CHECK(score_corpus(empty, fx.pipeline).empty());
}

TEST_CASE("unreadable rows become error rows") {
  Fixture fx(3);
  fx.manifest.rows[1].path = "missing.slmf";
  const std::string bad_id = fx.manifest.rows[1].utt_id;
  const auto reports = score_corpus(fx.manifest, fx.pipeline, 2);
  REQUIRE(reports.size() == 3);
  std::size_t ok = 0;
  for (const auto& r : reports) {
    if (r.ok()) {
      ++ok;
    } else {
      CHECK(r.utt_id == bad_id);
      CHECK(r.status == "error:FileNotFound");
      CHECK(std::isnan(r.score));
    }
  }
  CHECK(ok == 2);
  const std::string csv = format_scores_csv(reports);
  CHECK(csv.find(bad_id + ",nan,0,error:FileNotFound") != std::string::npos);
}

TEST_CASE("component consistency") {
  Fixture fx(4);
  ScoringPipeline p = fx.pipeline;
  p.lm = uniform_lm(7, TokenPolicy::KeepRepeats);
  CHECK(kind_of([&] { score_corpus(fx.manifest, p); }) == ErrorKind::ComponentMismatch);
  p = fx.pipeline;
  p.policy = TokenPolicy::Dedup;
  CHECK(kind_of([&] { check_components(p); }) == ErrorKind::ComponentMismatch);
  p = fx.pipeline;
  p.lm = nullptr;
  CHECK(kind_of([&] { check_components(p); }) == ErrorKind::ComponentMismatch);
}

TEST_CASE("scores csv round trip") {
  std::vector<ScoreReport> in(3);
  in[0] = {"a", -1.234567891234, 12, TokenPolicy::Dedup, 1.0, "ok"};
  in[1] = {"b", NAN, 0, TokenPolicy::Dedup, 1.0, "error:TooShort"};
  in[2] = {"c", -0.5, 3, TokenPolicy::Dedup, 1.0, "ok"};
  const std::string text = format_scores_csv(in);
  CHECK(text == "utt_id,score,num_tokens,status\na,-1.23456789,12,ok\nb,nan,0,error:TooShort\nc,-0.5,3,ok\n");
  const auto back = parse_scores_csv(text);
  REQUIRE(back.size() == 3);
  CHECK(back[0].score == -1.23456789);
  CHECK(std::isnan(back[1].score));
  CHECK(!back[1].ok());
  CHECK(back[2].num_tokens == 3);
  CHECK(format_scores_csv(back) == text);
  CHECK(kind_of([] { parse_scores_csv("utt,score\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_scores_csv("utt_id,score,num_tokens,status\na,x,1,ok\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_scores_csv("utt_id,score,num_tokens,status\na,nan,1,ok\n"); }) == ErrorKind::ParseError);
}
