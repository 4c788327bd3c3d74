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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "slms/correlation.hpp"
#include "slms/demo.hpp"
#include "slms/error.hpp"
#include "slms/evaluation.hpp"
#include "slms/ngram.hpp"
#include "slms/quantizer.hpp"
#include "slms/rnn.hpp"
#include "slms/scoring.hpp"
#include "slms/tokenizer.hpp"
#include "support.hpp"

using namespace slms;
using slms::test::make_features;
using slms::test::make_tokens;

namespace {

// Tolerances and budgets.
constexpr double kUniformTol = 1e-12;
constexpr double kBigramTol = 1e-9;
constexpr double kSumTol = 1e-9;
constexpr double kMlTol = 1e-4;
constexpr double kArpaTol = 1e-6;
constexpr double kGradTol = 1e-4;
constexpr double kBlobAgreement = 0.99;
constexpr double kOracleTol = 1e-12;
constexpr double kMaxRateSrcc = -0.9;
constexpr double kAffineTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<Token> random_tokens(std::size_t n, std::size_t V, std::mt19937_64& rng) {
  std::uniform_int_distribution<Token> tok(0, static_cast<Token>(V - 1));
  std::vector<Token> t(n);
  for (auto& x : t) x = tok(rng);
  return t;
}

Outcome criterion1() {
  Outcome o;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (std::size_t V : {50u, 100u, 200u}) {
    const RnnShape shape{V, 4, 4, 1};
    const RnnModel flat(shape, TokenPolicy::KeepRepeats, std::vector<double>(shape.parameter_count(), 0.0));
    const double want = -std::log(static_cast<double>(V + 1));
    for (int trial = 0; trial < 10; ++trial) {
      const auto ts = make_tokens(random_tokens(1 + trial * 7, V, rng), V, false);
      worst = std::max(worst, std::abs(speechlm_score(ts, flat).score - want));
    }
  }
  require(o, worst <= kUniformTol, "uniform error " + fmt("%.3g", worst));

  // a = 0, b = 1: p(a | <s>) = 1/2, p(b | a) = 1/4.
  const Vocabulary v{2};
  std::vector<NgramModel::Table> tables(2);
  for (Token w : {Token{0}, Token{1}, v.eos()}) tables[0][{w}] = {std::log(1.0 / 3.0), 0.0};
  tables[1][{v.bos(), 0}] = {std::log(0.5), 0.0};
  tables[1][{0, 1}] = {std::log(0.25), 0.0};
  const NgramModel bigram(v, TokenPolicy::Dedup, 2, NAN, std::move(tables));
  const double hand = (std::log(0.5) + std::log(0.25)) / 2.0;
  const double got = speechlm_score(make_tokens({0, 1}, 2, true), bigram).score;
  require(o, std::abs(got - hand) <= kBigramTol, "bigram " + fmt("%.12g", got));
  if (o.pass) o.detail = "max uniform error " + fmt("%.2g", worst) + ", bigram " + fmt("%.10f", got);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto d = dedup(std::vector<Token>{20, 20, 20, 16, 17, 17});
  require(o, d == std::vector<Token>{20, 16, 17}, "fixed example");
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  std::uniform_int_distribution<std::size_t> vocab(1, 6);
  for (int trial = 0; trial < 10000 && o.pass; ++trial) {
    const auto t = random_tokens(len(rng), vocab(rng), rng);
    const auto once = dedup(t);
    require(o, dedup(std::span<const Token>(once)) == once, "idempotence");
    require(o, !once.empty() && once.size() <= t.size(), "length bound");
    for (std::size_t i = 1; i < once.size(); ++i) require(o, once[i] != once[i - 1], "adjacent repeat");
    std::size_t runs = 1;
    for (std::size_t i = 1; i < t.size(); ++i) runs += t[i] != t[i - 1];
    require(o, once.size() == runs, "length equals run count");
  }
  if (o.pass) o.detail = "10000 random sequences";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::mt19937_64 rng(3);
  const std::size_t V = 20;
  std::vector<TokenSequence> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(make_tokens(random_tokens(5 + i % 30, V, rng), V, false));
  const NgramModel m = train_ngram(corpus, V, TokenPolicy::KeepRepeats, 3, 0.75);
  std::uniform_int_distribution<Token> sym(0, static_cast<Token>(V));  // V is BOS
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Token> ctx = {sym(rng), sym(rng)};
    if (ctx[1] == V) ctx[0] = static_cast<Token>(V);
    double s = 0.0;
    for (double lp : m.log_distribution(ctx)) s += std::exp(lp);
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  require(o, worst_sum <= kSumTol, "sum error " + fmt("%.3g", worst_sum));

  std::vector<TokenSequence> toy;
  std::vector<std::vector<Token>> toy_raw;
  for (Token a = 0; a < 3; ++a) {
    for (Token b = 0; b < 3; ++b) {
      toy.push_back(make_tokens({a, b, a, b, b}, 3, false));
      toy_raw.push_back(toy.back().tokens);
    }
  }
  const NgramModel ml = train_ngram(toy, 3, TokenPolicy::KeepRepeats, 2, 1e-6);
  const slms::test::NgramOracle counts(toy_raw, 3, 2, 1e-6);
  double worst_ml = 0.0;
  for (const auto& [h, row] : counts.counts()) {
    if (h.empty()) continue;
    for (const auto& [w, c] : row) {
      const double ratio = static_cast<double>(c) / counts.context_total(h);
      worst_ml = std::max(worst_ml, std::abs(std::exp(ml.logprob(h, w)) - ratio));
    }
  }
  require(o, worst_ml <= kMlTol, "ML limit error " + fmt("%.3g", worst_ml));

  const NgramModel back = parse_arpa(format_arpa(m));
  double worst_arpa = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto ts = make_tokens(random_tokens(1 + i, V, rng), V, false);
    const auto a = cond_logprobs(m, ts);
    const auto b = cond_logprobs(back, ts);
    for (std::size_t k = 0; k < a.size(); ++k) worst_arpa = std::max(worst_arpa, std::abs(a[k] - b[k]));
  }
  require(o, worst_arpa <= kArpaTol, "ARPA error " + fmt("%.3g", worst_arpa));
  if (o.pass) {
    o.detail = "sum " + fmt("%.2g", worst_sum) + ", ML " + fmt("%.2g", worst_ml) + ", ARPA " +
               fmt("%.2g", worst_arpa);
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t V = 6;
    const RnnModel m = RnnModel::initialize({V, 4, 8, 1}, TokenPolicy::KeepRepeats, seed);
    std::mt19937_64 rng(100 + seed);
    const std::vector<TokenSequence> batch = {make_tokens(random_tokens(12, V, rng), V, false),
                                              make_tokens(random_tokens(5, V, rng), V, false)};
    worst = std::max(worst, gradcheck_rnn(m, batch, 1e-5).max_relative_error);
  }
  require(o, worst < kGradTol, "max relative error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max relative error " + fmt("%.2g", worst) + " (long double)";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::size_t runs = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    std::vector<FeatureSequence> corpus;
    for (int i = 0; i < 4; ++i) corpus.push_back(slms::test::random_features(150, 5, rng));
    KMeansConfig cfg;
    cfg.seed = seed;
    cfg.n_init = 3;
    const auto r = fit_kmeans(corpus, 12, cfg);
    ++runs;
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i) {
      require(o, r.inertia_trace[i] <= r.inertia_trace[i - 1], "inertia increased");
    }
  }

  double worst_agree = 1.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<float> n(0.0f, 0.05f);
    std::vector<float> v;
    std::vector<int> labels;
    for (int i = 0; i < 1000; ++i) {
      const int blob = i % 2;
      v.push_back(10.0f * blob + n(g));
      v.push_back(10.0f * blob + n(g));
      labels.push_back(blob);
    }
    const FeatureSequence fs = make_features(1000, 2, std::move(v));
    KMeansConfig cfg;
    cfg.seed = seed;
    const auto r = fit_kmeans(std::span(&fs, 1), 2, cfg);
    const auto got = assign(fs, r.codebook);
    std::size_t same = 0;
    for (std::size_t i = 0; i < got.size(); ++i) same += static_cast<int>(got[i]) == labels[i];
    const double agree = std::max(same, got.size() - same) / static_cast<double>(got.size());
    worst_agree = std::min(worst_agree, agree);
  }
  require(o, worst_agree >= kBlobAgreement, "blob agreement " + fmt("%.4f", worst_agree));

  const FeatureSequence frames = slms::test::random_features(100, 6, rng);
  const FeatureSequence cents = slms::test::random_features(16, 6, rng);
  const Codebook cb = slms::test::make_codebook(16, 6, cents.values);
  std::vector<std::vector<double>> f(100, std::vector<double>(6)), c(16, std::vector<double>(6));
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t k = 0; k < 6; ++k) f[i][k] = frames.values[i * 6 + k];
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t k = 0; k < 6; ++k) c[i][k] = cents.values[i * 6 + k];
  require(o, assign(frames, cb) == slms::test::brute_force_nearest(f, c), "assign differs from brute force");
  if (o.pass) o.detail = std::to_string(runs) + " monotone traces, blob agreement " + fmt("%.3f", worst_agree);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> len(2, 200);
  std::normal_distribution<double> g(0.0, 1.0);
  std::bernoulli_distribution coarse(0.3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = len(rng);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g(rng);
      y[i] = 0.5 * x[i] + g(rng);
      if (coarse(rng)) x[i] = std::round(x[i] * 2.0) / 2.0;
      if (coarse(rng)) y[i] = std::round(y[i]);
    }
    worst = std::max(worst, std::abs(pearson(x, y).value - slms::test::oracle_pearson(x, y)));
    worst = std::max(worst, std::abs(spearman(x, y).value - slms::test::oracle_spearman(x, y)));
    worst = std::max(worst, std::abs(kendall_tau_b(x, y).value - slms::test::oracle_kendall_tau_b(x, y)));
  }
  require(o, worst <= kOracleTol, "oracle error " + fmt("%.3g", worst));
  const std::vector<double> a = {1, 2, 3, 4}, b = {1, 3, 2, 4}, p = {1, 2, 3}, q = {1, 3, 2};
  const double r = pearson(a, b).value, tau = kendall_tau_b(p, q).value;
  require(o, std::abs(r - 0.8) <= kOracleTol, "r = " + fmt("%.17g", r));
  require(o, std::abs(tau - 1.0 / 3.0) <= kOracleTol, "tau = " + fmt("%.17g", tau));
  if (o.pass) o.detail = "max oracle error " + fmt("%.2g", worst) + ", r " + fmt("%.15g", r) + ", tau " + fmt("%.15g", tau);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto setup = synthetic_corruption_setup(50, 500, 100, 3, 7);
  const std::vector<double> rates = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  const auto pts = corruption_benchmark(*setup.lm, setup.clean, rates, 7);
  std::vector<double> means;
  for (const auto& pt : pts) means.push_back(pt.mean_score);
  const double srcc = spearman(rates, means).value;
  require(o, srcc <= kMaxRateSrcc, "srcc " + fmt("%.4f", srcc));
  require(o, means.back() < means.front(), "p=0.5 not below p=0");
  if (o.pass) {
    o.detail = "srcc " + fmt("%.3f", srcc) + ", mean score " + fmt("%.3f", means.front()) + " -> " +
               fmt("%.3f", means.back());
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const EvalManifest m = synthetic_manifest(187, 38, 8);
  std::vector<ScoreReport> scores;
  for (const auto& row : m.rows) {
    ScoreReport r;
    r.utt_id = row.utt_id;
    r.score = 0.5 * *row.mos - 6.0;  // exact in binary floating point
    r.num_tokens = 1;
    scores.push_back(r);
  }
  const EvalReport rep = evaluate(m, scores);
  require(o, rep.system.n == 187, "system n " + std::to_string(rep.system.n));
  require(o, rep.utterance.n == 7106, "utterance n " + std::to_string(rep.utterance.n));
  double worst = 0.0;
  for (const auto& c : {rep.utterance, rep.system}) {
    for (const auto& k : {c.lcc, c.srcc, c.ktau}) worst = std::max(worst, k.degenerate ? 1.0 : std::abs(k.value - 1.0));
  }
  require(o, worst <= kAffineTol, "coefficient error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "n 187/7106, max |coef - 1| " + fmt("%.2g", worst);
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (int workers : {1, 8}) {
    slms::test::TempDir a, b;
    require(o, slms::test::run_demo_pipeline(SLMS_CLI_PATH, a.path(), workers, 13) == 0, "pipeline failed");
    require(o, slms::test::run_demo_pipeline(SLMS_CLI_PATH, b.path(), workers, 13) == 0, "pipeline failed");
    if (!o.pass) break;
    const std::string w = " at " + std::to_string(workers) + " workers";
    require(o, slms::test::slurp(a / "scores.csv") == slms::test::slurp(b / "scores.csv"), "scores differ" + w);
    require(o, slms::test::slurp(a / "report.json") == slms::test::slurp(b / "report.json"), "report differs" + w);
    require(o, !slms::test::slurp(a / "scores.csv").empty(), "empty scores" + w);
  }
  if (o.pass) o.detail = "byte-identical at 1 and 8 workers";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "score exactness", 1.0, criterion1},
      {2, "dedup fidelity", 5.0, criterion2},
      {3, "n-gram soundness", 0.0, criterion3},
      {4, "recurrent LM gradient check", 30.0, criterion4},
      {5, "k-means", 0.0, criterion5},
      {6, "correlation oracle equivalence", 0.0, criterion6},
      {7, "degradation monotonicity", 60.0, criterion7},
      {8, "evaluation protocol shape", 0.0, criterion8},
      {9, "determinism", 0.0, criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && c.budget_s > 0.0 && secs >= c.budget_s) {
      o = {false, "took " + fmt("%.2f", secs) + " s, budget " + fmt("%.0f", c.budget_s) + " s"};
    }
    failed += !o.pass;
    std::printf("%s criterion %d: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
