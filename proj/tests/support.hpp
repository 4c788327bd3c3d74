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

// Shared test helpers and independent reference implementations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "slms/features.hpp"
#include "slms/quantizer.hpp"
#include "slms/tokenizer.hpp"

namespace slms::test {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("slms-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline FeatureSequence make_features(std::size_t T, std::size_t D, std::vector<float> values) {
  FeatureSequence fs;
  fs.num_frames = T;
  fs.dim = D;
  fs.values = std::move(values);
  return fs;
}

inline FeatureSequence random_features(std::size_t T, std::size_t D, std::mt19937_64& rng) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> v(T * D);
  for (auto& x : v) x = g(rng);
  return make_features(T, D, std::move(v));
}

inline Codebook make_codebook(std::size_t V, std::size_t D, std::vector<float> centroids) {
  Codebook cb;
  cb.vocab_size = V;
  cb.dim = D;
  cb.centroids = std::move(centroids);
  return cb;
}

inline TokenSequence make_tokens(std::vector<Token> tokens, std::size_t V, bool dedup_applied,
                                 std::string id = "u") {
  TokenSequence ts;
  ts.tokens = std::move(tokens);
  ts.vocab_size = V;
  ts.dedup_applied = dedup_applied;
  ts.utt_id = std::move(id);
  return ts;
}

// ---- quantizer ------------------------------------------------------------

inline std::vector<std::uint32_t> brute_force_nearest(const std::vector<std::vector<double>>& frames,
                                                      const std::vector<std::vector<double>>& centroids) {
  std::vector<std::uint32_t> out;
  for (const auto& f : frames) {
    double best = INFINITY;
    std::uint32_t arg = 0;
    for (std::size_t v = 0; v < centroids.size(); ++v) {
      double d = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) d += (f[k] - centroids[v][k]) * (f[k] - centroids[v][k]);
      if (d < best) {
        best = d;
        arg = static_cast<std::uint32_t>(v);
      }
    }
    out.push_back(arg);
  }
  return out;
}

// ---- correlation ------------------------------------------------------------

inline double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return (sxy / n) / std::sqrt((sxx / n) * (syy / n));
}

inline std::vector<double> oracle_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double v : x) {
      if (v < x[i]) ++less;
      if (v == x[i]) ++equal;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

inline double oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return oracle_pearson(oracle_ranks(x), oracle_ranks(y));
}

inline double oracle_kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  double c = 0, d = 0, tx = 0, ty = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0) ++tx;
      if (b == 0) ++ty;
      if (a * b > 0) ++c;
      if (a * b < 0) ++d;
    }
  }
  const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
  return (c - d) / std::sqrt((n0 - tx) * (n0 - ty));
}

// ---- n-gram -------------------------------------------------------------

// Counts and interpolated absolute discounting evaluated straight from the
// definition, recursing to a uniform base over units + EOS.
class NgramOracle {
 public:
  NgramOracle(const std::vector<std::vector<Token>>& corpus, std::size_t V, int order, double delta)
      : V_(V), order_(order), delta_(delta) {
    const Token bos = static_cast<Token>(V), eos = static_cast<Token>(V + 1);
    for (const auto& seq : corpus) {
      std::vector<Token> s(static_cast<std::size_t>(order - 1), bos);
      s.insert(s.end(), seq.begin(), seq.end());
      s.push_back(eos);
      for (std::size_t j = static_cast<std::size_t>(order - 1); j < s.size(); ++j) {
        for (int k = 0; k < order; ++k) {
          std::vector<Token> h(s.begin() + static_cast<long>(j) - k, s.begin() + static_cast<long>(j));
          ++count_[h][s[j]];
        }
      }
    }
  }

  double prob(std::vector<Token> h, Token w) const {
    if (h.size() > static_cast<std::size_t>(order_ - 1)) h.erase(h.begin(), h.end() - (order_ - 1));
    const double lower = h.empty() ? 1.0 / static_cast<double>(V_ + 1)
                                   : prob(std::vector<Token>(h.begin() + 1, h.end()), w);
    const auto it = count_.find(h);
    if (it == count_.end()) return lower;
    double total = 0, types = 0, cw = 0;
    for (const auto& [word, c] : it->second) {
      total += static_cast<double>(c);
      types += 1;
      if (word == w) cw = static_cast<double>(c);
    }
    return std::max(cw - delta_, 0.0) / total + delta_ * types / total * lower;
  }

  double count(const std::vector<Token>& h, Token w) const {
    const auto it = count_.find(h);
    if (it == count_.end()) return 0;
    const auto jt = it->second.find(w);
    return jt == it->second.end() ? 0 : static_cast<double>(jt->second);
  }

  double context_total(const std::vector<Token>& h) const {
    const auto it = count_.find(h);
    if (it == count_.end()) return 0;
    double t = 0;
    for (const auto& [w, c] : it->second) t += static_cast<double>(c);
    return t;
  }

  const std::map<std::vector<Token>, std::map<Token, std::uint64_t>>& counts() const { return count_; }

 private:
  std::size_t V_;
  int order_;
  double delta_;
  std::map<std::vector<Token>, std::map<Token, std::uint64_t>> count_;
};

// ---- CLI ----------------------------------------------------------------

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

// Runs `cli args` inside `dir`, capturing stdout/stderr into files there.
inline int run_cli(const std::string& cli, const std::filesystem::path& dir, const std::string& args,
                   const std::string& log = "cli.log") {
  const std::string cmd = "cd " + shell_quote(dir.string()) + " && " + shell_quote(cli) + " " + args +
                          " >>" + log + " 2>>" + log + ".err";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// demo-corpus -> features -> train-quantizer -> tokenize -> train-ulm -> score
// -> evaluate, all with relative paths inside `dir`. Returns the first nonzero
// exit code, or 0.
inline int run_demo_pipeline(const std::string& cli, const std::filesystem::path& dir, int workers,
                             std::uint64_t seed) {
  const std::string w = " --workers " + std::to_string(workers);
  const std::string s = std::to_string(seed);
  const std::vector<std::string> steps = {
      "demo-corpus --out demo --seed " + s + w,
      "features --in demo/train --out feats" + w,
      "train-quantizer --in feats --out codebook.slmc --vocab-size 50 --seed " + s + w,
      "tokenize --codebook codebook.slmc --policy dedup --in feats --out tokens.txt" + w,
      "train-ulm --tokens tokens.txt --codebook codebook.slmc --policy dedup --backend ngram --out ulm.arpa" + w,
      "score --codebook codebook.slmc --ulm ulm.arpa --policy dedup --manifest demo/manifest.csv --out scores.csv" + w,
      "evaluate --manifest demo/manifest.csv --scores scores.csv --out report.json" + w,
  };
  for (const auto& step : steps) {
    if (int rc = run_cli(cli, dir, step); rc != 0) return rc;
  }
  return 0;
}

}  // namespace slms::test
