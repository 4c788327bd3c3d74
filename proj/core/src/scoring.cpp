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

#include "slms/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"
#include "slms/parallel.hpp"

namespace slms {

double mean_logprob(std::span<const double> logprobs) {
  if (logprobs.empty()) fail(ErrorKind::EmptyInput, "mean of no log-probabilities");
  double sum = 0.0;
  for (double lp : logprobs) sum += lp;
  return sum / static_cast<double>(logprobs.size());
}

ScoreReport speechlm_score(const TokenSequence& tokens, const UnitLM& lm, double temperature,
                           bool include_eos) {
  const auto lps = cond_logprobs(lm, tokens, temperature, include_eos);
  ScoreReport r;
  r.utt_id = tokens.utt_id;
  r.score = mean_logprob(lps);
  r.num_tokens = tokens.tokens.size();
  r.policy = tokens.policy();
  r.temperature = temperature;
  return r;
}

void check_components(const ScoringPipeline& p) {
  if (!p.codebook || !p.lm) fail(ErrorKind::ComponentMismatch, "pipeline needs a codebook and a model");
  if (p.codebook->vocab_size != p.lm->vocab().units) {
    fail(ErrorKind::ComponentMismatch, "codebook V=" + std::to_string(p.codebook->vocab_size) +
                                           " but model V=" + std::to_string(p.lm->vocab().units));
  }
  if (p.policy != p.lm->policy()) {
    fail(ErrorKind::ComponentMismatch, "pipeline policy " + std::string(to_string(p.policy)) +
                                           " but model was trained with " +
                                           std::string(to_string(p.lm->policy())));
  }
}

std::vector<ScoreReport> score_corpus(const EvalManifest& manifest, const ScoringPipeline& pipeline,
                                      std::size_t workers) {
  check_components(pipeline);
  std::vector<ScoreReport> reports(manifest.rows.size());
  parallel_for(manifest.rows.size(), workers, [&](std::size_t i) {
    const ManifestRow& row = manifest.rows[i];
    try {
      const FeatureSequence fs = load_input_features(manifest.resolve(row), pipeline.frontend);
      const TokenSequence ts = tokenize(fs, *pipeline.codebook, pipeline.policy, row.utt_id);
      reports[i] = speechlm_score(ts, *pipeline.lm, pipeline.temperature, pipeline.include_eos);
    } catch (const Error& e) {
      ScoreReport r;
      r.utt_id = row.utt_id;
      r.score = std::numeric_limits<double>::quiet_NaN();
      r.policy = pipeline.policy;
      r.temperature = pipeline.temperature;
      r.status = "error:" + std::string(to_string(e.kind()));
      reports[i] = std::move(r);
    }
  });
  std::sort(reports.begin(), reports.end(),
            [](const ScoreReport& a, const ScoreReport& b) { return a.utt_id < b.utt_id; });
  return reports;
}

std::string format_scores_csv(std::span<const ScoreReport> reports) {
  std::string out = "utt_id,score,num_tokens,status\n";
  char buf[64];
  for (const auto& r : reports) {
    out += r.utt_id;
    out += ',';
    if (r.ok()) {
      std::snprintf(buf, sizeof buf, "%.9g", r.score);
      out += buf;
    } else {
      out += "nan";
    }
    out += ',';
    out += std::to_string(r.num_tokens);
    out += ',';
    out += r.status;
    out += '\n';
  }
  return out;
}

void write_scores_csv(std::span<const ScoreReport> reports, const std::filesystem::path& path) {
  write_file_text(path, format_scores_csv(reports));
}

std::vector<ScoreReport> parse_scores_csv(std::string_view text, const std::string& what) {
  std::vector<ScoreReport> out;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = what + ":" + std::to_string(line_no);
    const auto f = split_csv_line(line, where);
    if (header) {
      if (f.size() != 4 || f[0] != "utt_id" || f[1] != "score" || f[2] != "num_tokens" ||
          f[3] != "status") {
        fail(ErrorKind::ParseError, where + ": expected header utt_id,score,num_tokens,status");
      }
      header = false;
      continue;
    }
    if (f.size() != 4) fail(ErrorKind::ParseError, where + ": expected 4 fields");
    ScoreReport r;
    r.utt_id = std::string(f[0]);
    r.status = std::string(f[3]);
    const std::string score_text(f[1]);
    const std::string count_text(f[2]);
    char* end = nullptr;
    r.score = std::strtod(score_text.c_str(), &end);
    if (end != score_text.c_str() + score_text.size()) fail(ErrorKind::ParseError, where + ": bad score");
    r.num_tokens = std::strtoull(count_text.c_str(), &end, 10);
    if (end != count_text.c_str() + count_text.size()) {
      fail(ErrorKind::ParseError, where + ": bad num_tokens");
    }
    if (r.ok() && !std::isfinite(r.score)) fail(ErrorKind::ParseError, where + ": non-finite ok score");
    out.push_back(std::move(r));
  }
  if (header) fail(ErrorKind::ParseError, what + ": missing header");
  return out;
}

std::vector<ScoreReport> read_scores_csv(const std::filesystem::path& path) {
  return parse_scores_csv(read_file_text(path), path.string());
}

}  // namespace slms
