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

#include "slms/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "slms/error.hpp"
#include "slms/parallel.hpp"

namespace slms {
namespace {

nlohmann::ordered_json coefficient_json(const Coefficient& c) {
  if (c.degenerate) return nullptr;
  return c.value;
}

nlohmann::ordered_json correlation_json(const CorrelationResult& r) {
  nlohmann::ordered_json j;
  j["lcc"] = coefficient_json(r.lcc);
  j["srcc"] = coefficient_json(r.srcc);
  j["ktau"] = coefficient_json(r.ktau);
  j["n"] = r.n;
  return j;
}

nlohmann::ordered_json config_json(const ConfigEcho& config) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

void collect_flags(const std::string& level, const CorrelationResult& r, std::vector<std::string>& out) {
  if (r.lcc.degenerate) out.push_back(level + ".lcc");
  if (r.srcc.degenerate) out.push_back(level + ".srcc");
  if (r.ktau.degenerate) out.push_back(level + ".ktau");
}

}  // namespace

CorrelationResult correlate(std::span<const double> x, std::span<const double> y) {
  CorrelationResult r;
  r.lcc = pearson(x, y);
  r.srcc = spearman(x, y);
  r.ktau = kendall_tau_b(x, y);
  r.n = x.size();
  return r;
}

std::vector<SystemPair> aggregate_system_level(const EvalManifest& manifest,
                                               std::span<const ScoreReport> scores) {
  std::unordered_map<std::string, const ManifestRow*> by_utt;
  for (const auto& row : manifest.rows) by_utt.emplace(row.utt_id, &row);

  struct Acc {
    double score_sum = 0.0;
    double mos_sum = 0.0;
    std::size_t scored = 0;
    std::size_t failed = 0;
    std::size_t rows = 0;
  };
  std::map<std::string, Acc> systems;
  for (const auto& row : manifest.rows) ++systems[row.system_id].rows;

  // Sum in utt_id order so the means do not depend on input row order.
  std::vector<const ScoreReport*> sorted;
  sorted.reserve(scores.size());
  for (const auto& s : scores) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoreReport* a, const ScoreReport* b) { return a->utt_id < b->utt_id; });

  for (const ScoreReport* s : sorted) {
    const auto it = by_utt.find(s->utt_id);
    if (it == by_utt.end()) fail(ErrorKind::UnknownUttId, "'" + s->utt_id + "' is not in the manifest");
    Acc& acc = systems[it->second->system_id];
    if (!s->ok()) {
      ++acc.failed;
      continue;
    }
    if (!it->second->mos) fail(ErrorKind::MissingMos, "'" + s->utt_id + "' has no MOS");
    acc.score_sum += s->score;
    acc.mos_sum += *it->second->mos;
    ++acc.scored;
  }

  std::vector<SystemPair> out;
  for (const auto& [id, acc] : systems) {
    SystemPair p;
    p.system_id = id;
    p.num_scored = acc.scored;
    p.num_failed = acc.rows - acc.scored;
    if (acc.scored == 0) continue;
    p.mean_score = acc.score_sum / static_cast<double>(acc.scored);
    p.mean_mos = acc.mos_sum / static_cast<double>(acc.scored);
    out.push_back(std::move(p));
  }
  return out;
}

EvalReport evaluate(const EvalManifest& manifest, std::span<const ScoreReport> scores) {
  const auto systems = aggregate_system_level(manifest, scores);

  std::unordered_map<std::string, double> mos_by_utt;
  for (const auto& row : manifest.rows) {
    if (row.mos) mos_by_utt.emplace(row.utt_id, *row.mos);
  }
  std::vector<const ScoreReport*> ok;
  EvalReport report;
  for (const auto& s : scores) {
    if (s.ok()) {
      ok.push_back(&s);
    } else {
      ++report.failed_utterances;
    }
  }
  std::sort(ok.begin(), ok.end(),
            [](const ScoreReport* a, const ScoreReport* b) { return a->utt_id < b->utt_id; });
  std::vector<double> x, y;
  for (const ScoreReport* s : ok) {
    x.push_back(s->score);
    y.push_back(mos_by_utt.at(s->utt_id));
  }
  report.utterance = correlate(x, y);

  std::vector<double> sx, sy;
  for (const auto& p : systems) {
    sx.push_back(p.mean_score);
    sy.push_back(p.mean_mos);
  }
  report.system = correlate(sx, sy);

  collect_flags("utterance", report.utterance, report.degenerate_flags);
  collect_flags("system", report.system, report.degenerate_flags);

  std::map<std::string, std::size_t> scored_per_system;
  for (const auto& p : systems) {
    if (p.partial()) report.partial_systems.push_back(p.system_id);
    scored_per_system[p.system_id] = p.num_scored;
  }
  for (const auto& row : manifest.rows) {
    if (!scored_per_system.contains(row.system_id)) {
      scored_per_system[row.system_id] = 0;
      report.partial_systems.push_back(row.system_id);
    }
  }
  std::sort(report.partial_systems.begin(), report.partial_systems.end());
  return report;
}

std::string format_report_json(const EvalReport& report, const ConfigEcho& config) {
  nlohmann::ordered_json j;
  j["format_version"] = kReportFormatVersion;
  j["utterance"] = correlation_json(report.utterance);
  j["system"] = correlation_json(report.system);
  j["degenerate_flags"] = report.degenerate_flags;
  j["partial_systems"] = report.partial_systems;
  j["failed_utterances"] = report.failed_utterances;
  j["config"] = config_json(config);
  return j.dump(2) + "\n";
}

TokenSequence corrupt_tokens(const TokenSequence& ts, double rate, std::mt19937_64& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) fail(ErrorKind::InvalidArgument, "substitution rate must lie in [0, 1]");
  if (ts.vocab_size < 2) fail(ErrorKind::InvalidArgument, "substitution needs V >= 2");
  TokenSequence out = ts;
  std::bernoulli_distribution hit(rate);
  std::uniform_int_distribution<Token> other(0, static_cast<Token>(ts.vocab_size - 2));
  for (Token& t : out.tokens) {
    if (!hit(rng)) continue;
    const Token r = other(rng);
    t = r >= t ? r + 1 : r;
  }
  if (ts.dedup_applied) out = dedup(out);
  return out;
}

std::vector<CorruptionPoint> corruption_benchmark(const UnitLM& lm, std::span<const TokenSequence> clean,
                                                  std::span<const double> rates, std::uint64_t seed,
                                                  std::size_t workers) {
  if (clean.empty()) fail(ErrorKind::EmptyCorpus, "no clean sequences");
  for (const auto& ts : clean) {
    if (ts.vocab_size != lm.vocab().units) {
      fail(ErrorKind::ComponentMismatch, "corpus V=" + std::to_string(ts.vocab_size) +
                                             " but model V=" + std::to_string(lm.vocab().units));
    }
    if (ts.policy() != lm.policy()) {
      fail(ErrorKind::PolicyMismatch, "corpus policy differs from the model's");
    }
  }
  std::vector<CorruptionPoint> points(rates.size());
  parallel_for(rates.size(), workers, [&](std::size_t i) {
    std::mt19937_64 rng(seed + i);
    double sum = 0.0;
    for (const auto& ts : clean) {
      sum += speechlm_score(corrupt_tokens(ts, rates[i], rng), lm).score;
    }
    points[i] = {rates[i], sum / static_cast<double>(clean.size()), clean.size()};
  });
  return points;
}

std::string format_corruption_json(std::span<const CorruptionPoint> points, const ConfigEcho& config) {
  nlohmann::ordered_json j;
  j["format_version"] = kReportFormatVersion;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::vector<double> rates, means;
  for (const auto& p : points) {
    rows.push_back({{"rate", p.rate}, {"mean_score", p.mean_score}, {"n", p.num_utterances}});
    rates.push_back(p.rate);
    means.push_back(p.mean_score);
  }
  j["points"] = rows;
  if (points.size() >= 2) {
    j["srcc_rate_vs_score"] = coefficient_json(spearman(rates, means));
  }
  j["config"] = config_json(config);
  return j.dump(2) + "\n";
}

}  // namespace slms
