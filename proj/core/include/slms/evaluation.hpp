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
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slms/correlation.hpp"
#include "slms/manifest.hpp"
#include "slms/scoring.hpp"
#include "slms/tokenizer.hpp"
#include "slms/ulm.hpp"

namespace slms {

struct CorrelationResult {
  Coefficient lcc;
  Coefficient srcc;
  Coefficient ktau;
  std::size_t n = 0;
};

CorrelationResult correlate(std::span<const double> x, std::span<const double> y);

struct SystemPair {
  std::string system_id;
  double mean_score = 0.0;
  double mean_mos = 0.0;
  std::size_t num_scored = 0;
  std::size_t num_failed = 0;  // error rows plus manifest rows without a score

  bool partial() const { return num_failed > 0; }
};

/// Arithmetic means of successful scores and of MOS within each system,
/// sorted by system_id. Systems without any successful score are omitted
/// (and reported by evaluate() as partial). Throws UnknownUttId / MissingMos.
std::vector<SystemPair> aggregate_system_level(const EvalManifest& manifest,
                                               std::span<const ScoreReport> scores);

struct EvalReport {
  CorrelationResult utterance;
  CorrelationResult system;
  std::vector<std::string> degenerate_flags;  // e.g. "system.lcc"
  std::vector<std::string> partial_systems;
  std::size_t failed_utterances = 0;
};

/// Utterance-level correlation over successful (score, MOS) rows and
/// system-level correlation over aggregated pairs.
EvalReport evaluate(const EvalManifest& manifest, std::span<const ScoreReport> scores);

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline constexpr int kReportFormatVersion = 1;

/// JSON with keys format_version, utterance.{lcc,srcc,ktau,n}, system.{lcc,srcc,ktau,n},
/// degenerate_flags, partial_systems, failed_utterances and config.
/// Undefined coefficients are written as null.
std::string format_report_json(const EvalReport& report, const ConfigEcho& config);

/// Replaces each token, independently with probability \p rate, by a uniformly
/// drawn different unit. Deduplicated inputs are deduplicated again afterwards.
TokenSequence corrupt_tokens(const TokenSequence& ts, double rate, std::mt19937_64& rng);

struct CorruptionPoint {
  double rate = 0.0;
  double mean_score = 0.0;
  std::size_t num_utterances = 0;
};

/// Mean SpeechLMScore of the corrupted corpus at every rate. Rate index i
/// draws from its own generator seeded with seed + i.
std::vector<CorruptionPoint> corruption_benchmark(const UnitLM& lm,
                                                  std::span<const TokenSequence> clean,
                                                  std::span<const double> rates, std::uint64_t seed,
                                                  std::size_t workers = 1);

std::string format_corruption_json(std::span<const CorruptionPoint> points, const ConfigEcho& config);

}  // namespace slms
