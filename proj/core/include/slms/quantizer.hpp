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
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "slms/features.hpp"

namespace slms {

struct Standardization {
  std::vector<float> mean;
  std::vector<float> stddev;  // every entry > 0
};

/// V centroids of dimension D. When `standardize` is set the centroids live in
/// standardized space and frames are mapped there before the distance search.
struct Codebook {
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  std::vector<float> centroids;  // vocab_size * dim, row-major
  std::optional<Standardization> standardize;

  std::span<const float> centroid(std::size_t v) const {
    return std::span(centroids).subspan(v * dim, dim);
  }
};

void validate(const Codebook& cb);

struct KMeansConfig {
  int max_iters = 100;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  int n_init = 3;
  bool standardize = false;
  /// Reservoir-subsample pooled frames above this count; 0 keeps all.
  std::size_t max_frames = 2'000'000;
  std::size_t workers = 1;
};

struct KMeansResult {
  Codebook codebook;
  /// Total squared distance after each assignment step of the kept restart.
  std::vector<double> inertia_trace;
  /// Final inertia of every restart, in restart order.
  std::vector<double> restart_inertias;
  std::size_t best_restart = 0;
};

/// k-means++ seeding followed by Lloyd iterations on the pooled frames of
/// `corpus`. Restart r uses seed + r; the lowest final inertia wins (first on
/// ties). An emptied cluster takes the point farthest from its centroid.
KMeansResult fit_kmeans(std::span<const FeatureSequence> corpus, std::size_t vocab_size,
                        const KMeansConfig& cfg = {});

/// Nearest-centroid id per frame, squared Euclidean distance, lowest index on ties.
std::vector<std::uint32_t> assign(const FeatureSequence& fs, const Codebook& cb);

/// Single-frame variant of assign().
std::uint32_t nearest_centroid(std::span<const float> frame, const Codebook& cb);

inline constexpr std::uint32_t kCodebookFileVersion = 1;

/// "SLMC" | u32 version | u32 V | u32 D | u8 has_standardize
/// | [D f32 means, D f32 stds] | V*D f32 centroids.
void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_codebook(const Codebook& cb);
Codebook decode_codebook(std::span<const std::uint8_t> bytes, const std::string& what);

}  // namespace slms
