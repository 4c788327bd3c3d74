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
#include "slms/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"
#include "slms/parallel.hpp"

namespace slms {
namespace {

constexpr std::size_t kAssignChunk = 1024;

// Pooled frames in double precision, already standardized when requested.
struct PointSet {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> x;

  const double* row(std::size_t i) const { return x.data() + i * dim; }
};

double squared_distance(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

struct Assignment {
  std::vector<std::uint32_t> label;
  std::vector<double> dist;
  double inertia = 0.0;
};

Assignment assign_points(const PointSet& pts, const std::vector<double>& centers,
                         std::size_t k, std::size_t workers) {
  Assignment a;
  a.label.resize(pts.n);
  a.dist.resize(pts.n);
  const std::size_t chunks = (pts.n + kAssignChunk - 1) / kAssignChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(pts.n, (c + 1) * kAssignChunk);
    for (std::size_t i = c * kAssignChunk; i < end; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_v = 0;
      for (std::size_t v = 0; v < k; ++v) {
        const double d = squared_distance(pts.row(i), centers.data() + v * pts.dim, pts.dim);
        if (d < best) {
          best = d;
          best_v = static_cast<std::uint32_t>(v);
        }
      }
      a.label[i] = best_v;
      a.dist[i] = best;
    }
  });
  for (double d : a.dist) a.inertia += d;
  return a;
}

std::vector<double> kmeans_plus_plus(const PointSet& pts, std::size_t k, std::mt19937_64& rng) {
  std::vector<double> centers(k * pts.dim);
  std::uniform_int_distribution<std::size_t> pick(0, pts.n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t first = pick(rng);
  std::copy_n(pts.row(first), pts.dim, centers.begin());
  std::vector<double> d2(pts.n);
  for (std::size_t i = 0; i < pts.n; ++i) d2[i] = squared_distance(pts.row(i), pts.row(first), pts.dim);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t chosen = pts.n - 1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < pts.n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc >= target) {
          chosen = i;
          break;
        }
      }
      // Rounding can leave target above the last partial sum.
      if (d2[chosen] == 0.0) {
        for (std::size_t i = pts.n; i-- > 0;) {
          if (d2[i] > 0.0) {
            chosen = i;
            break;
          }
        }
      }
    } else {
      chosen = pick(rng);
    }
    std::copy_n(pts.row(chosen), pts.dim, centers.begin() + static_cast<long>(c * pts.dim));
    for (std::size_t i = 0; i < pts.n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(pts.row(i), pts.row(chosen), pts.dim));
    }
  }
  return centers;
}

// Recomputes means; empty clusters take the farthest point of a cluster with
// at least two members. Updates `a` so it stays consistent with the move.
std::vector<double> update_centers(const PointSet& pts, Assignment& a, std::size_t k) {
  std::vector<std::size_t> counts(k, 0);
  for (auto l : a.label) ++counts[l];

  for (std::size_t v = 0; v < k; ++v) {
    if (counts[v] != 0) continue;
    std::size_t far = pts.n;
    double far_d = -1.0;
    for (std::size_t i = 0; i < pts.n; ++i) {
      if (counts[a.label[i]] >= 2 && a.dist[i] > far_d) {
        far_d = a.dist[i];
        far = i;
      }
    }
    if (far == pts.n) fail(ErrorKind::NotEnoughPoints, "cannot repair empty cluster");
    --counts[a.label[far]];
    a.label[far] = static_cast<std::uint32_t>(v);
    a.dist[far] = 0.0;
    counts[v] = 1;
  }

  std::vector<double> centers(k * pts.dim, 0.0);
  for (std::size_t i = 0; i < pts.n; ++i) {
    double* c = centers.data() + a.label[i] * pts.dim;
    const double* p = pts.row(i);
    for (std::size_t d = 0; d < pts.dim; ++d) c[d] += p[d];
  }
  for (std::size_t v = 0; v < k; ++v) {
    for (std::size_t d = 0; d < pts.dim; ++d) centers[v * pts.dim + d] /= static_cast<double>(counts[v]);
  }
  return centers;
}

struct RunResult {
  std::vector<double> centers;
  std::vector<double> trace;
};

RunResult lloyd(const PointSet& pts, std::size_t k, const KMeansConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RunResult run;
  run.centers = kmeans_plus_plus(pts, k, rng);
  Assignment a = assign_points(pts, run.centers, k, cfg.workers);
  run.trace.push_back(a.inertia);
  for (int it = 0; it < cfg.max_iters; ++it) {
    run.centers = update_centers(pts, a, k);
    a = assign_points(pts, run.centers, k, cfg.workers);
    const double prev = run.trace.back();
    run.trace.push_back(a.inertia);
    if (prev <= 0.0 || (prev - a.inertia) < cfg.rel_tol * prev) break;
  }
  return run;
}

PointSet pool_frames(std::span<const FeatureSequence> corpus, const KMeansConfig& cfg) {
  if (corpus.empty()) fail(ErrorKind::NotEnoughPoints, "empty feature corpus");
  const std::size_t dim = corpus.front().dim;
  std::size_t total = 0;
  for (const auto& fs : corpus) {
    validate(fs);
    if (fs.dim != dim) {
      fail(ErrorKind::DimensionMismatch, "feature dims " + std::to_string(dim) + " and " +
                                             std::to_string(fs.dim) + " in one corpus");
    }
    total += fs.num_frames;
  }

  // Reservoir sampling (Algorithm R) over the global frame index; the kept
  // indices are sorted so pooled order follows corpus order.
  std::vector<std::size_t> keep;
  if (cfg.max_frames > 0 && total > cfg.max_frames) {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    keep.resize(cfg.max_frames);
    for (std::size_t i = 0; i < cfg.max_frames; ++i) keep[i] = i;
    for (std::size_t i = cfg.max_frames; i < total; ++i) {
      std::uniform_int_distribution<std::size_t> slot(0, i);
      const std::size_t j = slot(rng);
      if (j < cfg.max_frames) keep[j] = i;
    }
    std::sort(keep.begin(), keep.end());
  }

  PointSet pts;
  pts.dim = dim;
  pts.n = keep.empty() ? total : keep.size();
  pts.x.reserve(pts.n * dim);
  std::size_t global = 0;
  std::size_t next_keep = 0;
  for (const auto& fs : corpus) {
    for (std::size_t t = 0; t < fs.num_frames; ++t, ++global) {
      if (!keep.empty()) {
        if (next_keep >= keep.size() || keep[next_keep] != global) continue;
        ++next_keep;
      }
      for (float v : fs.frame(t)) pts.x.push_back(v);
    }
  }
  return pts;
}

Standardization standardize_in_place(PointSet& pts) {
  Standardization s;
  s.mean.assign(pts.dim, 0.0f);
  s.stddev.assign(pts.dim, 1.0f);
  for (std::size_t d = 0; d < pts.dim; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < pts.n; ++i) mean += pts.x[i * pts.dim + d];
    mean /= static_cast<double>(pts.n);
    double var = 0.0;
    for (std::size_t i = 0; i < pts.n; ++i) {
      const double diff = pts.x[i * pts.dim + d] - mean;
      var += diff * diff;
    }
    var /= static_cast<double>(pts.n);
    const float mean_f = static_cast<float>(mean);
    float sd_f = static_cast<float>(std::sqrt(var));
    if (!(sd_f > 0.0f)) sd_f = 1.0f;  // constant dimension
    s.mean[d] = mean_f;
    s.stddev[d] = sd_f;
    for (std::size_t i = 0; i < pts.n; ++i) {
      double& x = pts.x[i * pts.dim + d];
      x = (x - static_cast<double>(mean_f)) / static_cast<double>(sd_f);
    }
  }
  return s;
}

}  // namespace

void validate(const Codebook& cb) {
  if (cb.vocab_size == 0 || cb.dim == 0) {
    fail(ErrorKind::InvariantViolation, "codebook needs V >= 1 and D >= 1");
  }
  if (cb.centroids.size() != cb.vocab_size * cb.dim) {
    fail(ErrorKind::DimensionMismatch, "centroid storage does not match V*D");
  }
  for (float c : cb.centroids) {
    if (!std::isfinite(c)) fail(ErrorKind::InvariantViolation, "non-finite centroid");
  }
  if (cb.standardize) {
    const auto& s = *cb.standardize;
    if (s.mean.size() != cb.dim || s.stddev.size() != cb.dim) {
      fail(ErrorKind::DimensionMismatch, "standardization size differs from D");
    }
    for (std::size_t d = 0; d < cb.dim; ++d) {
      if (!std::isfinite(s.mean[d]) || !(s.stddev[d] > 0.0f) || !std::isfinite(s.stddev[d])) {
        fail(ErrorKind::InvariantViolation, "standardization std must be positive and finite");
      }
    }
  }
}

KMeansResult fit_kmeans(std::span<const FeatureSequence> corpus, std::size_t vocab_size,
                        const KMeansConfig& cfg) {
  if (cfg.max_iters < 1) fail(ErrorKind::InvalidArgument, "max_iters must be >= 1");
  if (!(cfg.rel_tol >= 0.0)) fail(ErrorKind::InvalidArgument, "rel_tol must be >= 0");
  if (cfg.n_init < 1) fail(ErrorKind::InvalidArgument, "n_init must be >= 1");
  if (vocab_size == 0) fail(ErrorKind::InvalidArgument, "vocab size must be >= 1");

  PointSet pts = pool_frames(corpus, cfg);
  if (pts.n < vocab_size) {
    fail(ErrorKind::NotEnoughPoints, std::to_string(pts.n) + " frames for " +
                                         std::to_string(vocab_size) + " clusters");
  }
  std::optional<Standardization> standardization;
  if (cfg.standardize) standardization = standardize_in_place(pts);

  KMeansResult result;
  RunResult best;
  for (int r = 0; r < cfg.n_init; ++r) {
    RunResult run = lloyd(pts, vocab_size, cfg, cfg.seed + static_cast<std::uint64_t>(r));
    result.restart_inertias.push_back(run.trace.back());
    if (r == 0 || run.trace.back() < best.trace.back()) {
      best = std::move(run);
      result.best_restart = static_cast<std::size_t>(r);
    }
  }

  Codebook& cb = result.codebook;
  cb.vocab_size = vocab_size;
  cb.dim = pts.dim;
  cb.centroids.assign(best.centers.begin(), best.centers.end());
  cb.standardize = std::move(standardization);
  result.inertia_trace = std::move(best.trace);
  return result;
}

std::uint32_t nearest_centroid(std::span<const float> frame, const Codebook& cb) {
  if (frame.size() != cb.dim) {
    fail(ErrorKind::DimensionMismatch, "frame dim " + std::to_string(frame.size()) +
                                           " vs codebook dim " + std::to_string(cb.dim));
  }
  double buf_small[64];
  std::vector<double> buf_large;
  double* x = buf_small;
  if (cb.dim > 64) {
    buf_large.resize(cb.dim);
    x = buf_large.data();
  }
  for (std::size_t d = 0; d < cb.dim; ++d) {
    x[d] = frame[d];
    if (cb.standardize) {
      x[d] = (x[d] - static_cast<double>(cb.standardize->mean[d])) /
             static_cast<double>(cb.standardize->stddev[d]);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_v = 0;
  for (std::size_t v = 0; v < cb.vocab_size; ++v) {
    const float* c = cb.centroids.data() + v * cb.dim;
    double s = 0.0;
    for (std::size_t d = 0; d < cb.dim; ++d) {
      const double diff = x[d] - static_cast<double>(c[d]);
      s += diff * diff;
    }
    if (s < best) {
      best = s;
      best_v = static_cast<std::uint32_t>(v);
    }
  }
  return best_v;
}

std::vector<std::uint32_t> assign(const FeatureSequence& fs, const Codebook& cb) {
  validate(fs);
  if (fs.dim != cb.dim) {
    fail(ErrorKind::DimensionMismatch, "feature dim " + std::to_string(fs.dim) +
                                           " vs codebook dim " + std::to_string(cb.dim));
  }
  std::vector<std::uint32_t> tokens(fs.num_frames);
  for (std::size_t t = 0; t < fs.num_frames; ++t) tokens[t] = nearest_centroid(fs.frame(t), cb);
  return tokens;
}

std::vector<std::uint8_t> encode_codebook(const Codebook& cb) {
  validate(cb);
  ByteWriter out;
  out.magic("SLMC");
  out.u32(kCodebookFileVersion);
  out.u32(static_cast<std::uint32_t>(cb.vocab_size));
  out.u32(static_cast<std::uint32_t>(cb.dim));
  out.u8(cb.standardize ? 1 : 0);
  if (cb.standardize) {
    out.f32s(cb.standardize->mean);
    out.f32s(cb.standardize->stddev);
  }
  out.f32s(cb.centroids);
  return out.bytes();
}

Codebook decode_codebook(std::span<const std::uint8_t> bytes, const std::string& what) {
  ByteReader in(bytes, what);
  in.expect_magic("SLMC");
  const auto version = in.u32();
  if (version != kCodebookFileVersion) {
    fail(ErrorKind::UnsupportedFormat, what + ": codebook version " + std::to_string(version));
  }
  Codebook cb;
  cb.vocab_size = in.u32();
  cb.dim = in.u32();
  if (cb.vocab_size == 0 || cb.dim == 0) {
    fail(ErrorKind::InvariantViolation, what + ": codebook header has V=" +
                                            std::to_string(cb.vocab_size) +
                                            " D=" + std::to_string(cb.dim));
  }
  const auto has_std = in.u8();
  if (has_std > 1) fail(ErrorKind::InvariantViolation, what + ": bad standardize flag");
  if (has_std == 1) {
    Standardization s;
    s.mean = in.f32s(cb.dim);
    s.stddev = in.f32s(cb.dim);
    cb.standardize = std::move(s);
  }
  cb.centroids = in.f32s(cb.vocab_size * cb.dim);
  validate(cb);
  return cb;
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
  write_file_bytes(path, encode_codebook(cb));
}

Codebook load_codebook(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_codebook(bytes, path.string());
}

}  // namespace slms
