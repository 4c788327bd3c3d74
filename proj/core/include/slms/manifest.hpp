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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slms {

struct ManifestRow {
  std::string utt_id;
  std::string system_id;
  std::filesystem::path path;
  std::optional<double> mos;  // in [1, 5] when present
};

/// Rows of "utt_id,system_id,path,mos" with unique utt_ids. Relative paths
/// resolve against base_dir (the manifest's own directory when read from disk).
struct EvalManifest {
  std::vector<ManifestRow> rows;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const ManifestRow& row) const;
};

/// Plain comma-separated fields (no quoting); the header line is required.
EvalManifest parse_manifest(std::string_view text, const std::string& what = "manifest");
EvalManifest read_manifest(const std::filesystem::path& path);
std::string format_manifest(const EvalManifest& manifest);
void write_manifest(const EvalManifest& manifest, const std::filesystem::path& path);

/// Splits one CSV line on commas; rejects quote characters.
std::vector<std::string_view> split_csv_line(std::string_view line, const std::string& where);

}  // namespace slms
