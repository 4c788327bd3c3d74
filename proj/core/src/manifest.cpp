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

#include "slms/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_set>

#include "slms/binary_io.hpp"
#include "slms/error.hpp"

namespace slms {

std::filesystem::path EvalManifest::resolve(const ManifestRow& row) const {
  if (row.path.is_absolute() || base_dir.empty()) return row.path;
  return base_dir / row.path;
}

std::vector<std::string_view> split_csv_line(std::string_view line, const std::string& where) {
  if (line.find('"') != std::string_view::npos) {
    fail(ErrorKind::ParseError, where + ": quoted CSV fields are not supported");
  }
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

EvalManifest parse_manifest(std::string_view text, const std::string& what) {
  EvalManifest m;
  std::unordered_set<std::string> seen;
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
      if (f.size() != 4 || f[0] != "utt_id" || f[1] != "system_id" || f[2] != "path" || f[3] != "mos") {
        fail(ErrorKind::ParseError, where + ": expected header utt_id,system_id,path,mos");
      }
      header = false;
      continue;
    }
    if (f.size() != 4) fail(ErrorKind::ParseError, where + ": expected 4 fields");
    ManifestRow row;
    row.utt_id = std::string(f[0]);
    row.system_id = std::string(f[1]);
    row.path = std::string(f[2]);
    if (row.utt_id.empty()) fail(ErrorKind::ParseError, where + ": empty utt_id");
    if (row.system_id.empty()) fail(ErrorKind::ParseError, where + ": empty system_id");
    if (!f[3].empty()) {
      const std::string mos_text(f[3]);
      char* end = nullptr;
      const double mos = std::strtod(mos_text.c_str(), &end);
      if (end != mos_text.c_str() + mos_text.size() || !std::isfinite(mos)) {
        fail(ErrorKind::ParseError, where + ": bad mos '" + mos_text + "'");
      }
      if (mos < 1.0 || mos > 5.0) fail(ErrorKind::InvariantViolation, where + ": mos outside [1, 5]");
      row.mos = mos;
    }
    if (!seen.insert(row.utt_id).second) {
      fail(ErrorKind::InvariantViolation, where + ": duplicate utt_id '" + row.utt_id + "'");
    }
    m.rows.push_back(std::move(row));
  }
  if (header) fail(ErrorKind::ParseError, what + ": missing header");
  return m;
}

EvalManifest read_manifest(const std::filesystem::path& path) {
  EvalManifest m = parse_manifest(read_file_text(path), path.string());
  m.base_dir = path.parent_path();
  return m;
}

std::string format_manifest(const EvalManifest& manifest) {
  std::string out = "utt_id,system_id,path,mos\n";
  char buf[32];
  for (const auto& row : manifest.rows) {
    out += row.utt_id + "," + row.system_id + "," + row.path.generic_string() + ",";
    if (row.mos) {
      std::snprintf(buf, sizeof buf, "%.9g", *row.mos);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_manifest(const EvalManifest& manifest, const std::filesystem::path& path) {
  write_file_text(path, format_manifest(manifest));
}

}  // namespace slms
