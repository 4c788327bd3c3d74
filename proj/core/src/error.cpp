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

#include "slms/error.hpp"

namespace slms {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::EmptyAudio: return "EmptyAudio";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotEnoughPoints: return "NotEnoughPoints";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::TokenOutOfRange: return "TokenOutOfRange";
    case ErrorKind::DivergedLoss: return "DivergedLoss";
    case ErrorKind::PolicyMismatch: return "PolicyMismatch";
    case ErrorKind::MalformedArpa: return "MalformedArpa";
    case ErrorKind::ComponentMismatch: return "ComponentMismatch";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::MissingMos: return "MissingMos";
    case ErrorKind::UnknownUttId: return "UnknownUttId";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace slms
