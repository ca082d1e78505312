// Copyright 2026 The scesep Authors. All Rights Reserved.
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace scesep {

enum class Errc {
  kInvalidArgument,
  kConstantSignal,
  kTooShort,
  kShapeMismatch,
  kSilentSource,
  kUnknownKind,
  kNoForwardRecorded,
  kUnknownSource,
  kEmptyCorpus,
  kTooFewPoints,
  kNotNormalized,
  kNegativeInput,
  kAllTrimmed,
  kSilentReference,
  kCountMismatch,
  kFormat,
  kIo,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kConstantSignal: return "ConstantSignal";
    case Errc::kTooShort: return "TooShort";
    case Errc::kShapeMismatch: return "ShapeMismatch";
    case Errc::kSilentSource: return "SilentSource";
    case Errc::kUnknownKind: return "UnknownKind";
    case Errc::kNoForwardRecorded: return "NoForwardRecorded";
    case Errc::kUnknownSource: return "UnknownSource";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kTooFewPoints: return "TooFewPoints";
    case Errc::kNotNormalized: return "NotNormalized";
    case Errc::kNegativeInput: return "NegativeInput";
    case Errc::kAllTrimmed: return "AllTrimmed";
    case Errc::kSilentReference: return "SilentReference";
    case Errc::kCountMismatch: return "CountMismatch";
    case Errc::kFormat: return "Format";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace scesep
