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

#include <filesystem>

#include "scesep/dsp/waveform.hpp"

namespace scesep::io {

/// Reads a mono 16-bit PCM RIFF/WAVE file; samples are divided by 32768.
/// Multi-channel or non-PCM16 files are rejected with a Format error.
dsp::Waveform read_wav(const std::filesystem::path& path);

/// Writes mono 16-bit PCM. Samples are scaled by 32768, rounded and clipped.
void write_wav(const std::filesystem::path& path, const dsp::Waveform& w);

}  // namespace scesep::io
