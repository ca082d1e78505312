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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "scesep/dsp/waveform.hpp"

namespace scesep::mix {

enum class NoiseKind { kSiren, kJackhammer, kEngine, kCrowd };

inline constexpr std::array<NoiseKind, 4> kAllNoiseKinds{
    NoiseKind::kSiren, NoiseKind::kJackhammer, NoiseKind::kEngine, NoiseKind::kCrowd};

std::string_view noise_kind_name(NoiseKind kind) noexcept;
/// Throws UnknownKind.
NoiseKind parse_noise_kind(std::string_view name);

/// class_id convention: 0 is speech, 1..4 are the noise kinds in enum order.
inline constexpr int kSpeechClass = 0;
inline int noise_class_id(NoiseKind kind) noexcept { return static_cast<int>(kind) + 1; }
/// Throws UnknownKind for ids outside 1..4.
NoiseKind noise_kind_from_class(int class_id);

/// One source signal and where it came from.
struct SourceClip {
  dsp::Waveform waveform;
  int class_id = kSpeechClass;
  std::string clip_id;
  int source_id = 0;  // row in the model's source table
};

/// Harmonic stack with a wandering pitch contour, formant-weighted
/// harmonics and syllable-rate (about 4 Hz) amplitude envelopes. A speaker
/// index fixes the pitch register and formant scaling; otherwise both are
/// drawn from the seed. Zero mean, unit power, deterministic under seed.
SourceClip synth_speechlike(double duration_s, std::uint64_t seed,
                            std::optional<int> speaker = std::nullopt,
                            int sample_rate_hz = dsp::kDefaultSampleRate);

/// Non-stationary noise stand-ins: siren (swept tone), jackhammer
/// (bursts of decaying impulses), engine (low harmonic rumble), crowd
/// (band-passed pink noise). Zero mean, unit power.
SourceClip synth_noise(NoiseKind kind, double duration_s, std::uint64_t seed,
                       int sample_rate_hz = dsp::kDefaultSampleRate);
SourceClip synth_noise(std::string_view kind, double duration_s, std::uint64_t seed,
                       int sample_rate_hz = dsp::kDefaultSampleRate);

}  // namespace scesep::mix

namespace scesep::mix {

/// Sum of a few slowly gliding, amplitude-modulated tones confined to
/// [lo_hz, hi_hz]. Two such sources with separated bands are spectrally
/// disjoint up to window leakage, which makes the ideal binary mask nearly
/// exact. Zero mean, unit power.
SourceClip synth_band_source(double lo_hz, double hi_hz, double duration_s, std::uint64_t seed,
                             int sample_rate_hz = dsp::kDefaultSampleRate);

}  // namespace scesep::mix
