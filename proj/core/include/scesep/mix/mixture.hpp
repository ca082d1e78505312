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

#include <cstdint>
#include <string>
#include <vector>

#include "scesep/dsp/stft.hpp"
#include "scesep/mix/synth.hpp"

namespace scesep::mix {

/// T x F x M dominance labels in {-1, +1}, exactly one +1 per bin.
class LabelTensor {
 public:
  LabelTensor() = default;
  LabelTensor(std::size_t frames, std::size_t bins, std::size_t sources)
      : frames_(frames), bins_(bins), sources_(sources), y_(frames * bins * sources, -1) {}

  std::size_t frames() const noexcept { return frames_; }
  std::size_t bins() const noexcept { return bins_; }
  std::size_t sources() const noexcept { return sources_; }

  std::int8_t& operator()(std::size_t t, std::size_t f, std::size_t m) {
    return y_[(t * bins_ + f) * sources_ + m];
  }
  std::int8_t operator()(std::size_t t, std::size_t f, std::size_t m) const {
    return y_[(t * bins_ + f) * sources_ + m];
  }
  const std::vector<std::int8_t>& data() const noexcept { return y_; }

  /// Index of the +1 entry at (t, f).
  std::size_t dominant(std::size_t t, std::size_t f) const;

 private:
  std::size_t frames_ = 0, bins_ = 0, sources_ = 0;
  std::vector<std::int8_t> y_;
};

/// +1 for the source with the largest |S| in each bin, -1 elsewhere. Exact
/// ties (including all-zero bins) go to the lowest source index.
LabelTensor make_labels(const std::vector<dsp::ComplexSpectrogram>& source_specs);

/// One speech-plus-noise mixture with everything needed for training and
/// evaluation. Source order is [speech, noise] throughout.
struct MixRecord {
  std::string clip_id;
  dsp::Waveform mixture;
  std::vector<dsp::Waveform> sources;  // scaled, time-aligned segments
  double snr_db = 0.0;
  double noise_gain = 1.0;
  dsp::ComplexSpectrogram mixture_spec;
  std::vector<dsp::ComplexSpectrogram> source_specs;
  LabelTensor labels;
  std::vector<int> source_ids;
  std::vector<std::string> source_clip_ids;
  int noise_class = 1;
  std::uint64_t seed = 0;

  std::size_t num_sources() const noexcept { return sources.size(); }
};

struct MixOptions {
  double segment_s = 2.0;
  dsp::StftConfig stft;
};

/// Noise gain that puts `noise_power` at `snr_db` below `speech_power`.
double noise_gain_for_snr(double speech_power, double noise_power, double snr_db);

/// Picks a segment of each clip uniformly at random under `seed`, keeps
/// speech at unit gain and scales the noise to hit `snr_db` exactly over
/// the selected segments. Throws SilentSource, TooShort.
MixRecord mix_at_snr(const SourceClip& speech, const SourceClip& noise, double snr_db,
                     std::uint64_t seed, const MixOptions& opts = {});

/// Measured 10 log10(P_speech / P_noise) of a record's scaled sources.
double measured_snr_db(const MixRecord& rec);

}  // namespace scesep::mix
