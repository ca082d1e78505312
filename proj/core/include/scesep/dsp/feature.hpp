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

#include <cstddef>
#include <vector>

#include "scesep/dsp/stft.hpp"

namespace scesep::dsp {

/// Square-root compressed magnitude, percent normalized so the largest bin
/// is 1, with the phase kept alongside for resynthesis.
struct MagnitudeFeature {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::size_t num_samples = 0;
  std::vector<double> mag;    // T x F, in [0, 1]
  std::vector<double> phase;  // T x F, radians
  double norm_scale = 1.0;

  double& at(std::size_t t, std::size_t f) { return mag[t * bins + f]; }
  double at(std::size_t t, std::size_t f) const { return mag[t * bins + f]; }
};

/// mag = sqrt(|s|) / max sqrt(|s|). An all-zero input keeps norm_scale = 1.
MagnitudeFeature compress(const ComplexSpectrogram& s);

/// Exact inverse of compress: (mag * norm_scale)^2 * exp(i * phase).
ComplexSpectrogram uncompress(const MagnitudeFeature& feat);

/// sqrt(|s|) / norm_scale for every bin; used to express source magnitudes
/// in the mixture's normalized feature scale.
std::vector<double> compressed_magnitude(const ComplexSpectrogram& s, double norm_scale);

}  // namespace scesep::dsp
