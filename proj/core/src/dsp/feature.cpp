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

#include "scesep/dsp/feature.hpp"

#include <algorithm>
#include <cmath>

namespace scesep::dsp {

MagnitudeFeature compress(const ComplexSpectrogram& s) {
  MagnitudeFeature feat;
  feat.frames = s.frames();
  feat.bins = s.bins();
  feat.num_samples = s.num_samples();
  const auto& v = s.values();
  feat.mag.resize(v.size());
  feat.phase.resize(v.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    feat.mag[i] = std::sqrt(std::abs(v[i]));
    feat.phase[i] = std::arg(v[i]);
    peak = std::max(peak, feat.mag[i]);
  }
  feat.norm_scale = peak > 0.0 ? peak : 1.0;
  for (double& m : feat.mag) m /= feat.norm_scale;
  return feat;
}

ComplexSpectrogram uncompress(const MagnitudeFeature& feat) {
  ComplexSpectrogram s(feat.frames, feat.bins, feat.num_samples);
  auto& v = s.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = feat.mag[i] * feat.norm_scale;
    v[i] = std::polar(a * a, feat.phase[i]);
  }
  return s;
}

std::vector<double> compressed_magnitude(const ComplexSpectrogram& s, double norm_scale) {
  const auto& v = s.values();
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::sqrt(std::abs(v[i])) / norm_scale;
  return out;
}

}  // namespace scesep::dsp
