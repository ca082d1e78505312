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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "scesep/dsp/waveform.hpp"
#include "scesep/nn/tensor.hpp"

namespace scesep::testing {

inline dsp::Waveform random_waveform(std::size_t n, std::uint64_t seed, int rate = 10000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  dsp::Waveform w;
  w.sample_rate_hz = rate;
  w.samples.resize(n);
  for (double& x : w.samples) x = g(rng);
  return w;
}

inline nn::Tensor random_tensor(nn::Shape shape, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  nn::Tensor t(std::move(shape));
  for (double& x : t.values()) x = g(rng);
  return t;
}

inline dsp::Waveform sine(double hz, std::size_t n, int rate = 10000, double amp = 1.0) {
  dsp::Waveform w;
  w.sample_rate_hz = rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = amp * std::sin(2.0 * M_PI * hz * static_cast<double>(i) / rate);
  }
  return w;
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace scesep::testing
