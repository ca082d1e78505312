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

namespace scesep::dsp {

inline constexpr int kDefaultSampleRate = 10000;

/// Mono real-valued signal. Samples are finite and the rate is positive.
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kDefaultSampleRate;

  std::size_t size() const noexcept { return samples.size(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// Throws InvalidArgument if the rate is not positive or a sample is not finite.
void validate(const Waveform& w);

/// Mean power (1/n) * sum x^2.
double power(const std::vector<double>& x);

/// Zero mean, unit standard deviation using the population (divide by n)
/// variance. Throws ConstantSignal on zero variance, TooShort below 2 samples.
Waveform standardize(const Waveform& w);

/// Band-limited resampling with a 64-tap Kaiser-windowed sinc kernel
/// evaluated at exact rational positions (one kernel phase per output
/// residue). Output length is floor(n * target / source).
Waveform resample(const Waveform& w, int target_hz);

}  // namespace scesep::dsp
