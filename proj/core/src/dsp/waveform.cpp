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

#include "scesep/dsp/waveform.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "scesep/common/error.hpp"

namespace scesep::dsp {

void validate(const Waveform& w) {
  if (w.sample_rate_hz <= 0) {
    throw Error(Errc::kInvalidArgument, "sample rate must be positive");
  }
  for (double x : w.samples) {
    if (!std::isfinite(x)) throw Error(Errc::kInvalidArgument, "non-finite sample");
  }
}

double power(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

Waveform standardize(const Waveform& w) {
  if (w.samples.size() < 2) {
    throw Error(Errc::kTooShort, "standardize needs at least 2 samples");
  }
  const double n = static_cast<double>(w.samples.size());
  const double mean = std::accumulate(w.samples.begin(), w.samples.end(), 0.0) / n;
  double var = 0.0;
  for (double x : w.samples) var += (x - mean) * (x - mean);
  var /= n;
  if (!(var > 0.0)) throw Error(Errc::kConstantSignal, "zero variance");
  const double inv_sd = 1.0 / std::sqrt(var);

  Waveform out{std::vector<double>(w.samples.size()), w.sample_rate_hz};
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    out.samples[i] = (w.samples[i] - mean) * inv_sd;
  }
  // Remove the O(eps) residual mean left by rounding.
  const double residual = std::accumulate(out.samples.begin(), out.samples.end(), 0.0) / n;
  for (double& x : out.samples) x -= residual;
  return out;
}

namespace {

constexpr int kHalfTaps = 32;
constexpr double kKaiserBeta = 8.0;
constexpr double kRolloff = 0.95;

double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// Taps for an output point sitting `frac` input samples after input index i0.
// taps[j] multiplies input sample i0 - kHalfTaps + 1 + j.
std::vector<double> kernel_phase(double frac, double cutoff) {
  std::vector<double> taps(2 * kHalfTaps);
  const double norm = bessel_i0(kKaiserBeta);
  double sum = 0.0;
  for (int j = 0; j < 2 * kHalfTaps; ++j) {
    const double x = frac + kHalfTaps - 1 - j;  // distance output - input
    const double r = x / kHalfTaps;
    double win = 0.0;
    if (std::abs(r) < 1.0) win = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / norm;
    const double arg = 2.0 * cutoff * x;
    const double sinc = (arg == 0.0) ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
    taps[j] = 2.0 * cutoff * sinc * win;
    sum += taps[j];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

}  // namespace

Waveform resample(const Waveform& w, int target_hz) {
  if (target_hz <= 0) throw Error(Errc::kInvalidArgument, "target rate must be positive");
  if (w.sample_rate_hz <= 0) throw Error(Errc::kInvalidArgument, "source rate must be positive");
  if (target_hz == w.sample_rate_hz) return w;

  const std::int64_t g = std::gcd(static_cast<std::int64_t>(w.sample_rate_hz),
                                  static_cast<std::int64_t>(target_hz));
  const std::int64_t up = target_hz / g;
  const std::int64_t down = w.sample_rate_hz / g;
  const auto n_in = static_cast<std::int64_t>(w.samples.size());
  const std::int64_t n_out = n_in * up / down;
  const double cutoff = 0.5 * kRolloff * std::min(1.0, static_cast<double>(up) / down);

  constexpr std::int64_t kMaxCachedPhases = 1 << 14;
  std::vector<std::vector<double>> phases;
  if (up <= kMaxCachedPhases) phases.resize(static_cast<std::size_t>(up));

  Waveform out{std::vector<double>(static_cast<std::size_t>(n_out)), target_hz};
  for (std::int64_t j = 0; j < n_out; ++j) {
    const std::int64_t num = j * down;
    const std::int64_t i0 = num / up;
    const std::int64_t residue = num % up;
    std::vector<double> scratch;
    const std::vector<double>* taps = nullptr;
    const double frac = static_cast<double>(residue) / static_cast<double>(up);
    if (!phases.empty()) {
      auto& slot = phases[static_cast<std::size_t>(residue)];
      if (slot.empty()) slot = kernel_phase(frac, cutoff);
      taps = &slot;
    } else {
      scratch = kernel_phase(frac, cutoff);
      taps = &scratch;
    }
    double acc = 0.0;
    const std::int64_t first = i0 - kHalfTaps + 1;
    for (int k = 0; k < 2 * kHalfTaps; ++k) {
      const std::int64_t idx = first + k;
      if (idx < 0 || idx >= n_in) continue;
      acc += (*taps)[static_cast<std::size_t>(k)] * w.samples[static_cast<std::size_t>(idx)];
    }
    out.samples[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

}  // namespace scesep::dsp
