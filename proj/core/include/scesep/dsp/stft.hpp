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

#include <complex>
#include <cstddef>
#include <vector>

#include "scesep/dsp/waveform.hpp"

namespace scesep::dsp {

using Complex = std::complex<double>;

struct StftConfig {
  std::size_t window_len = 512;
  std::size_t hop = 256;
  int sample_rate_hz = kDefaultSampleRate;
  // Reflect-pad hop/2 samples on both sides before framing. With the
  // default 512/256 framing a 20000-sample clip gives 78 frames.
  bool center = true;

  std::size_t fft_len() const noexcept { return window_len; }
  std::size_t num_bins() const noexcept { return window_len / 2 + 1; }
  std::size_t pad() const noexcept { return center ? hop / 2 : 0; }
  double bin_hz(std::size_t bin) const noexcept {
    return static_cast<double>(bin) * sample_rate_hz / static_cast<double>(window_len);
  }
  /// Number of frames produced for a signal of `num_samples` samples.
  std::size_t num_frames(std::size_t num_samples) const;

  void validate() const;
};

/// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

/// T x F complex grid, row-major by frame. `num_samples` records the length
/// of the analysed signal so the inverse can crop exactly.
class ComplexSpectrogram {
 public:
  ComplexSpectrogram() = default;
  ComplexSpectrogram(std::size_t frames, std::size_t bins, std::size_t num_samples = 0)
      : frames_(frames), bins_(bins), num_samples_(num_samples), values_(frames * bins) {}

  std::size_t frames() const noexcept { return frames_; }
  std::size_t bins() const noexcept { return bins_; }
  std::size_t num_samples() const noexcept { return num_samples_; }
  void set_num_samples(std::size_t n) noexcept { num_samples_ = n; }

  Complex& operator()(std::size_t t, std::size_t f) { return values_[t * bins_ + f]; }
  const Complex& operator()(std::size_t t, std::size_t f) const { return values_[t * bins_ + f]; }

  std::vector<Complex>& values() noexcept { return values_; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  bool same_shape(const ComplexSpectrogram& o) const noexcept {
    return frames_ == o.frames_ && bins_ == o.bins_;
  }

  ComplexSpectrogram& operator+=(const ComplexSpectrogram& o);

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::size_t num_samples_ = 0;
  std::vector<Complex> values_;
};

ComplexSpectrogram operator+(ComplexSpectrogram a, const ComplexSpectrogram& b);

/// Hann-windowed short-time Fourier transform. Throws TooShort when the
/// signal is shorter than one window.
ComplexSpectrogram stft(const Waveform& w, const StftConfig& cfg = {});

/// Weighted overlap-add inverse (Hann synthesis window, normalized by the
/// summed squared window). Output length is spectrogram.num_samples() when
/// known, otherwise the full span of the frames minus the padding.
Waveform istft(const ComplexSpectrogram& s, const StftConfig& cfg = {});

}  // namespace scesep::dsp
