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

#include "scesep/dsp/stft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <string>

#include "scesep/common/error.hpp"

namespace scesep::dsp {

namespace {

// FFTW planning is not thread-safe; execution of a created plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(inverse_);
    }
    fftw_free(real_);
    fftw_free(spec_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* real() noexcept { return real_; }
  fftw_complex* spec() noexcept { return spec_; }
  void forward() { fftw_execute(forward_); }
  // Unnormalized: result is n times the true inverse.
  void inverse() { fftw_execute(inverse_); }

 private:
  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> reflect_pad(const std::vector<double>& x, std::size_t pad) {
  const std::size_t n = x.size();
  std::vector<double> out(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    out[pad - 1 - i] = x[i + 1];
    out[pad + n + i] = x[n - 2 - i];
  }
  std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(pad));
  return out;
}

}  // namespace

void StftConfig::validate() const {
  if (!is_power_of_two(window_len)) {
    throw Error(Errc::kInvalidArgument, "window_len must be a power of two");
  }
  if (hop == 0 || hop > window_len || window_len % hop != 0) {
    throw Error(Errc::kInvalidArgument, "hop must divide window_len");
  }
  if (sample_rate_hz <= 0) throw Error(Errc::kInvalidArgument, "sample rate must be positive");
}

std::size_t StftConfig::num_frames(std::size_t num_samples) const {
  const std::size_t padded = num_samples + 2 * pad();
  if (padded < window_len) return 0;
  return (padded - window_len) / hop + 1;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

ComplexSpectrogram& ComplexSpectrogram::operator+=(const ComplexSpectrogram& o) {
  if (!same_shape(o)) throw Error(Errc::kShapeMismatch, "spectrogram shapes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ComplexSpectrogram operator+(ComplexSpectrogram a, const ComplexSpectrogram& b) {
  a += b;
  return a;
}

ComplexSpectrogram stft(const Waveform& w, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t n = w.samples.size();
  if (n < cfg.window_len) {
    throw Error(Errc::kTooShort, "signal has " + std::to_string(n) +
                                     " samples, window needs " + std::to_string(cfg.window_len));
  }
  const std::vector<double> x = cfg.center ? reflect_pad(w.samples, cfg.pad()) : w.samples;
  const std::size_t frames = cfg.num_frames(n);
  const std::size_t bins = cfg.num_bins();
  const std::vector<double> window = hann_window(cfg.window_len);

  ComplexSpectrogram out(frames, bins, n);
  RealFft fft(cfg.fft_len());
  for (std::size_t t = 0; t < frames; ++t) {
    const double* frame = x.data() + t * cfg.hop;
    for (std::size_t i = 0; i < cfg.window_len; ++i) fft.real()[i] = frame[i] * window[i];
    fft.forward();
    for (std::size_t f = 0; f < bins; ++f) {
      out(t, f) = Complex(fft.spec()[f][0], fft.spec()[f][1]);
    }
  }
  return out;
}

Waveform istft(const ComplexSpectrogram& s, const StftConfig& cfg) {
  cfg.validate();
  if (s.bins() != cfg.num_bins()) {
    throw Error(Errc::kShapeMismatch, "spectrogram has " + std::to_string(s.bins()) +
                                          " bins, config expects " +
                                          std::to_string(cfg.num_bins()));
  }
  const std::size_t frames = s.frames();
  const std::size_t pad = cfg.pad();
  const std::size_t span = frames == 0 ? 0 : (frames - 1) * cfg.hop + cfg.window_len;
  std::size_t out_len = s.num_samples();
  if (out_len == 0) out_len = span > 2 * pad ? span - 2 * pad : 0;
  if (frames != cfg.num_frames(out_len)) {
    throw Error(Errc::kShapeMismatch, "frame count inconsistent with signal length");
  }

  const std::vector<double> window = hann_window(cfg.window_len);
  std::vector<double> acc(span, 0.0);
  std::vector<double> norm(span, 0.0);
  RealFft fft(cfg.fft_len());
  const double inv_n = 1.0 / static_cast<double>(cfg.fft_len());
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < s.bins(); ++f) {
      fft.spec()[f][0] = s(t, f).real();
      fft.spec()[f][1] = s(t, f).imag();
    }
    // A real signal has real DC and Nyquist bins; c2r ignores the imaginary
    // parts there, which is the projection we want.
    fft.inverse();
    const std::size_t offset = t * cfg.hop;
    for (std::size_t i = 0; i < cfg.window_len; ++i) {
      acc[offset + i] += fft.real()[i] * inv_n * window[i];
      norm[offset + i] += window[i] * window[i];
    }
  }

  Waveform out{std::vector<double>(out_len, 0.0), cfg.sample_rate_hz};
  for (std::size_t i = 0; i < out_len; ++i) {
    const std::size_t j = i + pad;
    if (j < span && norm[j] > 1e-10) out.samples[i] = acc[j] / norm[j];
  }
  return out;
}

}  // namespace scesep::dsp
