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

#include "scesep/infer/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scesep/common/error.hpp"

namespace scesep::infer {

BinaryMaskSet masks_from_clusters(const ClusterAssignment& a, std::size_t frames,
                                  std::size_t bins) {
  if (a.labels.size() != frames * bins) {
    throw Error(Errc::kShapeMismatch, "cluster labels do not cover the T x F grid");
  }
  BinaryMaskSet masks(frames, bins, a.k);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < bins; ++f) {
      masks(t, f, static_cast<std::size_t>(a.labels[t * bins + f])) = 1;
    }
  }
  return masks;
}

std::vector<dsp::ComplexSpectrogram> apply_binary_masks(const dsp::ComplexSpectrogram& x,
                                                        const BinaryMaskSet& masks) {
  if (masks.frames() != x.frames() || masks.bins() != x.bins()) {
    throw Error(Errc::kShapeMismatch, "mask grid does not match the spectrogram");
  }
  std::vector<dsp::ComplexSpectrogram> out;
  for (std::size_t k = 0; k < masks.sources(); ++k) {
    dsp::ComplexSpectrogram s(x.frames(), x.bins(), x.num_samples());
    for (std::size_t t = 0; t < x.frames(); ++t) {
      for (std::size_t f = 0; f < x.bins(); ++f) {
        s(t, f) = x(t, f) * (0.5 * (masks(t, f, k) + 1));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<dsp::Waveform> reconstruct_binary(const dsp::ComplexSpectrogram& x,
                                              const BinaryMaskSet& masks,
                                              const dsp::StftConfig& cfg) {
  std::vector<dsp::Waveform> out;
  for (const auto& s : apply_binary_masks(x, masks)) out.push_back(dsp::istft(s, cfg));
  return out;
}

void check_ratio_mask(const nn::Tensor& mask) {
  nn::expect_rank(mask, 3, "ratio mask");
  const std::size_t M = mask.dim(2);
  for (std::size_t bin = 0; bin < mask.dim(0) * mask.dim(1); ++bin) {
    double sum = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double v = mask[bin * M + m];
      if (!(v >= 0.0)) throw Error(Errc::kNotNormalized, "negative ratio mask entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(Errc::kNotNormalized, "ratio mask sums to " + std::to_string(sum) +
                                            " at bin " + std::to_string(bin));
    }
  }
}

std::vector<dsp::ComplexSpectrogram> apply_ratio_masks(const dsp::ComplexSpectrogram& x,
                                                       const nn::Tensor& mask) {
  nn::expect_rank(mask, 3, "ratio mask");
  if (mask.dim(0) != x.frames() || mask.dim(1) != x.bins()) {
    throw Error(Errc::kShapeMismatch, "ratio mask grid does not match the spectrogram");
  }
  check_ratio_mask(mask);
  const std::size_t M = mask.dim(2);
  std::vector<dsp::ComplexSpectrogram> out;
  for (std::size_t m = 0; m < M; ++m) {
    dsp::ComplexSpectrogram s(x.frames(), x.bins(), x.num_samples());
    for (std::size_t i = 0; i < x.values().size(); ++i) {
      s.values()[i] = x.values()[i] * mask[i * M + m];
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<dsp::Waveform> reconstruct_ratio(const dsp::ComplexSpectrogram& x,
                                             const nn::Tensor& mask, const dsp::StftConfig& cfg) {
  std::vector<dsp::Waveform> out;
  for (const auto& s : apply_ratio_masks(x, mask)) out.push_back(dsp::istft(s, cfg));
  return out;
}

double binary_partition_error(const BinaryMaskSet& masks) {
  double worst = 0.0;
  for (std::size_t t = 0; t < masks.frames(); ++t) {
    for (std::size_t f = 0; f < masks.bins(); ++f) {
      int on = 0;
      for (std::size_t k = 0; k < masks.sources(); ++k) {
        const int v = masks(t, f, k);
        if (v != 1 && v != -1) return std::numeric_limits<double>::infinity();
        on += (v + 1) / 2;
      }
      worst = std::max(worst, std::abs(static_cast<double>(on) - 1.0));
    }
  }
  return worst;
}

double ratio_partition_error(const nn::Tensor& mask) {
  const std::size_t M = mask.dim(mask.rank() - 1);
  double worst = 0.0;
  for (std::size_t bin = 0; bin < mask.size() / M; ++bin) {
    double sum = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double v = mask[bin * M + m];
      if (v < 0.0) worst = std::max(worst, -v);
      sum += v;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double stem_sum_error(const std::vector<dsp::Waveform>& stems, const dsp::Waveform& reference) {
  double worst = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    double sum = 0.0;
    for (const auto& s : stems) sum += s.samples.at(i);
    worst = std::max(worst, std::abs(sum - reference.samples[i]));
  }
  return worst;
}

}  // namespace scesep::infer
