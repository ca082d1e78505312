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
#include <vector>

#include "scesep/dsp/stft.hpp"
#include "scesep/infer/kmeans.hpp"
#include "scesep/mix/mixture.hpp"
#include "scesep/nn/tensor.hpp"

namespace scesep::infer {

/// T x F x K hard masks in {-1, +1}, one +1 per bin. Same layout as the
/// training labels, so true labels can be used directly as oracle masks.
using BinaryMaskSet = mix::LabelTensor;

/// One-hot masks from per-bin cluster labels (T * F labels in frame-major
/// order).
BinaryMaskSet masks_from_clusters(const ClusterAssignment& a, std::size_t frames,
                                  std::size_t bins);

/// S_k = X * (y_k + 1) / 2 for each k; the mixture phase is kept.
std::vector<dsp::ComplexSpectrogram> apply_binary_masks(const dsp::ComplexSpectrogram& x,
                                                        const BinaryMaskSet& masks);
std::vector<dsp::Waveform> reconstruct_binary(const dsp::ComplexSpectrogram& x,
                                              const BinaryMaskSet& masks,
                                              const dsp::StftConfig& cfg = {});

/// Ratio masks are [T, F, M] with entries >= 0 summing to 1 per bin
/// within 1e-9 (NotNormalized otherwise).
void check_ratio_mask(const nn::Tensor& mask);
std::vector<dsp::ComplexSpectrogram> apply_ratio_masks(const dsp::ComplexSpectrogram& x,
                                                       const nn::Tensor& mask);
std::vector<dsp::Waveform> reconstruct_ratio(const dsp::ComplexSpectrogram& x,
                                             const nn::Tensor& mask,
                                             const dsp::StftConfig& cfg = {});

/// Partition checks used by evaluation runs. Each returns the largest
/// deviation found.
double binary_partition_error(const BinaryMaskSet& masks);
double ratio_partition_error(const nn::Tensor& mask);
/// max_i |sum_k stems_k[i] - reference[i]|.
double stem_sum_error(const std::vector<dsp::Waveform>& stems, const dsp::Waveform& reference);

}  // namespace scesep::infer
