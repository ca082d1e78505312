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
#include <optional>
#include <string_view>
#include <vector>

#include "scesep/dsp/stft.hpp"
#include "scesep/infer/kmeans.hpp"
#include "scesep/infer/reconstruct.hpp"
#include "scesep/model/model.hpp"

namespace scesep::infer {

enum class Mode { kCluster, kMaskInference };

std::string_view mode_name(Mode m) noexcept;
Mode parse_mode(std::string_view name);

struct DenoiseOptions {
  Mode mode = Mode::kMaskInference;
  std::size_t k = 2;  // clusters, cluster mode only
  std::uint64_t seed = 0;
  KMeansOptions kmeans;
  dsp::StftConfig stft;
  // Bins whose compressed magnitude falls below this are counted as low
  // energy. They are still clustered.
  double low_energy_threshold = 0.01;
  // Scale each embedding to unit length before clustering.
  bool normalize_embeddings = true;
  // Fit centroids on bins at or above low_energy_threshold only.
  bool fit_active_only = true;
};

struct DenoiseResult {
  std::vector<dsp::Waveform> stems;
  dsp::ComplexSpectrogram mixture_spec;
  std::vector<dsp::ComplexSpectrogram> stem_specs;
  std::optional<BinaryMaskSet> binary_masks;   // cluster mode
  std::optional<nn::Tensor> ratio_mask;        // [T, F, M], mask-inference mode
  std::optional<ClusterAssignment> clusters;   // cluster mode
  std::size_t low_energy_bins = 0;
};

/// stft -> compress -> embeddings -> (k-means + binary masks | MI ratio
/// mask) -> istft. The source table is not consulted.
DenoiseResult denoise(const model::InferenceNetwork& net, const dsp::Waveform& mixture,
                      const DenoiseOptions& opts = {});

}  // namespace scesep::infer
