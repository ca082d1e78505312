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

#include "scesep/infer/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scesep/common/error.hpp"
#include "scesep/dsp/feature.hpp"

namespace scesep::infer {

std::string_view mode_name(Mode m) noexcept {
  return m == Mode::kCluster ? "cluster" : "mi";
}

Mode parse_mode(std::string_view name) {
  if (name == "cluster") return Mode::kCluster;
  if (name == "mi") return Mode::kMaskInference;
  throw Error(Errc::kInvalidArgument, "unknown mode '" + std::string(name) + "'");
}

DenoiseResult denoise(const model::InferenceNetwork& net, const dsp::Waveform& mixture,
                      const DenoiseOptions& opts) {
  if (mixture.sample_rate_hz != opts.stft.sample_rate_hz) {
    throw Error(Errc::kInvalidArgument, "mixture is at " + std::to_string(mixture.sample_rate_hz) +
                                            " Hz, analysis expects " +
                                            std::to_string(opts.stft.sample_rate_hz) + " Hz");
  }
  DenoiseResult result;
  result.mixture_spec = dsp::stft(mixture, opts.stft);
  const dsp::MagnitudeFeature feat = dsp::compress(result.mixture_spec);
  const std::size_t T = feat.frames, F = feat.bins;
  for (double m : feat.mag) {
    if (m < opts.low_energy_threshold) ++result.low_energy_bins;
  }

  const nn::Tensor x({1, T, F}, feat.mag);
  const nn::Tensor v_i = net.embeddings(x);

  if (opts.mode == Mode::kCluster) {
    const std::size_t E = net.embed_dim();
    std::vector<double> points(v_i.values().begin(), v_i.values().end());
    if (opts.normalize_embeddings) {
      for (std::size_t i = 0; i < T * F; ++i) {
        double n = 0.0;
        for (std::size_t e = 0; e < E; ++e) n += points[i * E + e] * points[i * E + e];
        if (n <= 0.0) continue;
        n = std::sqrt(n);
        for (std::size_t e = 0; e < E; ++e) points[i * E + e] /= n;
      }
    }
    std::vector<std::size_t> active;
    if (opts.fit_active_only) {
      for (std::size_t i = 0; i < T * F; ++i) {
        if (feat.mag[i] >= opts.low_energy_threshold) active.push_back(i);
      }
    }
    if (active.size() >= opts.k && active.size() < T * F) {
      std::vector<double> fit(active.size() * E);
      for (std::size_t j = 0; j < active.size(); ++j) {
        std::copy_n(points.begin() + static_cast<std::ptrdiff_t>(active[j] * E), E,
                    fit.begin() + static_cast<std::ptrdiff_t>(j * E));
      }
      ClusterAssignment c = kmeans(fit, E, opts.k, opts.seed, opts.kmeans);
      // quiet bins go to the nearest fitted centroid
      std::vector<int> labels(T * F);
      for (std::size_t i = 0; i < T * F; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < opts.k; ++k) {
          double d = 0.0;
          for (std::size_t e = 0; e < E; ++e) {
            const double diff = points[i * E + e] - c.centroids[k * E + e];
            d += diff * diff;
          }
          if (d < best) {
            best = d;
            labels[i] = static_cast<int>(k);
          }
        }
      }
      for (std::size_t j = 0; j < active.size(); ++j) labels[active[j]] = c.labels[j];
      c.labels = std::move(labels);
      result.clusters = std::move(c);
    } else {
      result.clusters = kmeans(points, E, opts.k, opts.seed, opts.kmeans);
    }
    result.binary_masks = masks_from_clusters(*result.clusters, T, F);
    result.stem_specs = apply_binary_masks(result.mixture_spec, *result.binary_masks);
  } else {
    const nn::Tensor mask = net.ratio_mask(v_i);
    result.ratio_mask = mask.reshaped({T, F, mask.dim(3)});
    result.stem_specs = apply_ratio_masks(result.mixture_spec, *result.ratio_mask);
  }
  for (const auto& s : result.stem_specs) result.stems.push_back(dsp::istft(s, opts.stft));
  return result;
}

}  // namespace scesep::infer
