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
#include <map>
#include <string>
#include <vector>

#include "scesep/nn/adam.hpp"
#include "scesep/nn/affine.hpp"
#include "scesep/nn/lstm.hpp"
#include "scesep/nn/tensor.hpp"

namespace scesep::model {

using nn::Tensor;

struct ModelConfig {
  std::size_t n_blstm_layers = 2;
  // Width of each BLSTM layer's output, split evenly between directions.
  std::size_t hidden_total = 32;
  std::size_t embed_dim = 8;
  std::size_t num_bins = 257;
  std::size_t num_sources = 2;      // M, sources per mixture
  std::size_t num_source_ids = 12;  // C, rows of the source table
  std::size_t batch = 8;
  double mi_weight = 0.5;  // alpha in alpha * L_sce + (1 - alpha) * L_mi
  std::size_t epochs = 30;
  double lr = 3e-3;
  double clip_norm = 5.0;

  std::size_t hidden_per_direction() const noexcept { return hidden_total / 2; }
  void validate() const;

  std::map<std::string, std::string> to_metadata() const;
  static ModelConfig from_metadata(const std::map<std::string, std::string>& meta);
};

/// Caches for one recorded forward pass through the embedding network.
struct ForwardRecord {
  std::vector<nn::BlstmCache> blstm;
  nn::AffineCache embed;
  bool recorded = false;
};

class SeparationModel;

/// Read-only view of the parts of a trained model used at inference time:
/// the BLSTM stack, the embedding layer and the mask-inference head. It has
/// no access to the source table.
class InferenceNetwork {
 public:
  explicit InferenceNetwork(const SeparationModel& model) : model_(&model) {}

  std::size_t num_bins() const;
  std::size_t embed_dim() const;
  std::size_t num_sources() const;

  /// [B, T, F] compressed magnitudes -> [B, T, F, E] embeddings.
  Tensor embeddings(const Tensor& x) const;
  /// [B, T, F, E] -> [B, T, F, M] ratio mask.
  Tensor ratio_mask(const Tensor& v_i) const;

 private:
  const SeparationModel* model_;
};

/// BLSTM stack, time-distributed embedding layer, mask-inference head and
/// the per-source output table.
class SeparationModel {
 public:
  explicit SeparationModel(ModelConfig cfg);

  /// Seeded initialization: LSTM and affine weights uniform in
  /// +-1/sqrt(fan_in), forget bias +1, MI head zero, source rows unit norm.
  void initialize(std::uint64_t seed);

  const ModelConfig& config() const noexcept { return cfg_; }
  // Epoch budget is the one setting that may change when training resumes.
  void set_epochs(std::size_t epochs) noexcept { cfg_.epochs = epochs; }

  /// All trainable parameters in a fixed order.
  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
  void zero_grad();

  /// reshape(time_affine(blstm_stack(x)), [B, T, F, E]).
  Tensor forward_embeddings(const Tensor& x, ForwardRecord* record = nullptr) const;
  /// Backpropagates dL/dv_i through the embedding layer and BLSTM stack,
  /// accumulating parameter gradients. Throws NoForwardRecorded.
  void backward_embeddings(const ForwardRecord& record, const Tensor& d_embeddings);

  InferenceNetwork inference() const { return InferenceNetwork(*this); }

  std::vector<nn::BlstmParams> blstm;
  nn::AffineParams embed;
  nn::Parameter mi_weight;  // [M, E]
  nn::Parameter mi_bias;    // [M]
  nn::Parameter source_table;  // [C, E]

 private:
  ModelConfig cfg_;
};

/// Bitwise equality of configs and all parameter values.
bool identical(const SeparationModel& a, const SeparationModel& b);

}  // namespace scesep::model
