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

#include <vector>

#include "scesep/nn/tensor.hpp"

namespace scesep::model {

using nn::Tensor;

/// Source-contrastive loss over a batch.
///
/// v_i: [B, T, F, E] per-bin embeddings. v_o: [B, M, E] source vectors in
/// label order. y: [B, T, F, M] in {-1, +1}.
///   D[b,t,f,m] = <v_i[b,t,f,:], v_o[b,m,:]>
///   loss = -(1 / (B M)) sum_{b,t,f,m} log sigmoid(y D)
struct SceLoss {
  double value = 0.0;
  Tensor dot;              // D, [B, T, F, M]
  Tensor grad_embeddings;  // dL/dv_i
  Tensor grad_sources;     // dL/dv_o
};

SceLoss sce_loss(const Tensor& v_i, const Tensor& v_o, const Tensor& y);

/// Rows of `table` ([C, E]) selected by ids[b][m]; result [B, M, E].
/// Throws UnknownSource for ids outside [0, C).
Tensor gather_source_vectors(const Tensor& table, const std::vector<std::vector<int>>& ids);

/// Adds grad[b, m, :] into table_grad row ids[b][m] for every (b, m).
void scatter_source_grads(const Tensor& grad, const std::vector<std::vector<int>>& ids,
                          Tensor& table_grad);

/// Mask-inference head: per-bin softmax over M of (w_m . v_i + c_m), with
/// w: [M, E] and c: [M] shared across all bins.
struct MiHeadCache {
  bool recorded = false;
  Tensor v_i;
  Tensor mask;
};

Tensor mi_head(const Tensor& v_i, const Tensor& weight, const Tensor& bias,
               MiHeadCache* cache = nullptr);

/// Returns dL/dv_i and accumulates dL/dw, dL/dc.
Tensor mi_head_backward(const MiHeadCache& cache, const Tensor& d_mask, const Tensor& weight,
                        Tensor& d_weight, Tensor& d_bias);

/// mean over (b, t, f, m) of (mask * x_mag - source_mag)^2.
struct MiLoss {
  double value = 0.0;
  Tensor grad_mask;
};

MiLoss mi_loss(const Tensor& mask, const Tensor& x_mag, const Tensor& source_mags);

}  // namespace scesep::model
