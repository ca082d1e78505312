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

#include <string>

#include "scesep/common/random.hpp"
#include "scesep/nn/tensor.hpp"

namespace scesep::nn {

/// Kernel-width-1 convolution over time: the same affine map at every step.
struct AffineParams {
  Parameter weight;  // [D, K]
  Parameter bias;    // [K]

  AffineParams() = default;
  AffineParams(const std::string& name, std::size_t in, std::size_t out)
      : weight(name + ".weight", {in, out}), bias(name + ".bias", {out}) {}

  std::size_t in_features() const { return weight.value.dim(0); }
  std::size_t out_features() const { return weight.value.dim(1); }
  void initialize(Rng& rng);
};

struct AffineCache {
  bool recorded = false;
  Tensor x;
};

/// y[b, t] = x[b, t] W + bias for x of shape [B, T, D].
Tensor time_affine(const Tensor& x, const AffineParams& p, AffineCache* cache = nullptr);
Tensor time_affine_backward(const AffineCache& cache, const Tensor& dy, AffineParams& p);

/// Softmax over the last axis of a [rows, K] view.
void softmax_rows(const double* logits, double* out, std::size_t rows, std::size_t k);

}  // namespace scesep::nn
