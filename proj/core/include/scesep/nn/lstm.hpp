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
#include <vector>

#include "scesep/common/random.hpp"
#include "scesep/nn/tensor.hpp"

namespace scesep::nn {

enum class Direction { kForward, kBackward };

/// Gate weights stacked row-wise in the order input, forget, output,
/// candidate: weight is [4H, D_in + H] acting on [x_t, h_{t-1}], bias is [4H].
struct LstmCellParams {
  Parameter weight;
  Parameter bias;

  LstmCellParams() = default;
  LstmCellParams(const std::string& name, std::size_t input_size, std::size_t hidden);

  std::size_t hidden() const { return bias.value.size() / 4; }
  std::size_t input_size() const { return weight.value.dim(1) - hidden(); }

  /// uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero bias except the
  /// forget gate at +1.
  void initialize(Rng& rng);
};

/// Activations saved by a recorded forward pass.
struct LstmCache {
  bool recorded = false;
  Direction direction = Direction::kForward;
  std::size_t batch = 0, steps = 0, hidden = 0;
  Tensor x;      // [B, T, D]
  Tensor gates;  // [B, T, 4H] post-activation i, f, o, g
  Tensor cell;   // [B, T, H]
  Tensor out;    // [B, T, H]
};

/// Standard LSTM over [B, T, D] with zero initial state. The backward
/// direction runs from t = T-1 down to 0 and writes h_t at index t.
/// Records activations into `cache` when given.
Tensor lstm_forward(const Tensor& x, const LstmCellParams& p, Direction dir,
                    LstmCache* cache = nullptr);

/// Backpropagation through time. Accumulates into p.weight.grad and
/// p.bias.grad and returns dL/dx. Throws NoForwardRecorded.
Tensor lstm_backward(const LstmCache& cache, const Tensor& dy, LstmCellParams& p);

struct BlstmParams {
  LstmCellParams fwd;
  LstmCellParams bwd;

  BlstmParams() = default;
  BlstmParams(const std::string& name, std::size_t input_size, std::size_t hidden_per_direction)
      : fwd(name + ".fwd", input_size, hidden_per_direction),
        bwd(name + ".bwd", input_size, hidden_per_direction) {}

  std::size_t output_size() const { return fwd.hidden() + bwd.hidden(); }
  std::vector<Parameter*> parameters() {
    return {&fwd.weight, &fwd.bias, &bwd.weight, &bwd.bias};
  }
};

struct BlstmCache {
  LstmCache fwd;
  LstmCache bwd;
};

/// [B, T, D] -> [B, T, 2H]: forward outputs in the first H features,
/// backward outputs in the last H.
Tensor blstm_forward(const Tensor& x, const BlstmParams& p, BlstmCache* cache = nullptr);
Tensor blstm_backward(const BlstmCache& cache, const Tensor& dy, BlstmParams& p);

}  // namespace scesep::nn
