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

#include <cmath>

#include "scesep/nn/tensor.hpp"

namespace scesep::testing {

// Plain nested loops over b, t, f, m, e with a naive log(1 / (1 + exp(-z))).
// Kept deliberately independent of the library's tensor code.
struct ScalarSce {
  double loss = 0.0;
  std::vector<double> grad_vi;
  std::vector<double> grad_vo;
};

inline double naive_log_sigmoid(double z) {
  if (z >= 0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

inline ScalarSce scalar_sce(const nn::Tensor& vi, const nn::Tensor& vo, const nn::Tensor& y) {
  const std::size_t B = vi.dim(0), T = vi.dim(1), F = vi.dim(2), E = vi.dim(3), M = vo.dim(1);
  ScalarSce out;
  out.grad_vi.assign(vi.size(), 0.0);
  out.grad_vo.assign(vo.size(), 0.0);
  const double norm = 1.0 / static_cast<double>(B * M);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t f = 0; f < F; ++f) {
        for (std::size_t m = 0; m < M; ++m) {
          double d = 0.0;
          for (std::size_t e = 0; e < E; ++e) d += vi.at({b, t, f, e}) * vo.at({b, m, e});
          const double yy = y.at({b, t, f, m});
          out.loss -= norm * naive_log_sigmoid(yy * d);
          const double s = 1.0 / (1.0 + std::exp(-yy * d));
          const double dd = -norm * yy * (1.0 - s);
          for (std::size_t e = 0; e < E; ++e) {
            out.grad_vi[((b * T + t) * F + f) * E + e] += dd * vo.at({b, m, e});
            out.grad_vo[(b * M + m) * E + e] += dd * vi.at({b, t, f, e});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace scesep::testing
