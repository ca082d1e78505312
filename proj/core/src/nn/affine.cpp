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

#include "scesep/nn/affine.hpp"

#include <algorithm>
#include <cmath>

#include "scesep/common/error.hpp"

namespace scesep::nn {

void AffineParams::initialize(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_features()));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& w : weight.value.values()) w = u(rng);
  bias.value.zero();
}

Tensor time_affine(const Tensor& x, const AffineParams& p, AffineCache* cache) {
  expect_rank(x, 3, "time_affine input");
  const std::size_t B = x.dim(0), T = x.dim(1), D = x.dim(2);
  const std::size_t K = p.out_features();
  if (D != p.in_features()) {
    throw Error(Errc::kShapeMismatch, "time_affine input width " + std::to_string(D) +
                                          ", weight expects " + std::to_string(p.in_features()));
  }
  Tensor y({B, T, K});
  auto Y = y.matrix(B * T, K);
  Y.noalias() = x.matrix(B * T, D) * p.weight.value.matrix(D, K);
  Y.rowwise() += p.bias.value.matrix(1, K).row(0);
  if (cache) {
    cache->recorded = true;
    cache->x = x;
  }
  return y;
}

Tensor time_affine_backward(const AffineCache& cache, const Tensor& dy, AffineParams& p) {
  if (!cache.recorded) throw Error(Errc::kNoForwardRecorded, "time_affine backward without forward");
  const std::size_t B = cache.x.dim(0), T = cache.x.dim(1), D = cache.x.dim(2);
  const std::size_t K = p.out_features();
  if (dy.shape() != Shape{B, T, K}) {
    throw Error(Errc::kShapeMismatch, "time_affine upstream gradient has shape " +
                                          shape_string(dy.shape()));
  }
  const auto dY = dy.matrix(B * T, K);
  const auto X = cache.x.matrix(B * T, D);
  p.weight.grad.matrix(D, K).noalias() += X.transpose() * dY;
  p.bias.grad.matrix(1, K).row(0) += dY.colwise().sum();
  Tensor dx({B, T, D});
  dx.matrix(B * T, D).noalias() = dY * p.weight.value.matrix(D, K).transpose();
  return dx;
}

void softmax_rows(const double* logits, double* out, std::size_t rows, std::size_t k) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* z = logits + r * k;
    double* s = out + r * k;
    const double peak = *std::max_element(z, z + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      s[j] = std::exp(z[j] - peak);
      sum += s[j];
    }
    for (std::size_t j = 0; j < k; ++j) s[j] /= sum;
  }
}

}  // namespace scesep::nn
