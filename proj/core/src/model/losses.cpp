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

#include "scesep/model/losses.hpp"

#include <string>

#include "scesep/common/error.hpp"
#include "scesep/nn/affine.hpp"

namespace scesep::model {

using nn::ConstMatrixMap;
using nn::RowMatrix;
using nn::Shape;

SceLoss sce_loss(const Tensor& v_i, const Tensor& v_o, const Tensor& y) {
  nn::expect_rank(v_i, 4, "sce_loss embeddings");
  nn::expect_rank(v_o, 3, "sce_loss source vectors");
  nn::expect_rank(y, 4, "sce_loss labels");
  const std::size_t B = v_i.dim(0), T = v_i.dim(1), F = v_i.dim(2), E = v_i.dim(3);
  const std::size_t M = v_o.dim(1);
  if (v_o.dim(0) != B || v_o.dim(2) != E || y.shape() != Shape{B, T, F, M}) {
    throw Error(Errc::kShapeMismatch, "sce_loss shapes " + nn::shape_string(v_i.shape()) + ", " +
                                          nn::shape_string(v_o.shape()) + ", " +
                                          nn::shape_string(y.shape()));
  }

  SceLoss out;
  out.dot = Tensor({B, T, F, M});
  out.grad_embeddings = Tensor({B, T, F, E});
  out.grad_sources = Tensor({B, M, E});
  const std::size_t bins = T * F;
  const double scale = 1.0 / static_cast<double>(B * M);
  double total = 0.0;
  RowMatrix dD(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(M));
  for (std::size_t b = 0; b < B; ++b) {
    ConstMatrixMap V(v_i.data() + b * bins * E, static_cast<Eigen::Index>(bins),
                     static_cast<Eigen::Index>(E));
    ConstMatrixMap O(v_o.data() + b * M * E, static_cast<Eigen::Index>(M),
                     static_cast<Eigen::Index>(E));
    nn::MatrixMap D(out.dot.data() + b * bins * M, static_cast<Eigen::Index>(bins),
                    static_cast<Eigen::Index>(M));
    ConstMatrixMap Y(y.data() + b * bins * M, static_cast<Eigen::Index>(bins),
                     static_cast<Eigen::Index>(M));
    D.noalias() = V * O.transpose();
    double sample = 0.0;
    for (Eigen::Index r = 0; r < D.rows(); ++r) {
      for (Eigen::Index m = 0; m < D.cols(); ++m) {
        const double z = Y(r, m) * D(r, m);
        sample += nn::log_sigmoid(z);
        // d/dD of -log sigmoid(yD) is -y (1 - sigmoid(yD)).
        dD(r, m) = -scale * Y(r, m) * (1.0 - nn::sigmoid(z));
      }
    }
    total += sample;
    nn::MatrixMap dV(out.grad_embeddings.data() + b * bins * E, static_cast<Eigen::Index>(bins),
                     static_cast<Eigen::Index>(E));
    nn::MatrixMap dO(out.grad_sources.data() + b * M * E, static_cast<Eigen::Index>(M),
                     static_cast<Eigen::Index>(E));
    dV.noalias() = dD * O;
    dO.noalias() = dD.transpose() * V;
  }
  out.value = -scale * total;
  return out;
}

Tensor gather_source_vectors(const Tensor& table, const std::vector<std::vector<int>>& ids) {
  nn::expect_rank(table, 2, "source table");
  const std::size_t C = table.dim(0), E = table.dim(1);
  const std::size_t B = ids.size();
  const std::size_t M = B ? ids.front().size() : 0;
  Tensor out({B, M, E});
  for (std::size_t b = 0; b < B; ++b) {
    if (ids[b].size() != M) throw Error(Errc::kShapeMismatch, "ragged source id rows");
    for (std::size_t m = 0; m < M; ++m) {
      const int id = ids[b][m];
      if (id < 0 || static_cast<std::size_t>(id) >= C) {
        throw Error(Errc::kUnknownSource, "source id " + std::to_string(id) +
                                              " outside table of " + std::to_string(C) + " rows");
      }
      std::copy_n(table.data() + static_cast<std::size_t>(id) * E, E,
                  out.data() + (b * M + m) * E);
    }
  }
  return out;
}

void scatter_source_grads(const Tensor& grad, const std::vector<std::vector<int>>& ids,
                          Tensor& table_grad) {
  const std::size_t E = table_grad.dim(1);
  const std::size_t M = grad.dim(1);
  for (std::size_t b = 0; b < ids.size(); ++b) {
    for (std::size_t m = 0; m < M; ++m) {
      const auto row = static_cast<std::size_t>(ids[b][m]);
      for (std::size_t e = 0; e < E; ++e) {
        table_grad[row * E + e] += grad[(b * M + m) * E + e];
      }
    }
  }
}

Tensor mi_head(const Tensor& v_i, const Tensor& weight, const Tensor& bias, MiHeadCache* cache) {
  nn::expect_rank(v_i, 4, "mi_head embeddings");
  const std::size_t B = v_i.dim(0), T = v_i.dim(1), F = v_i.dim(2), E = v_i.dim(3);
  const std::size_t M = weight.dim(0);
  if (weight.dim(1) != E || bias.size() != M) {
    throw Error(Errc::kShapeMismatch, "mi_head weight " + nn::shape_string(weight.shape()) +
                                          " incompatible with embeddings " +
                                          nn::shape_string(v_i.shape()));
  }
  const std::size_t rows = B * T * F;
  RowMatrix logits = v_i.matrix(rows, E) * weight.matrix(M, E).transpose();
  logits.rowwise() += bias.matrix(1, M).row(0);
  Tensor mask({B, T, F, M});
  nn::softmax_rows(logits.data(), mask.data(), rows, M);
  if (cache) {
    cache->recorded = true;
    cache->v_i = v_i;
    cache->mask = mask;
  }
  return mask;
}

Tensor mi_head_backward(const MiHeadCache& cache, const Tensor& d_mask, const Tensor& weight,
                        Tensor& d_weight, Tensor& d_bias) {
  if (!cache.recorded) throw Error(Errc::kNoForwardRecorded, "mi_head backward without forward");
  if (!d_mask.same_shape(cache.mask)) {
    throw Error(Errc::kShapeMismatch, "mi_head upstream gradient shape");
  }
  const std::size_t M = weight.dim(0), E = weight.dim(1);
  const std::size_t rows = cache.mask.size() / M;
  // Softmax Jacobian: dz_m = s_m (g_m - sum_k s_k g_k).
  RowMatrix dz(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(M));
  for (std::size_t r = 0; r < rows; ++r) {
    const double* s = cache.mask.data() + r * M;
    const double* g = d_mask.data() + r * M;
    double dot = 0.0;
    for (std::size_t m = 0; m < M; ++m) dot += s[m] * g[m];
    for (std::size_t m = 0; m < M; ++m) {
      dz(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = s[m] * (g[m] - dot);
    }
  }
  const auto V = cache.v_i.matrix(rows, E);
  d_weight.matrix(M, E).noalias() += dz.transpose() * V;
  d_bias.matrix(1, M).row(0) += dz.colwise().sum();
  Tensor dv(cache.v_i.shape());
  dv.matrix(rows, E).noalias() = dz * weight.matrix(M, E);
  return dv;
}

MiLoss mi_loss(const Tensor& mask, const Tensor& x_mag, const Tensor& source_mags) {
  nn::expect_rank(mask, 4, "mi_loss mask");
  nn::expect_rank(x_mag, 3, "mi_loss mixture magnitude");
  const std::size_t B = mask.dim(0), T = mask.dim(1), F = mask.dim(2), M = mask.dim(3);
  if (x_mag.shape() != Shape{B, T, F} || !source_mags.same_shape(mask)) {
    throw Error(Errc::kShapeMismatch, "mi_loss shapes " + nn::shape_string(mask.shape()) + ", " +
                                          nn::shape_string(x_mag.shape()) + ", " +
                                          nn::shape_string(source_mags.shape()));
  }
  MiLoss out;
  out.grad_mask = Tensor(mask.shape());
  const double n = static_cast<double>(mask.size());
  double sum = 0.0;
  for (std::size_t bin = 0; bin < B * T * F; ++bin) {
    const double x = x_mag[bin];
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t i = bin * M + m;
      const double r = mask[i] * x - source_mags[i];
      sum += r * r;
      out.grad_mask[i] = 2.0 * r * x / n;
    }
  }
  out.value = sum / n;
  return out;
}

}  // namespace scesep::model
