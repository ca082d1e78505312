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

#include "scesep/nn/lstm.hpp"

#include <cmath>

#include "scesep/common/error.hpp"

namespace scesep::nn {

LstmCellParams::LstmCellParams(const std::string& name, std::size_t input_size,
                               std::size_t hidden)
    : weight(name + ".weight", {4 * hidden, input_size + hidden}),
      bias(name + ".bias", {4 * hidden}) {}

void LstmCellParams::initialize(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(weight.value.dim(1)));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& w : weight.value.values()) w = u(rng);
  bias.value.zero();
  const std::size_t h = hidden();
  for (std::size_t j = h; j < 2 * h; ++j) bias.value[j] = 1.0;
}

namespace {

std::size_t time_index(Direction dir, std::size_t step, std::size_t steps) {
  return dir == Direction::kForward ? step : steps - 1 - step;
}

}  // namespace

Tensor lstm_forward(const Tensor& x, const LstmCellParams& p, Direction dir, LstmCache* cache) {
  expect_rank(x, 3, "lstm_forward input");
  const std::size_t B = x.dim(0), T = x.dim(1), D = x.dim(2);
  const std::size_t H = p.hidden();
  if (D != p.input_size()) {
    throw Error(Errc::kShapeMismatch, "lstm input width " + std::to_string(D) +
                                          " but cell expects " + std::to_string(p.input_size()));
  }

  const auto W = p.weight.value.matrix(4 * H, D + H);
  const auto Wx = W.leftCols(static_cast<Eigen::Index>(D));
  const auto Wh = W.rightCols(static_cast<Eigen::Index>(H));
  const auto bias = p.bias.value.matrix(1, 4 * H);

  // Input projections for every (b, t) at once: rows are b * T + t.
  RowMatrix pre = x.matrix(B * T, D) * Wx.transpose();
  pre.rowwise() += bias.row(0);

  Tensor gates({B, T, 4 * H});
  Tensor cell({B, T, H});
  Tensor out({B, T, H});
  auto G = gates.matrix(B * T, 4 * H);
  auto C = cell.matrix(B * T, H);
  auto Y = out.matrix(B * T, H);

  RowMatrix h_prev = RowMatrix::Zero(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(H));
  RowMatrix c_prev = h_prev;
  RowMatrix a(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(4 * H));
  for (std::size_t s = 0; s < T; ++s) {
    const std::size_t t = time_index(dir, s, T);
    a.noalias() = h_prev * Wh.transpose();
    for (std::size_t b = 0; b < B; ++b) {
      const auto row = static_cast<Eigen::Index>(b * T + t);
      const auto bi = static_cast<Eigen::Index>(b);
      for (std::size_t j = 0; j < H; ++j) {
        const auto ji = static_cast<Eigen::Index>(j);
        const auto hi = static_cast<Eigen::Index>(H);
        const double i_g = sigmoid(pre(row, ji) + a(bi, ji));
        const double f_g = sigmoid(pre(row, hi + ji) + a(bi, hi + ji));
        const double o_g = sigmoid(pre(row, 2 * hi + ji) + a(bi, 2 * hi + ji));
        const double g_g = std::tanh(pre(row, 3 * hi + ji) + a(bi, 3 * hi + ji));
        const double c = f_g * c_prev(bi, ji) + i_g * g_g;
        const double h = o_g * std::tanh(c);
        G(row, ji) = i_g;
        G(row, hi + ji) = f_g;
        G(row, 2 * hi + ji) = o_g;
        G(row, 3 * hi + ji) = g_g;
        C(row, ji) = c;
        Y(row, ji) = h;
        c_prev(bi, ji) = c;
        h_prev(bi, ji) = h;
      }
    }
  }

  if (cache) {
    cache->recorded = true;
    cache->direction = dir;
    cache->batch = B;
    cache->steps = T;
    cache->hidden = H;
    cache->x = x;
    cache->gates = std::move(gates);
    cache->cell = std::move(cell);
    cache->out = out;
  }
  return out;
}

Tensor lstm_backward(const LstmCache& cache, const Tensor& dy, LstmCellParams& p) {
  if (!cache.recorded) throw Error(Errc::kNoForwardRecorded, "lstm backward without forward");
  const std::size_t B = cache.batch, T = cache.steps, H = cache.hidden;
  const std::size_t D = cache.x.dim(2);
  if (dy.shape() != Shape{B, T, H}) {
    throw Error(Errc::kShapeMismatch, "lstm upstream gradient has shape " +
                                          shape_string(dy.shape()));
  }
  const auto W = p.weight.value.matrix(4 * H, D + H);
  const auto Wx = W.leftCols(static_cast<Eigen::Index>(D));
  const auto Wh = W.rightCols(static_cast<Eigen::Index>(H));
  const auto G = cache.gates.matrix(B * T, 4 * H);
  const auto C = cache.cell.matrix(B * T, H);
  const auto Y = cache.out.matrix(B * T, H);
  const auto dY = dy.matrix(B * T, H);

  RowMatrix dA = RowMatrix::Zero(static_cast<Eigen::Index>(B * T), static_cast<Eigen::Index>(4 * H));
  // h_{t-1} for each row in processing order; zero at the first step.
  RowMatrix h_before = RowMatrix::Zero(static_cast<Eigen::Index>(B * T), static_cast<Eigen::Index>(H));
  RowMatrix dh_next = RowMatrix::Zero(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(H));
  RowMatrix dc_next = dh_next;
  RowMatrix dA_step(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(4 * H));
  const auto hi = static_cast<Eigen::Index>(H);

  for (std::size_t s = T; s-- > 0;) {
    const std::size_t t = time_index(cache.direction, s, T);
    const bool first = (s == 0);
    const std::size_t t_prev = first ? 0 : time_index(cache.direction, s - 1, T);
    for (std::size_t b = 0; b < B; ++b) {
      const auto row = static_cast<Eigen::Index>(b * T + t);
      const auto prow = static_cast<Eigen::Index>(b * T + t_prev);
      const auto bi = static_cast<Eigen::Index>(b);
      for (Eigen::Index j = 0; j < hi; ++j) {
        const double i_g = G(row, j), f_g = G(row, hi + j), o_g = G(row, 2 * hi + j),
                     g_g = G(row, 3 * hi + j);
        const double c = C(row, j);
        const double c_prev = first ? 0.0 : C(prow, j);
        const double tc = std::tanh(c);
        const double dh = dY(row, j) + dh_next(bi, j);
        const double d_o = dh * tc;
        const double dc = dh * o_g * (1.0 - tc * tc) + dc_next(bi, j);
        const double d_i = dc * g_g;
        const double d_g = dc * i_g;
        const double d_f = dc * c_prev;
        dc_next(bi, j) = dc * f_g;
        dA_step(bi, j) = d_i * i_g * (1.0 - i_g);
        dA_step(bi, hi + j) = d_f * f_g * (1.0 - f_g);
        dA_step(bi, 2 * hi + j) = d_o * o_g * (1.0 - o_g);
        dA_step(bi, 3 * hi + j) = d_g * (1.0 - g_g * g_g);
        if (!first) h_before(row, j) = Y(prow, j);
      }
      dA.row(row) = dA_step.row(bi);
    }
    dh_next.noalias() = dA_step * Wh;
  }

  auto dW = p.weight.grad.matrix(4 * H, D + H);
  const auto X = cache.x.matrix(B * T, D);
  dW.leftCols(static_cast<Eigen::Index>(D)).noalias() += dA.transpose() * X;
  dW.rightCols(hi).noalias() += dA.transpose() * h_before;
  p.bias.grad.matrix(1, 4 * H).row(0) += dA.colwise().sum();

  Tensor dx({B, T, D});
  dx.matrix(B * T, D).noalias() = dA * Wx;
  return dx;
}

Tensor blstm_forward(const Tensor& x, const BlstmParams& p, BlstmCache* cache) {
  Tensor yf = lstm_forward(x, p.fwd, Direction::kForward, cache ? &cache->fwd : nullptr);
  Tensor yb = lstm_forward(x, p.bwd, Direction::kBackward, cache ? &cache->bwd : nullptr);
  const std::size_t B = x.dim(0), T = x.dim(1);
  const std::size_t Hf = p.fwd.hidden(), Hb = p.bwd.hidden();
  Tensor y({B, T, Hf + Hb});
  auto Y = y.matrix(B * T, Hf + Hb);
  Y.leftCols(static_cast<Eigen::Index>(Hf)) = yf.matrix(B * T, Hf);
  Y.rightCols(static_cast<Eigen::Index>(Hb)) = yb.matrix(B * T, Hb);
  return y;
}

Tensor blstm_backward(const BlstmCache& cache, const Tensor& dy, BlstmParams& p) {
  if (!cache.fwd.recorded || !cache.bwd.recorded) {
    throw Error(Errc::kNoForwardRecorded, "blstm backward without forward");
  }
  const std::size_t B = cache.fwd.batch, T = cache.fwd.steps;
  const std::size_t Hf = p.fwd.hidden(), Hb = p.bwd.hidden();
  if (dy.shape() != Shape{B, T, Hf + Hb}) {
    throw Error(Errc::kShapeMismatch, "blstm upstream gradient has shape " +
                                          shape_string(dy.shape()));
  }
  const auto dY = dy.matrix(B * T, Hf + Hb);
  Tensor dyf({B, T, Hf});
  Tensor dyb({B, T, Hb});
  dyf.matrix(B * T, Hf) = dY.leftCols(static_cast<Eigen::Index>(Hf));
  dyb.matrix(B * T, Hb) = dY.rightCols(static_cast<Eigen::Index>(Hb));
  Tensor dx = lstm_backward(cache.fwd, dyf, p.fwd);
  Tensor dxb = lstm_backward(cache.bwd, dyb, p.bwd);
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dxb[i];
  return dx;
}

}  // namespace scesep::nn
