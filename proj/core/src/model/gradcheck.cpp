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

#include "scesep/model/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "scesep/common/random.hpp"
#include "scesep/model/losses.hpp"
#include "scesep/model/model.hpp"
#include "scesep/model/trainer.hpp"
#include "scesep/nn/affine.hpp"
#include "scesep/nn/lstm.hpp"

namespace scesep::model {

namespace {

using nn::Shape;

Tensor random_tensor(Rng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> u(lo, hi);
  for (double& v : t.values()) v = u(rng);
  return t;
}

Tensor random_labels(Rng& rng, std::size_t B, std::size_t T, std::size_t F, std::size_t M) {
  Tensor y({B, T, F, M}, -1.0);
  std::uniform_int_distribution<std::size_t> pick(0, M - 1);
  for (std::size_t bin = 0; bin < B * T * F; ++bin) y[bin * M + pick(rng)] = 1.0;
  return y;
}

double dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Target {
  Tensor* value;
  Tensor analytic;
};

GradcheckEntry compare(const std::string& name, std::vector<Target> targets,
                       const std::function<double()>& loss, double tol,
                       const GradcheckOptions& opts, double step = 0.0) {
  const double h = step > 0.0 ? step : opts.epsilon;
  GradcheckEntry entry;
  entry.name = name;
  entry.tolerance = tol;
  const double corrupt = (opts.corrupt == name) ? 1.01 : 1.0;
  for (auto& target : targets) {
    Tensor& v = *target.value;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double saved = v[i];
      auto at = [&](double d) {
        v[i] = saved + d;
        return loss();
      };
      // five-point central stencil
      const double d1 = at(h) - at(-h);
      const double d2 = at(2.0 * h) - at(-2.0 * h);
      v[i] = saved;
      const double numeric = (8.0 * d1 - d2) / (12.0 * h);
      entry.max_rel_error =
          std::max(entry.max_rel_error, relative_error(corrupt * target.analytic[i], numeric));
      ++entry.checked;
    }
  }
  entry.passed = entry.max_rel_error < tol;
  return entry;
}

GradcheckEntry check_lstm(Rng& rng, nn::Direction dir, const GradcheckOptions& opts) {
  const std::size_t B = 2, T = 3, D = 3, H = 3;
  nn::LstmCellParams p("lstm", D, H);
  p.initialize(rng);
  for (double& b : p.bias.value.values()) b += std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
  Tensor x = random_tensor(rng, {B, T, D});
  const Tensor r = random_tensor(rng, {B, T, H});

  nn::LstmCache cache;
  nn::lstm_forward(x, p, dir, &cache);
  const Tensor dx = nn::lstm_backward(cache, r, p);
  auto loss = [&] { return dot(nn::lstm_forward(x, p, dir), r); };
  const std::string name =
      dir == nn::Direction::kForward ? "lstm_forward(fwd)" : "lstm_forward(bwd)";
  return compare(name,
                 {{&p.weight.value, p.weight.grad}, {&p.bias.value, p.bias.grad}, {&x, dx}}, loss,
                 opts.recurrent_tolerance, opts);
}

GradcheckEntry check_blstm(Rng& rng, const GradcheckOptions& opts) {
  const std::size_t B = 2, T = 3, D = 3, H = 2;
  nn::BlstmParams p("blstm", D, H);
  p.fwd.initialize(rng);
  p.bwd.initialize(rng);
  Tensor x = random_tensor(rng, {B, T, D});
  const Tensor r = random_tensor(rng, {B, T, 2 * H});
  nn::BlstmCache cache;
  nn::blstm_forward(x, p, &cache);
  const Tensor dx = nn::blstm_backward(cache, r, p);
  auto loss = [&] { return dot(nn::blstm_forward(x, p), r); };
  std::vector<Target> targets;
  for (auto* param : p.parameters()) targets.push_back({&param->value, param->grad});
  targets.push_back({&x, dx});
  return compare("blstm_layer", std::move(targets), loss, opts.recurrent_tolerance, opts);
}

GradcheckEntry check_affine(Rng& rng, const GradcheckOptions& opts) {
  const std::size_t B = 2, T = 3, D = 4, K = 5;
  nn::AffineParams p("affine", D, K);
  p.initialize(rng);
  p.bias.value = random_tensor(rng, {K});
  Tensor x = random_tensor(rng, {B, T, D});
  const Tensor r = random_tensor(rng, {B, T, K});
  nn::AffineCache cache;
  nn::time_affine(x, p, &cache);
  const Tensor dx = nn::time_affine_backward(cache, r, p);
  auto loss = [&] { return dot(nn::time_affine(x, p), r); };
  return compare("time_affine",
                 {{&p.weight.value, p.weight.grad}, {&p.bias.value, p.bias.grad}, {&x, dx}}, loss,
                 opts.op_tolerance, opts);
}

GradcheckEntry check_sce(Rng& rng, const GradcheckOptions& opts) {
  const std::size_t B = 2, T = 3, F = 4, M = 2, E = 3;
  Tensor v_i = random_tensor(rng, {B, T, F, E});
  Tensor v_o = random_tensor(rng, {B, M, E});
  const Tensor y = random_labels(rng, B, T, F, M);
  const SceLoss l = sce_loss(v_i, v_o, y);
  auto loss = [&] { return sce_loss(v_i, v_o, y).value; };
  return compare("sce_loss", {{&v_i, l.grad_embeddings}, {&v_o, l.grad_sources}}, loss,
                 opts.op_tolerance, opts);
}

GradcheckEntry check_source_table(Rng& rng, const GradcheckOptions& opts) {
  const std::size_t B = 3, T = 2, F = 3, M = 2, E = 3, C = 5;
  const Tensor v_i = random_tensor(rng, {B, T, F, E});
  Tensor table = random_tensor(rng, {C, E});
  // Row 1 is shared by every batch row so its gradient fans in.
  const std::vector<std::vector<int>> ids = {{1, 4}, {1, 0}, {2, 1}};
  const Tensor y = random_labels(rng, B, T, F, M);
  const SceLoss l = sce_loss(v_i, gather_source_vectors(table, ids), y);
  Tensor table_grad({C, E});
  scatter_source_grads(l.grad_sources, ids, table_grad);
  auto loss = [&] { return sce_loss(v_i, gather_source_vectors(table, ids), y).value; };
  return compare("source_table", {{&table, table_grad}}, loss, opts.op_tolerance, opts);
}

GradcheckEntry check_mi(Rng& rng, const GradcheckOptions& opts) {
  const std::size_t B = 2, T = 3, F = 4, M = 2, E = 3;
  Tensor v_i = random_tensor(rng, {B, T, F, E});
  Tensor w = random_tensor(rng, {M, E});
  Tensor c = random_tensor(rng, {M});
  const Tensor x = random_tensor(rng, {B, T, F}, 0.0, 1.0);
  const Tensor s = random_tensor(rng, {B, T, F, M}, 0.0, 1.0);
  MiHeadCache cache;
  const Tensor mask = mi_head(v_i, w, c, &cache);
  const MiLoss l = mi_loss(mask, x, s);
  Tensor dw({M, E});
  Tensor dc({M});
  const Tensor dv = mi_head_backward(cache, l.grad_mask, w, dw, dc);
  auto loss = [&] { return mi_loss(mi_head(v_i, w, c), x, s).value; };
  return compare("mi_head+mi_loss", {{&v_i, dv}, {&w, dw}, {&c, dc}}, loss, opts.op_tolerance,
                 opts);
}

GradcheckEntry check_full_model(Rng& rng, std::uint64_t seed, const GradcheckOptions& opts) {
  ModelConfig cfg;
  cfg.n_blstm_layers = 2;
  cfg.hidden_total = 8;
  cfg.embed_dim = 3;
  cfg.num_bins = 5;
  cfg.num_sources = 2;
  cfg.num_source_ids = 4;
  cfg.batch = 2;
  cfg.mi_weight = 0.5;
  SeparationModel model(cfg);
  model.initialize(stream_seed(seed, "gradcheck/model"));
  for (double& v : model.mi_weight.value.values()) v = std::uniform_real_distribution<double>(-1, 1)(rng);

  const std::size_t B = 2, T = 4, F = cfg.num_bins, M = 2;
  Batch batch;
  batch.x = random_tensor(rng, {B, T, F}, 0.0, 1.0);
  batch.labels = random_labels(rng, B, T, F, M);
  batch.source_mags = random_tensor(rng, {B, T, F, M}, 0.0, 1.0);
  batch.source_ids = {{0, 3}, {2, 3}};

  model.zero_grad();
  accumulate_gradients(model, batch);
  const double alpha = cfg.mi_weight;
  auto loss = [&] {
    const Losses l = evaluate(model, batch);
    return alpha * l.sce + (1.0 - alpha) * l.mi;
  };
  std::vector<Target> targets;
  for (auto* p : model.parameters()) targets.push_back({&p->value, p->grad});
  return compare("full_model", std::move(targets), loss, opts.recurrent_tolerance, opts,
                 opts.model_epsilon);
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

bool GradcheckReport::passed() const {
  return !entries.empty() &&
         std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

GradcheckReport run_gradcheck(std::uint64_t seed, const GradcheckOptions& opts) {
  GradcheckReport report;
  Rng rng = make_rng(seed, "gradcheck");
  report.entries.push_back(check_lstm(rng, nn::Direction::kForward, opts));
  report.entries.push_back(check_lstm(rng, nn::Direction::kBackward, opts));
  report.entries.push_back(check_blstm(rng, opts));
  report.entries.push_back(check_affine(rng, opts));
  report.entries.push_back(check_sce(rng, opts));
  report.entries.push_back(check_source_table(rng, opts));
  report.entries.push_back(check_mi(rng, opts));
  report.entries.push_back(check_full_model(rng, seed, opts));
  return report;
}

}  // namespace scesep::model
