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

#include "scesep/model/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"
#include "scesep/dsp/feature.hpp"
#include "scesep/model/losses.hpp"

namespace scesep::model {

TrainingExample make_example(const mix::MixRecord& rec) {
  const dsp::MagnitudeFeature feat = dsp::compress(rec.mixture_spec);
  const std::size_t T = feat.frames, F = feat.bins, M = rec.num_sources();
  TrainingExample ex;
  ex.x = Tensor({T, F}, feat.mag);
  ex.labels = Tensor({T, F, M});
  ex.source_mags = Tensor({T, F, M});
  for (std::size_t m = 0; m < M; ++m) {
    const auto mags = dsp::compressed_magnitude(rec.source_specs[m], feat.norm_scale);
    for (std::size_t i = 0; i < T * F; ++i) {
      ex.source_mags[i * M + m] = mags[i];
      ex.labels[i * M + m] = rec.labels.data()[i * M + m];
    }
  }
  ex.source_ids = rec.source_ids;
  return ex;
}

std::vector<TrainingExample> make_examples(const std::vector<mix::MixRecord>& recs) {
  std::vector<TrainingExample> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(make_example(r));
  return out;
}

Batch make_batch(std::span<const TrainingExample* const> examples) {
  if (examples.empty()) throw Error(Errc::kEmptyCorpus, "empty batch");
  const auto& first = *examples.front();
  const std::size_t B = examples.size();
  const std::size_t T = first.x.dim(0), F = first.x.dim(1), M = first.labels.dim(2);
  Batch batch;
  batch.x = Tensor({B, T, F});
  batch.labels = Tensor({B, T, F, M});
  batch.source_mags = Tensor({B, T, F, M});
  for (std::size_t b = 0; b < B; ++b) {
    const auto& ex = *examples[b];
    if (!ex.x.same_shape(first.x) || !ex.labels.same_shape(first.labels)) {
      throw Error(Errc::kShapeMismatch, "batch examples differ in shape");
    }
    std::copy(ex.x.storage().begin(), ex.x.storage().end(), batch.x.data() + b * T * F);
    std::copy(ex.labels.storage().begin(), ex.labels.storage().end(),
              batch.labels.data() + b * T * F * M);
    std::copy(ex.source_mags.storage().begin(), ex.source_mags.storage().end(),
              batch.source_mags.data() + b * T * F * M);
    batch.source_ids.push_back(ex.source_ids);
  }
  return batch;
}

Losses accumulate_gradients(SeparationModel& model, const Batch& batch) {
  const double alpha = model.config().mi_weight;
  ForwardRecord record;
  const Tensor v_i = model.forward_embeddings(batch.x, &record);
  const Tensor v_o = gather_source_vectors(model.source_table.value, batch.source_ids);
  SceLoss sce = sce_loss(v_i, v_o, batch.labels);

  MiHeadCache head;
  const Tensor mask = mi_head(v_i, model.mi_weight.value, model.mi_bias.value, &head);
  MiLoss mi = mi_loss(mask, batch.x, batch.source_mags);

  for (double& g : mi.grad_mask.values()) g *= (1.0 - alpha);
  Tensor d_v = mi_head_backward(head, mi.grad_mask, model.mi_weight.value, model.mi_weight.grad,
                                model.mi_bias.grad);
  for (std::size_t i = 0; i < d_v.size(); ++i) d_v[i] += alpha * sce.grad_embeddings[i];
  for (double& g : sce.grad_sources.values()) g *= alpha;
  scatter_source_grads(sce.grad_sources, batch.source_ids, model.source_table.grad);
  model.backward_embeddings(record, d_v);
  return {sce.value, mi.value};
}

Losses evaluate(const SeparationModel& model, const Batch& batch) {
  const Tensor v_i = model.forward_embeddings(batch.x);
  const Tensor v_o = gather_source_vectors(model.source_table.value, batch.source_ids);
  const Tensor mask = mi_head(v_i, model.mi_weight.value, model.mi_bias.value);
  return {sce_loss(v_i, v_o, batch.labels).value, mi_loss(mask, batch.x, batch.source_mags).value};
}

TrainState start_training(const ModelConfig& cfg, std::uint64_t seed) {
  TrainState state(cfg);
  state.seed = seed;
  state.model.initialize(seed);
  state.best = state.model;
  for (const auto* p : state.model.parameters()) {
    state.adam_m.emplace_back(p->value.shape());
    state.adam_v.emplace_back(p->value.shape());
  }
  return state;
}

namespace {

// Example-weighted mean losses over a dataset, evaluated in batches.
Losses mean_losses(const SeparationModel& model, const std::vector<TrainingExample>& data) {
  Losses total;
  const std::size_t bs = model.config().batch;
  for (std::size_t start = 0; start < data.size(); start += bs) {
    std::vector<const TrainingExample*> ptrs;
    for (std::size_t i = start; i < std::min(data.size(), start + bs); ++i) ptrs.push_back(&data[i]);
    const Losses l = evaluate(model, make_batch(ptrs));
    total.sce += l.sce * static_cast<double>(ptrs.size());
    total.mi += l.mi * static_cast<double>(ptrs.size());
  }
  total.sce /= static_cast<double>(data.size());
  total.mi /= static_cast<double>(data.size());
  return total;
}

}  // namespace

void continue_training(TrainState& state, const std::vector<TrainingExample>& train,
                       const std::vector<TrainingExample>& val, std::size_t until_epoch,
                       const EpochCallback& on_epoch) {
  if (train.empty()) throw Error(Errc::kEmptyCorpus, "no training examples");
  const ModelConfig& cfg = state.model.config();
  const double alpha = cfg.mi_weight;
  nn::Adam adam(state.model.parameters(), nn::AdamConfig{cfg.lr, 0.9, 0.999, 1e-8});
  adam.first_moments() = state.adam_m;
  adam.second_moments() = state.adam_v;
  adam.set_steps(state.adam_steps);
  const auto params = state.model.parameters();

  while (state.epochs_done < until_epoch) {
    const std::size_t epoch = state.epochs_done + 1;
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = make_rng(state.seed, "shuffle", epoch);
    std::shuffle(order.begin(), order.end(), rng);

    Losses running;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      std::vector<const TrainingExample*> ptrs;
      for (std::size_t i = start; i < std::min(order.size(), start + cfg.batch); ++i) {
        ptrs.push_back(&train[order[i]]);
      }
      const Batch batch = make_batch(ptrs);
      state.model.zero_grad();
      const Losses l = accumulate_gradients(state.model, batch);
      nn::clip_grad_norm(params, cfg.clip_norm);
      adam.step();
      running.sce += l.sce * static_cast<double>(ptrs.size());
      running.mi += l.mi * static_cast<double>(ptrs.size());
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_sce = running.sce / static_cast<double>(train.size());
    entry.train_mi = running.mi / static_cast<double>(train.size());
    const Losses v = val.empty() ? Losses{entry.train_sce, entry.train_mi}
                                 : mean_losses(state.model, val);
    entry.val_sce = v.sce;
    entry.val_mi = v.mi;
    const double objective = alpha * v.sce + (1.0 - alpha) * v.mi;
    if (objective < state.best_val) {
      state.best_val = objective;
      state.best = state.model;
    }
    state.log.push_back(entry);
    state.epochs_done = epoch;
    state.adam_m = adam.first_moments();
    state.adam_v = adam.second_moments();
    state.adam_steps = adam.steps();
    state.model.zero_grad();
    if (on_epoch) on_epoch(entry);
  }
}

TrainState train(const std::vector<mix::MixRecord>& train_set,
                 const std::vector<mix::MixRecord>& val_set, const ModelConfig& cfg,
                 std::uint64_t seed, const EpochCallback& on_epoch) {
  if (train_set.empty()) throw Error(Errc::kEmptyCorpus, "no training mixtures");
  TrainState state = start_training(cfg, seed);
  continue_training(state, make_examples(train_set), make_examples(val_set), cfg.epochs, on_epoch);
  return state;
}

void write_log_csv(std::ostream& os, const std::vector<EpochLog>& log) {
  os << "epoch,train_sce,train_mi,val_sce,val_mi\n";
  char buf[256];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g,%.10g\n", e.epoch, e.train_sce,
                  e.train_mi, e.val_sce, e.val_mi);
    os << buf;
  }
}

}  // namespace scesep::model
