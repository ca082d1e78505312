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
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "scesep/mix/mixture.hpp"
#include "scesep/model/model.hpp"

namespace scesep::model {

/// Network-ready view of one MixRecord: the compressed mixture magnitude,
/// labels, source magnitudes in the mixture's normalized scale and source
/// table ids.
struct TrainingExample {
  Tensor x;            // [T, F]
  Tensor labels;       // [T, F, M], +-1
  Tensor source_mags;  // [T, F, M]
  std::vector<int> source_ids;
};

TrainingExample make_example(const mix::MixRecord& rec);
std::vector<TrainingExample> make_examples(const std::vector<mix::MixRecord>& recs);

struct Batch {
  Tensor x;            // [B, T, F]
  Tensor labels;       // [B, T, F, M]
  Tensor source_mags;  // [B, T, F, M]
  std::vector<std::vector<int>> source_ids;
};

/// Stacks examples; all must share T, F and M (ShapeMismatch otherwise).
Batch make_batch(std::span<const TrainingExample* const> examples);

struct Losses {
  double sce = 0.0;
  double mi = 0.0;
};

/// Forward pass, both losses and backpropagation of
/// alpha * L_sce + (1 - alpha) * L_mi into every parameter's grad.
/// Gradients accumulate; callers zero them first.
Losses accumulate_gradients(SeparationModel& model, const Batch& batch);

/// Losses only, no gradients.
Losses evaluate(const SeparationModel& model, const Batch& batch);

struct EpochLog {
  std::size_t epoch = 0;
  double train_sce = 0.0;
  double train_mi = 0.0;
  double val_sce = 0.0;
  double val_mi = 0.0;
};

/// Everything needed to continue training bit-identically.
struct TrainState {
  SeparationModel model;
  SeparationModel best;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t epochs_done = 0;
  std::uint64_t seed = 0;
  std::vector<Tensor> adam_m;
  std::vector<Tensor> adam_v;
  std::uint64_t adam_steps = 0;
  std::vector<EpochLog> log;

  explicit TrainState(const ModelConfig& cfg) : model(cfg), best(cfg) {}
};

TrainState start_training(const ModelConfig& cfg, std::uint64_t seed);

using EpochCallback = std::function<void(const EpochLog&)>;

/// Runs epochs until state.epochs_done == until_epoch. Each epoch is one
/// pass over `train` in an order shuffled from (seed, epoch); the best model
/// by validation objective is kept in state.best. Throws EmptyCorpus.
void continue_training(TrainState& state, const std::vector<TrainingExample>& train,
                       const std::vector<TrainingExample>& val, std::size_t until_epoch,
                       const EpochCallback& on_epoch = {});

/// start_training + continue_training to cfg.epochs.
TrainState train(const std::vector<mix::MixRecord>& train_set,
                 const std::vector<mix::MixRecord>& val_set, const ModelConfig& cfg,
                 std::uint64_t seed, const EpochCallback& on_epoch = {});

/// CSV with header epoch,train_sce,train_mi,val_sce,val_mi.
void write_log_csv(std::ostream& os, const std::vector<EpochLog>& log);

}  // namespace scesep::model
