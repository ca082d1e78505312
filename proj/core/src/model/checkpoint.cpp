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

#include "scesep/model/checkpoint.hpp"

#include <cstdio>

#include "scesep/common/error.hpp"

namespace scesep::model {

namespace {

io::NamedTensor named(const std::string& name, const Tensor& t) {
  io::NamedTensor nt;
  nt.name = name;
  for (auto d : t.shape()) nt.dims.push_back(d);
  nt.data = t.storage();
  return nt;
}

void load_into(const io::NamedTensor& src, Tensor& dst) {
  nn::Shape shape(src.dims.begin(), src.dims.end());
  if (shape != dst.shape()) {
    throw Error(Errc::kFormat, "tensor '" + src.name + "' has shape " + nn::shape_string(shape) +
                                   ", expected " + nn::shape_string(dst.shape()));
  }
  dst.storage() = src.data;
}

void append_params(io::Container& c, const SeparationModel& m, const std::string& prefix) {
  for (const auto* p : m.parameters()) c.tensors.push_back(named(prefix + p->name, p->value));
}

void read_params(const io::Container& c, SeparationModel& m, const std::string& prefix) {
  for (auto* p : m.parameters()) load_into(c.tensor(prefix + p->name), p->value);
  m.zero_grad();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

io::Container to_container(const SeparationModel& model,
                           const std::map<std::string, std::string>& extra) {
  io::Container c;
  c.magic = io::kModelMagic;
  c.version = kCheckpointVersion;
  c.metadata = model.config().to_metadata();
  for (const auto& [k, v] : extra) c.metadata[k] = v;
  append_params(c, model, "");
  return c;
}

SeparationModel from_container(const io::Container& c) {
  SeparationModel m(ModelConfig::from_metadata(c.metadata));
  read_params(c, m, "");
  return m;
}

void save_model(const std::filesystem::path& path, const SeparationModel& model,
                const std::map<std::string, std::string>& extra) {
  io::write_container(path, to_container(model, extra));
}

SeparationModel load_model(const std::filesystem::path& path) {
  return from_container(io::read_container(path, io::kModelMagic, kCheckpointVersion));
}

void save_train_state(const std::filesystem::path& path, const TrainState& state) {
  io::Container c = to_container(state.model);
  c.metadata["kind"] = "train-state";
  c.metadata["epochs_done"] = std::to_string(state.epochs_done);
  c.metadata["seed"] = std::to_string(state.seed);
  c.metadata["adam_steps"] = std::to_string(state.adam_steps);
  c.metadata["best_val"] = fmt(state.best_val);
  append_params(c, state.best, "best/");
  const auto params = state.model.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    c.tensors.push_back(named("adam_m/" + params[i]->name, state.adam_m[i]));
    c.tensors.push_back(named("adam_v/" + params[i]->name, state.adam_v[i]));
  }
  Tensor log({state.log.size(), 5});
  for (std::size_t e = 0; e < state.log.size(); ++e) {
    const auto& l = state.log[e];
    log[e * 5 + 0] = static_cast<double>(l.epoch);
    log[e * 5 + 1] = l.train_sce;
    log[e * 5 + 2] = l.train_mi;
    log[e * 5 + 3] = l.val_sce;
    log[e * 5 + 4] = l.val_mi;
  }
  c.tensors.push_back(named("log", log));
  io::write_container(path, c);
}

TrainState load_train_state(const std::filesystem::path& path) {
  const io::Container c = io::read_container(path, io::kModelMagic, kCheckpointVersion);
  auto it = c.metadata.find("kind");
  if (it == c.metadata.end() || it->second != "train-state") {
    throw Error(Errc::kFormat, path.string() + " is a model checkpoint, not a training state");
  }
  TrainState state(ModelConfig::from_metadata(c.metadata));
  read_params(c, state.model, "");
  read_params(c, state.best, "best/");
  state.epochs_done = std::stoull(c.meta("epochs_done"));
  state.seed = std::stoull(c.meta("seed"));
  state.adam_steps = std::stoull(c.meta("adam_steps"));
  state.best_val = std::stod(c.meta("best_val"));
  for (const auto* p : state.model.parameters()) {
    state.adam_m.emplace_back(p->value.shape());
    state.adam_v.emplace_back(p->value.shape());
    load_into(c.tensor("adam_m/" + p->name), state.adam_m.back());
    load_into(c.tensor("adam_v/" + p->name), state.adam_v.back());
  }
  const auto& log = c.tensor("log");
  if (log.dims.size() != 2 || log.dims[1] != 5) throw Error(Errc::kFormat, "bad training log");
  for (std::size_t e = 0; e < log.dims[0]; ++e) {
    EpochLog l;
    l.epoch = static_cast<std::size_t>(log.data[e * 5]);
    l.train_sce = log.data[e * 5 + 1];
    l.train_mi = log.data[e * 5 + 2];
    l.val_sce = log.data[e * 5 + 3];
    l.val_mi = log.data[e * 5 + 4];
    state.log.push_back(l);
  }
  return state;
}

}  // namespace scesep::model
