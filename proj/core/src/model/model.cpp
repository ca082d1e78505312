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

#include "scesep/model/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"
#include "scesep/model/losses.hpp"

namespace scesep::model {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::size_t get_size(const std::map<std::string, std::string>& m, const std::string& k,
                     std::size_t fallback) {
  auto it = m.find(k);
  if (it == m.end()) return fallback;
  try {
    return static_cast<std::size_t>(std::stoull(it->second));
  } catch (const std::logic_error&) {
    throw Error(Errc::kFormat, "bad value for " + k + ": '" + it->second + "'");
  }
}

double get_double(const std::map<std::string, std::string>& m, const std::string& k,
                  double fallback) {
  auto it = m.find(k);
  if (it == m.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::logic_error&) {
    throw Error(Errc::kFormat, "bad value for " + k + ": '" + it->second + "'");
  }
}

}  // namespace

void ModelConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(Errc::kInvalidArgument, why); };
  if (n_blstm_layers < 1) fail("n_blstm_layers must be >= 1");
  if (hidden_total < 2 || hidden_total % 2 != 0) fail("hidden_total must be even and >= 2");
  if (embed_dim < 1) fail("embed_dim must be >= 1");
  if (num_bins < 1) fail("num_bins must be >= 1");
  if (num_sources < 2) fail("num_sources must be >= 2 for the mask-inference head");
  if (num_source_ids < num_sources) fail("num_source_ids must be >= num_sources");
  if (batch < 1) fail("batch must be >= 1");
  if (!(mi_weight >= 0.0 && mi_weight <= 1.0)) fail("mi_weight must be in [0, 1]");
  if (!(lr > 0.0)) fail("lr must be positive");
  if (!(clip_norm > 0.0)) fail("clip_norm must be positive");
}

std::map<std::string, std::string> ModelConfig::to_metadata() const {
  return {
      {"n_blstm_layers", std::to_string(n_blstm_layers)},
      {"hidden_total", std::to_string(hidden_total)},
      {"embed_dim", std::to_string(embed_dim)},
      {"num_bins", std::to_string(num_bins)},
      {"num_sources", std::to_string(num_sources)},
      {"num_source_ids", std::to_string(num_source_ids)},
      {"batch", std::to_string(batch)},
      {"mi_weight", fmt(mi_weight)},
      {"epochs", std::to_string(epochs)},
      {"lr", fmt(lr)},
      {"clip_norm", fmt(clip_norm)},
  };
}

ModelConfig ModelConfig::from_metadata(const std::map<std::string, std::string>& meta) {
  ModelConfig c;
  c.n_blstm_layers = get_size(meta, "n_blstm_layers", c.n_blstm_layers);
  c.hidden_total = get_size(meta, "hidden_total", c.hidden_total);
  c.embed_dim = get_size(meta, "embed_dim", c.embed_dim);
  c.num_bins = get_size(meta, "num_bins", c.num_bins);
  c.num_sources = get_size(meta, "num_sources", c.num_sources);
  c.num_source_ids = get_size(meta, "num_source_ids", c.num_source_ids);
  c.batch = get_size(meta, "batch", c.batch);
  c.mi_weight = get_double(meta, "mi_weight", c.mi_weight);
  c.epochs = get_size(meta, "epochs", c.epochs);
  c.lr = get_double(meta, "lr", c.lr);
  c.clip_norm = get_double(meta, "clip_norm", c.clip_norm);
  c.validate();
  return c;
}

SeparationModel::SeparationModel(ModelConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  std::size_t in = cfg_.num_bins;
  for (std::size_t l = 0; l < cfg_.n_blstm_layers; ++l) {
    blstm.emplace_back("blstm" + std::to_string(l), in, cfg_.hidden_per_direction());
    in = cfg_.hidden_total;
  }
  embed = nn::AffineParams("embed", cfg_.hidden_total, cfg_.num_bins * cfg_.embed_dim);
  mi_weight = nn::Parameter("mi.weight", {cfg_.num_sources, cfg_.embed_dim});
  mi_bias = nn::Parameter("mi.bias", {cfg_.num_sources});
  source_table = nn::Parameter("source_table", {cfg_.num_source_ids, cfg_.embed_dim});
}

void SeparationModel::initialize(std::uint64_t seed) {
  for (std::size_t l = 0; l < blstm.size(); ++l) {
    Rng rf = make_rng(seed, "init/" + blstm[l].fwd.weight.name);
    blstm[l].fwd.initialize(rf);
    Rng rb = make_rng(seed, "init/" + blstm[l].bwd.weight.name);
    blstm[l].bwd.initialize(rb);
  }
  Rng re = make_rng(seed, "init/embed");
  embed.initialize(re);
  mi_weight.value.zero();
  mi_bias.value.zero();
  Rng rt = make_rng(seed, "init/source_table");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t E = cfg_.embed_dim;
  for (std::size_t c = 0; c < cfg_.num_source_ids; ++c) {
    double norm = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
      const double v = gauss(rt);
      source_table.value[c * E + e] = v;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (std::size_t e = 0; e < E; ++e) source_table.value[c * E + e] /= norm;
  }
  zero_grad();
}

std::vector<nn::Parameter*> SeparationModel::parameters() {
  std::vector<nn::Parameter*> out;
  for (auto& layer : blstm) {
    for (auto* p : layer.parameters()) out.push_back(p);
  }
  out.push_back(&embed.weight);
  out.push_back(&embed.bias);
  out.push_back(&mi_weight);
  out.push_back(&mi_bias);
  out.push_back(&source_table);
  return out;
}

std::vector<const nn::Parameter*> SeparationModel::parameters() const {
  std::vector<const nn::Parameter*> out;
  for (auto* p : const_cast<SeparationModel*>(this)->parameters()) out.push_back(p);
  return out;
}

void SeparationModel::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

Tensor SeparationModel::forward_embeddings(const Tensor& x, ForwardRecord* record) const {
  nn::expect_rank(x, 3, "forward_embeddings input");
  if (x.dim(2) != cfg_.num_bins) {
    throw Error(Errc::kShapeMismatch, "input has " + std::to_string(x.dim(2)) +
                                          " bins, model expects " + std::to_string(cfg_.num_bins));
  }
  if (record) {
    record->blstm.assign(blstm.size(), nn::BlstmCache{});
    record->recorded = true;
  }
  Tensor h = x;
  for (std::size_t l = 0; l < blstm.size(); ++l) {
    h = nn::blstm_forward(h, blstm[l], record ? &record->blstm[l] : nullptr);
  }
  Tensor y = nn::time_affine(h, embed, record ? &record->embed : nullptr);
  return y.reshaped({x.dim(0), x.dim(1), cfg_.num_bins, cfg_.embed_dim});
}

void SeparationModel::backward_embeddings(const ForwardRecord& record, const Tensor& d_embeddings) {
  if (!record.recorded || !record.embed.recorded) {
    throw Error(Errc::kNoForwardRecorded, "model backward without a recorded forward pass");
  }
  const std::size_t B = d_embeddings.dim(0), T = d_embeddings.dim(1);
  Tensor dh = nn::time_affine_backward(
      record.embed, d_embeddings.reshaped({B, T, cfg_.num_bins * cfg_.embed_dim}), embed);
  for (std::size_t l = blstm.size(); l-- > 0;) {
    dh = nn::blstm_backward(record.blstm[l], dh, blstm[l]);
  }
}

std::size_t InferenceNetwork::num_bins() const { return model_->config().num_bins; }
std::size_t InferenceNetwork::embed_dim() const { return model_->config().embed_dim; }
std::size_t InferenceNetwork::num_sources() const { return model_->config().num_sources; }

Tensor InferenceNetwork::embeddings(const Tensor& x) const { return model_->forward_embeddings(x); }

Tensor InferenceNetwork::ratio_mask(const Tensor& v_i) const {
  return mi_head(v_i, model_->mi_weight.value, model_->mi_bias.value);
}

bool identical(const SeparationModel& a, const SeparationModel& b) {
  if (a.config().to_metadata() != b.config().to_metadata()) return false;
  const auto pa = a.parameters();
  const auto pb = b.parameters();
  if (pa.size() != pb.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i]->name != pb[i]->name || !pa[i]->value.same_shape(pb[i]->value)) return false;
    if (std::memcmp(pa[i]->value.data(), pb[i]->value.data(),
                    pa[i]->value.size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace scesep::model
