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

#include <benchmark/benchmark.h>

#include <random>

#include "scesep/dsp/stft.hpp"
#include "scesep/infer/kmeans.hpp"
#include "scesep/mix/manifest.hpp"
#include "scesep/model/trainer.hpp"
#include "scesep/snmf/snmf.hpp"

namespace {

using namespace scesep;

dsp::Waveform noise_clip(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  dsp::Waveform w;
  w.sample_rate_hz = 10000;
  w.samples.resize(n);
  for (double& x : w.samples) x = g(rng);
  return w;
}

void BM_Stft(benchmark::State& state) {
  const dsp::Waveform w = noise_clip(20000);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::stft(w));
}
BENCHMARK(BM_Stft)->Unit(benchmark::kMicrosecond);

void BM_StftRoundTrip(benchmark::State& state) {
  const dsp::Waveform w = noise_clip(20000);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::istft(dsp::stft(w)));
}
BENCHMARK(BM_StftRoundTrip)->Unit(benchmark::kMicrosecond);

void BM_BlstmForward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  nn::BlstmParams p("bench", 257, hidden);
  Rng rng(3);
  p.fwd.initialize(rng);
  p.bwd.initialize(rng);
  nn::Tensor x({8, 78, 257});
  std::normal_distribution<double> g;
  for (double& v : x.values()) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(nn::blstm_forward(x, p));
}
BENCHMARK(BM_BlstmForward)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  mix::CorpusConfig cc;
  const mix::Corpus corpus = mix::build_corpus(8, 1, 1, 11, cc);
  const auto examples = model::make_examples(corpus.train);
  std::vector<const model::TrainingExample*> ptrs;
  for (const auto& e : examples) ptrs.push_back(&e);
  const model::Batch batch = model::make_batch(ptrs);
  model::ModelConfig cfg;
  cfg.num_source_ids = static_cast<std::size_t>(cc.num_source_ids());
  model::SeparationModel m(cfg);
  m.initialize(5);
  for (auto _ : state) {
    m.zero_grad();
    benchmark::DoNotOptimize(model::accumulate_gradients(m, batch));
  }
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  const std::size_t n = 78 * 257, dim = 8;
  std::vector<double> pts(n * dim);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (std::size_t i = 0; i < n; ++i) {
    const double shift = (i % 2 == 0) ? 2.0 : -2.0;
    for (std::size_t e = 0; e < dim; ++e) pts[i * dim + e] = g(rng) + shift;
  }
  for (auto _ : state) benchmark::DoNotOptimize(infer::kmeans(pts, dim, 2, 1));
}
BENCHMARK(BM_KMeans)->Unit(benchmark::kMillisecond);

void BM_SnmfFactorize(benchmark::State& state) {
  const auto rank = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  snmf::Matrix v(257, 200), w(257, rank), h(rank, 200);
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
  h.setOnes();
  snmf::SnmfConfig cfg;
  cfg.rank = static_cast<std::size_t>(rank);
  cfg.max_iters = 50;
  cfg.tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(snmf::factorize(v, w, h, cfg, true));
}
BENCHMARK(BM_SnmfFactorize)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
