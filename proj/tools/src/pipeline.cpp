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

#include "scesep/cli/pipeline.hpp"

#include <future>
#include <set>
#include <string>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"
#include "scesep/dsp/feature.hpp"
#include "scesep/infer/reconstruct.hpp"
#include "scesep/mix/synth.hpp"

namespace scesep::cli {
namespace {

snmf::Matrix compressed(const dsp::ComplexSpectrogram& spec) {
  const dsp::MagnitudeFeature f = dsp::compress(spec);
  return snmf::to_matrix(f.mag, f.frames, f.bins);
}

void check_inertia(const infer::ClusterAssignment& a, InvariantReport& rep) {
  for (std::size_t i = 1; i < a.inertia_history.size(); ++i) {
    const double prev = a.inertia_history[i - 1];
    if (a.inertia_history[i] > prev + 1e-9 * std::max(1.0, prev)) rep.inertia_monotone = false;
  }
}

}  // namespace

std::string_view algo_name(Algo a) noexcept {
  switch (a) {
    case Algo::kSceMi: return "sce-mi";
    case Algo::kSnmf: return "snmf";
    case Algo::kOracleBinary: return "oracle-binary";
    case Algo::kIdentity: return "identity";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  for (Algo a : {Algo::kSceMi, Algo::kSnmf, Algo::kOracleBinary, Algo::kIdentity}) {
    if (name == algo_name(a)) return a;
  }
  throw Error(Errc::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

std::map<int, snmf::Dictionary> fit_class_dictionaries(const std::vector<mix::MixRecord>& train,
                                                       const snmf::SnmfConfig& cfg,
                                                       std::uint64_t seed) {
  std::map<int, std::vector<snmf::Matrix>> data;
  for (const auto& rec : train) {
    data[mix::kSpeechClass].push_back(compressed(rec.source_specs.at(0)));
    data[rec.noise_class].push_back(compressed(rec.source_specs.at(1)));
  }
  if (data.empty()) throw Error(Errc::kEmptyCorpus, "no training records for snmf");
  std::map<int, std::future<snmf::Dictionary>> jobs;
  for (const auto& [cls, mags] : data) {
    jobs[cls] = std::async(std::launch::async, [&mags = mags, cls = cls, &cfg, seed] {
      return snmf::fit_dictionary(mags, cls, cfg, seed);
    });
  }
  std::map<int, snmf::Dictionary> out;
  for (auto& [cls, job] : jobs) out[cls] = job.get();
  return out;
}

SnmfPair merge_dictionaries(const std::map<int, snmf::Dictionary>& by_class) {
  const auto sp = by_class.find(mix::kSpeechClass);
  if (sp == by_class.end()) throw Error(Errc::kInvalidArgument, "no speech dictionary");
  std::vector<snmf::Dictionary> noise;
  for (const auto& [cls, d] : by_class) {
    if (cls != mix::kSpeechClass) noise.push_back(d);
  }
  if (noise.empty()) throw Error(Errc::kInvalidArgument, "no noise dictionaries");
  return SnmfPair{sp->second, snmf::concat(noise, 1)};
}

std::filesystem::path dictionary_path(const std::filesystem::path& dir, int class_id) {
  return dir / ("snmf_class" + std::to_string(class_id) + ".snmf");
}

std::map<int, snmf::Dictionary> load_dictionaries(const std::filesystem::path& dir) {
  std::map<int, snmf::Dictionary> out;
  for (int cls = 0; cls <= static_cast<int>(mix::kAllNoiseKinds.size()); ++cls) {
    const auto p = dictionary_path(dir, cls);
    if (std::filesystem::exists(p)) out[cls] = snmf::load_dictionary(p);
  }
  if (out.empty()) throw Error(Errc::kIo, "no snmf dictionaries in " + dir.string());
  return out;
}

bool InvariantReport::ok() const {
  return stem_sum_error <= kStemSumTolerance && binary_partition_error == 0.0 &&
         inertia_monotone;
}

RecordEval evaluate_record(const mix::MixRecord& rec, Algo algo, infer::Mode mode,
                           const EvalContext& ctx) {
  const dsp::StftConfig& stft_cfg = ctx.stft;
  const dsp::Waveform round_trip = dsp::istft(rec.mixture_spec, stft_cfg);
  RecordEval out;
  std::vector<dsp::Waveform> estimates;

  switch (algo) {
    case Algo::kIdentity:
      estimates.assign(rec.num_sources(), rec.mixture);
      break;
    case Algo::kOracleBinary: {
      out.invariants.binary_partition_error = infer::binary_partition_error(rec.labels);
      estimates = infer::reconstruct_binary(rec.mixture_spec, rec.labels, stft_cfg);
      break;
    }
    case Algo::kSnmf: {
      if (ctx.snmf == nullptr) throw Error(Errc::kInvalidArgument, "snmf needs dictionaries");
      const snmf::Separation sep =
          snmf::separate(compressed(rec.mixture_spec), ctx.snmf->speech, ctx.snmf->noise,
                         ctx.snmf_cfg);
      estimates = infer::reconstruct_ratio(rec.mixture_spec, sep.mask, stft_cfg);
      out.invariants.stem_sum_error = infer::stem_sum_error(estimates, round_trip);
      break;
    }
    case Algo::kSceMi: {
      if (ctx.model == nullptr) throw Error(Errc::kInvalidArgument, "sce-mi needs a checkpoint");
      infer::DenoiseOptions opts;
      opts.mode = mode;
      opts.k = rec.num_sources();
      opts.seed = stream_seed(ctx.seed, "eval/kmeans/" + rec.clip_id);
      opts.kmeans = ctx.kmeans;
      opts.stft = stft_cfg;
      infer::DenoiseResult r = infer::denoise(ctx.model->inference(), rec.mixture, opts);
      if (r.binary_masks) {
        out.invariants.binary_partition_error = infer::binary_partition_error(*r.binary_masks);
      }
      if (r.clusters) check_inertia(*r.clusters, out.invariants);
      if (r.ratio_mask) out.invariants.stem_sum_error = infer::stem_sum_error(r.stems, round_trip);
      estimates = std::move(r.stems);
      break;
    }
  }
  out.result = metrics::best_permutation(rec.sources, estimates, &rec.mixture);
  out.result.clip_id = rec.clip_id;
  out.result.snr_db = rec.snr_db;
  out.result.noise_kind =
      std::string(mix::noise_kind_name(mix::noise_kind_from_class(rec.noise_class)));
  return out;
}

}  // namespace scesep::cli
