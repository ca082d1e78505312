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

#include "scesep/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "scesep/cli/pipeline.hpp"
#include "scesep/common/error.hpp"
#include "scesep/dsp/waveform.hpp"
#include "scesep/io/wav.hpp"
#include "scesep/metrics/report.hpp"
#include "scesep/mix/manifest.hpp"
#include "scesep/model/checkpoint.hpp"
#include "scesep/model/gradcheck.hpp"
#include "scesep/model/trainer.hpp"

namespace scesep::cli {
namespace fs = std::filesystem;
namespace {

fs::path out_dir(const RunConfig& rc) {
  fs::path dir = rc.str("out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

const std::string& required(const RunConfig& rc, const std::string& key) {
  if (!rc.has(key)) throw Error(Errc::kInvalidArgument, "missing required setting '" + key + "'");
  return rc.str(key);
}

std::string fixed(double x, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::vector<mix::ManifestEntry> entries_of(const std::vector<mix::ManifestEntry>& all,
                                           mix::Split split) {
  std::vector<mix::ManifestEntry> out;
  for (const auto& e : all) {
    if (e.split == split) out.push_back(e);
  }
  return out;
}

std::vector<mix::MixRecord> realize_split(const std::vector<mix::ManifestEntry>& all,
                                          mix::Split split, const mix::CorpusConfig& cfg) {
  std::vector<mix::MixRecord> out;
  for (const auto& e : entries_of(all, split)) out.push_back(mix::realize(e, cfg));
  return out;
}

}  // namespace

int cmd_mix(const RunConfig& rc, Streams io) {
  const mix::CorpusConfig cfg = corpus_config(rc);
  const fs::path dir = out_dir(rc);
  const auto entries = mix::plan_corpus(rc.count("n_train"), rc.count("n_val"),
                                        rc.count("n_test"), rc.u64("seed"), cfg);
  mix::write_manifest(dir / "manifest.tsv", entries);
  if (rc.boolean("materialize")) {
    fs::create_directories(dir / "audio");
    for (const auto& e : entries) {
      const mix::MixRecord rec = mix::realize(e, cfg);
      io::write_wav(dir / "audio" / (rec.clip_id + "_mix.wav"), rec.mixture);
      for (std::size_t m = 0; m < rec.num_sources(); ++m) {
        io::write_wav(dir / "audio" / (rec.clip_id + "_s" + std::to_string(m) + ".wav"),
                      rec.sources[m]);
      }
    }
  }
  for (mix::Split s : {mix::Split::kTrain, mix::Split::kVal, mix::Split::kTest}) {
    io.out << mix::split_name(s) << ": " << entries_of(entries, s).size() << " mixtures\n";
  }
  io.out << "manifest: " << (dir / "manifest.tsv").string() << '\n';
  return kExitOk;
}

int cmd_train(const RunConfig& rc, Streams io) {
  const mix::CorpusConfig ccfg = corpus_config(rc);
  const fs::path dir = out_dir(rc);
  const auto entries = mix::read_manifest(fs::path(required(rc, "manifest")));
  const auto train_set = realize_split(entries, mix::Split::kTrain, ccfg);
  if (train_set.empty()) throw Error(Errc::kEmptyCorpus, "manifest has no train split");
  const std::uint64_t seed = rc.u64("seed");

  if (parse_algo(rc.str("algo")) == Algo::kSnmf) {
    const snmf::SnmfConfig scfg = snmf_config(rc);
    const auto dicts = fit_class_dictionaries(train_set, scfg, seed);
    for (const auto& [cls, d] : dicts) {
      const fs::path p = dictionary_path(dir, cls);
      snmf::save_dictionary(p, d, scfg);
      io.out << "class " << cls << ": " << d.rank() << " atoms -> " << p.string() << '\n';
    }
    return kExitOk;
  }
  if (parse_algo(rc.str("algo")) != Algo::kSceMi) {
    throw Error(Errc::kInvalidArgument, "train supports --algo sce-mi or snmf");
  }

  const model::ModelConfig mcfg = model_config(rc);
  const auto val_set = realize_split(entries, mix::Split::kVal, ccfg);
  const auto train_ex = model::make_examples(train_set);
  const auto val_ex = model::make_examples(val_set);
  const fs::path state_path = dir / "train_state.scem";

  model::TrainState state = rc.has("resume") ? model::load_train_state(rc.str("resume"))
                                             : model::start_training(mcfg, seed);
  if (rc.has("resume")) {
    // Epoch count is the only setting allowed to differ on resume.
    model::ModelConfig have = state.model.config(), want = mcfg;
    have.epochs = want.epochs = 0;
    if (have.to_metadata() != want.to_metadata()) {
      throw Error(Errc::kInvalidArgument, "resume state was trained with a different config");
    }
    state.model.set_epochs(mcfg.epochs);
    state.best.set_epochs(mcfg.epochs);
    io.out << "resuming at epoch " << state.epochs_done << '\n';
  }
  io.out << "train: " << train_ex.size() << " mixtures, val: " << val_ex.size() << '\n';
  // console shows SCE per T-F bin; the CSV keeps the summed value
  const double bins_per_clip =
      train_ex.empty() ? 1.0 : static_cast<double>(train_ex.front().x.size());
  model::continue_training(state, train_ex, val_ex, mcfg.epochs, [&](const model::EpochLog& e) {
    io.out << "epoch " << e.epoch << "  train sce/bin " << fixed(e.train_sce / bins_per_clip, 6)
           << " mi " << fixed(e.train_mi, 6) << "  val sce/bin "
           << fixed(e.val_sce / bins_per_clip, 6) << " mi "
           << fixed(e.val_mi, 6) << '\n';
    io.out.flush();
    model::save_train_state(state_path, state);
  });
  model::save_train_state(state_path, state);
  model::save_model(dir / "model.scem", state.best,
                    {{"seed", std::to_string(seed)},
                     {"epochs_done", std::to_string(state.epochs_done)}});
  std::ofstream log(dir / "train_log.csv", std::ios::binary);
  model::write_log_csv(log, state.log);
  if (!log) throw Error(Errc::kIo, "cannot write training log");
  io.out << "checkpoint: " << (dir / "model.scem").string() << '\n';
  return kExitOk;
}

int cmd_denoise(const RunConfig& rc, Streams io) {
  const model::SeparationModel net = model::load_model(required(rc, "checkpoint"));
  const fs::path input = required(rc, "input");
  dsp::Waveform wav = io::read_wav(input);
  const dsp::StftConfig stft = stft_config(rc);
  if (wav.sample_rate_hz != stft.sample_rate_hz) {
    io.err << "warning: resampling " << wav.sample_rate_hz << " Hz input to "
           << stft.sample_rate_hz << " Hz\n";
    wav = dsp::resample(wav, stft.sample_rate_hz);
  }
  infer::DenoiseOptions opts;
  opts.mode = infer::parse_mode(rc.str("mode"));
  opts.k = rc.count("K");
  opts.seed = rc.u64("seed");
  opts.kmeans = kmeans_options(rc);
  opts.stft = stft;
  const infer::DenoiseResult r = infer::denoise(net.inference(), wav, opts);

  const fs::path dir = out_dir(rc);
  for (std::size_t k = 0; k < r.stems.size(); ++k) {
    const fs::path p = dir / (input.stem().string() + ".src" + std::to_string(k) + ".wav");
    io::write_wav(p, r.stems[k]);
    io.out << "stem " << k << "  rms " << fixed(std::sqrt(dsp::power(r.stems[k].samples)), 6) << "  "
           << p.string() << '\n';
  }
  io.out << "low-energy bins: " << r.low_energy_bins << '\n';
  if (r.ratio_mask) {
    const double err = infer::stem_sum_error(r.stems, dsp::istft(r.mixture_spec, stft));
    io.out << "stem sum error: " << err << '\n';
    if (err > kStemSumTolerance) return kExitVerification;
  }
  return kExitOk;
}

int cmd_eval(const RunConfig& rc, Streams io) {
  const mix::CorpusConfig ccfg = corpus_config(rc);
  const auto entries = mix::read_manifest(fs::path(required(rc, "manifest")));
  const auto test_set = realize_split(entries, mix::Split::kTest, ccfg);
  if (test_set.empty()) throw Error(Errc::kEmptyCorpus, "manifest has no test split");

  std::vector<Algo> algos;
  for (const auto& a : rc.list("algo")) algos.push_back(parse_algo(a));
  std::vector<infer::Mode> modes;
  for (const auto& m : rc.list("mode")) modes.push_back(infer::parse_mode(m));
  if (modes.empty()) modes.push_back(infer::Mode::kMaskInference);
  if (rc.count("K") != 2) {
    throw Error(Errc::kInvalidArgument, "eval scores two-source mixtures; --K must be 2");
  }

  EvalContext ctx;
  ctx.kmeans = kmeans_options(rc);
  ctx.stft = stft_config(rc);
  ctx.seed = rc.u64("seed");
  ctx.snmf_cfg = snmf_config(rc);
  std::optional<model::SeparationModel> net;
  std::optional<SnmfPair> dicts;
  for (Algo a : algos) {
    if (a == Algo::kSceMi && !net) {
      net.emplace(model::load_model(required(rc, "checkpoint")));
      ctx.model = &*net;
    }
    if (a == Algo::kSnmf && !dicts) {
      dicts.emplace(merge_dictionaries(load_dictionaries(required(rc, "snmf_dir"))));
      ctx.snmf = &*dicts;
    }
  }

  std::vector<metrics::MetricsRow> rows;
  InvariantReport worst;
  std::size_t violations = 0;
  for (Algo a : algos) {
    const std::vector<infer::Mode> algo_modes =
        a == Algo::kSceMi ? modes : std::vector<infer::Mode>{infer::Mode::kMaskInference};
    for (infer::Mode mode : algo_modes) {
      const std::string mode_tag = a == Algo::kSceMi ? std::string(infer::mode_name(mode)) : "-";
      std::vector<metrics::EvalResult> results;
      for (const auto& rec : test_set) {
        const RecordEval ev = evaluate_record(rec, a, mode, ctx);
        if (!ev.invariants.ok()) ++violations;
        worst.stem_sum_error = std::max(worst.stem_sum_error, ev.invariants.stem_sum_error);
        worst.binary_partition_error =
            std::max(worst.binary_partition_error, ev.invariants.binary_partition_error);
        worst.inertia_monotone = worst.inertia_monotone && ev.invariants.inertia_monotone;
        for (auto& row : metrics::metrics_rows(ev.result, std::string(algo_name(a)), mode_tag)) {
          rows.push_back(std::move(row));
        }
        results.push_back(ev.result);
      }
      io.out << "== " << algo_name(a) << " / " << mode_tag << '\n';
      for (metrics::GroupBy by : {metrics::GroupBy::kSnr, metrics::GroupBy::kNoiseKind}) {
        io.out << "-- by " << (by == metrics::GroupBy::kSnr ? "snr" : "noise_kind") << '\n';
        metrics::write_report_csv(io.out, metrics::report(results, by));
      }
      double mean = 0.0;
      for (const auto& r : results) mean += r.mean_improvement();
      io.out << "mean improvement: " << fixed(mean / static_cast<double>(results.size())) << " dB\n";
    }
  }

  const fs::path dir = out_dir(rc);
  std::ofstream csv(dir / "metrics.csv", std::ios::binary);
  metrics::write_metrics_csv(csv, rows);
  if (!csv) throw Error(Errc::kIo, "cannot write metrics.csv");
  io.out << "metrics: " << (dir / "metrics.csv").string() << '\n';
  io.out << "invariants: stem sum " << worst.stem_sum_error << ", binary partition "
         << worst.binary_partition_error << ", inertia "
         << (worst.inertia_monotone ? "monotone" : "NOT monotone") << '\n';
  if (violations > 0) {
    io.err << violations << " evaluation(s) violated partition invariants\n";
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_gradcheck(const RunConfig& rc, const std::string& corrupt, Streams io) {
  model::GradcheckOptions opts;
  opts.corrupt = corrupt;
  const model::GradcheckReport rep = model::run_gradcheck(rc.u64("seed"), opts);
  for (const auto& e : rep.entries) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s max_rel_err %.3e  tol %.0e  n=%zu  %s\n",
                  e.name.c_str(), e.max_rel_error, e.tolerance, e.checked,
                  e.passed ? "ok" : "FAIL");
    io.out << buf;
  }
  io.out << (rep.passed() ? "gradcheck passed\n" : "gradcheck FAILED\n");
  return rep.passed() ? kExitOk : kExitVerification;
}

}  // namespace scesep::cli
