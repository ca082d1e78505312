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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scesep/cli/commands.hpp"
#include "scesep/cli/pipeline.hpp"
#include "scesep/common/error.hpp"
#include "scesep/dsp/stft.hpp"
#include "scesep/infer/reconstruct.hpp"
#include "scesep/metrics/sdr.hpp"
#include "scesep/mix/manifest.hpp"
#include "scesep/model/gradcheck.hpp"
#include "scesep/model/losses.hpp"
#include "scesep/model/trainer.hpp"
#include "scesep/snmf/snmf.hpp"
#include "sce_oracle.hpp"
#include "test_util.hpp"

namespace {

using namespace scesep;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  ("
            << o.detail << fmt("; %.1f s", seconds_since(t0)) << ")" << std::endl;
}

nn::Tensor random_tensor(nn::Shape s, std::mt19937_64& rng) {
  return testing::random_tensor(std::move(s), rng);
}

// Desk-scale corpus, model and baseline shared by criteria 6, 7 and 8.
struct DeskRun {
  mix::Corpus corpus;
  std::optional<model::SeparationModel> model;
  std::optional<cli::SnmfPair> snmf;
  double train_seconds = 0.0;
  std::size_t epochs = 0;
  std::vector<cli::InvariantReport> invariants;
};

constexpr std::uint64_t kSeed = 2026;
constexpr std::size_t kDeskEpochs = 120;
constexpr std::size_t kDeskBatch = 1;
constexpr double kDeskLr = 3e-3;

mix::CorpusConfig desk_corpus_config() { return mix::CorpusConfig{}; }

model::ModelConfig desk_model_config(const mix::CorpusConfig& cc) {
  model::ModelConfig c;
  c.n_blstm_layers = 2;
  c.hidden_total = 32;
  c.embed_dim = 8;
  c.num_source_ids = static_cast<std::size_t>(cc.num_source_ids());
  c.epochs = kDeskEpochs;
  c.lr = kDeskLr;
  c.batch = kDeskBatch;
  return c;
}

double mean_improvement(const std::vector<metrics::EvalResult>& rs) {
  double s = 0.0;
  for (const auto& r : rs) s += r.mean_improvement();
  return s / static_cast<double>(rs.size());
}

std::vector<metrics::EvalResult> evaluate_all(DeskRun& run, const std::vector<mix::MixRecord>& set,
                                              cli::Algo algo, infer::Mode mode,
                                              const cli::EvalContext& ctx) {
  std::vector<metrics::EvalResult> out;
  for (const auto& rec : set) {
    cli::RecordEval ev = cli::evaluate_record(rec, algo, mode, ctx);
    run.invariants.push_back(ev.invariants);
    out.push_back(std::move(ev.result));
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int quiet_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, {out, err});
  if (code != 0) std::cerr << err.str();
  return code;
}

}  // namespace

int main() {
  std::cout << "scesep acceptance suite" << std::endl;

  report(1, "gradient correctness", [] {
    const auto t0 = Clock::now();
    const model::GradcheckReport r = model::run_gradcheck(kSeed);
    double worst_rec = 0.0, worst_op = 0.0;
    for (const auto& e : r.entries) {
      double& worst = e.tolerance >= 1e-4 ? worst_rec : worst_op;
      worst = std::max(worst, e.max_rel_error);
    }
    const double secs = seconds_since(t0);
    return Outcome{r.passed() && secs < 60.0 && !r.entries.empty(),
                   fmt("%zu checks, max rel err recurrent %.2e < 1e-4, non-recurrent %.2e < 1e-6",
                       r.entries.size(), worst_rec, worst_op)};
  });

  report(2, "loss oracle equivalence", [] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(kSeed);
    std::uniform_int_distribution<std::size_t> dim(1, 6), mdim(2, 6);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t B = dim(rng), T = dim(rng), F = dim(rng), M = mdim(rng), E = dim(rng);
      const nn::Tensor vi = random_tensor({B, T, F, E}, rng);
      const nn::Tensor vo = random_tensor({B, M, E}, rng);
      nn::Tensor y({B, T, F, M}, -1.0);
      for (std::size_t i = 0; i < B * T * F; ++i) y[i * M + rng() % M] = 1.0;
      const model::SceLoss l = model::sce_loss(vi, vo, y);
      const auto o = testing::scalar_sce(vi, vo, y);
      worst = std::max(worst, std::abs(l.value - o.loss));
      for (std::size_t i = 0; i < o.grad_vi.size(); ++i) {
        worst = std::max(worst, std::abs(l.grad_embeddings[i] - o.grad_vi[i]));
      }
      for (std::size_t i = 0; i < o.grad_vo.size(); ++i) {
        worst = std::max(worst, std::abs(l.grad_sources[i] - o.grad_vo[i]));
      }
    }
    const double secs = seconds_since(t0);
    return Outcome{worst <= 1e-12 && secs < 10.0,
                   fmt("50 shapes, max |tensor - scalar| %.2e <= 1e-12", worst)};
  });

  report(3, "analytic loss anchor", [] {
    const mix::CorpusConfig cc = desk_corpus_config();
    const auto rec = mix::build_corpus(1, 0, 0, kSeed, cc).train;
    const auto ex = model::make_examples(rec);
    std::vector<const model::TrainingExample*> ptrs{&ex[0]};
    const model::SeparationModel zero(desk_model_config(cc));  // all parameters zero
    const model::Batch batch = model::make_batch(ptrs);
    const double per_bin = model::evaluate(zero, batch).sce /
                           static_cast<double>(batch.x.dim(1) * batch.x.dim(2));
    const double err = std::abs(per_bin - std::log(2.0));
    return Outcome{err <= 1e-12, fmt("per-bin loss %.15f, |err| %.2e <= 1e-12", per_bin, err)};
  });

  report(4, "STFT fidelity", [] {
    const auto t0 = Clock::now();
    double worst_rt = 0.0, worst_lin = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const dsp::Waveform w = testing::random_waveform(20000, kSeed + i);
      const dsp::Waveform r = dsp::istft(dsp::stft(w));
      worst_rt = std::max(worst_rt, testing::rel_l2(r.samples, w.samples));
    }
    for (std::uint64_t i = 0; i < 10; ++i) {
      const dsp::Waveform a = testing::random_waveform(20000, 1000 + i);
      const dsp::Waveform b = testing::random_waveform(20000, 2000 + i);
      dsp::Waveform c = a;
      for (std::size_t n = 0; n < c.size(); ++n) c.samples[n] = 0.7 * a.samples[n] - 1.3 * b.samples[n];
      const auto sa = dsp::stft(a), sb = dsp::stft(b), sc = dsp::stft(c);
      for (std::size_t k = 0; k < sc.values().size(); ++k) {
        worst_lin = std::max(
            worst_lin, std::abs(sc.values()[k] - (0.7 * sa.values()[k] - 1.3 * sb.values()[k])));
      }
    }
    const double secs = seconds_since(t0);
    return Outcome{worst_rt < 1e-6 && worst_lin < 1e-9 && secs < 30.0,
                   fmt("100 clips, max round-trip rel L2 %.2e < 1e-6, linearity %.2e < 1e-9",
                       worst_rt, worst_lin)};
  });

  report(5, "oracle mask bound", [] {
    const auto t0 = Clock::now();
    mix::CorpusConfig cc = desk_corpus_config();
    cc.disjoint = true;
    cc.snr_lo_db = cc.snr_hi_db = 0.0;
    const auto recs = mix::build_corpus(0, 0, 16, kSeed, cc).test;
    double worst = std::numeric_limits<double>::infinity(), sum = 0.0;
    for (const auto& rec : recs) {
      const auto stems = infer::reconstruct_binary(rec.mixture_spec, rec.labels);
      for (std::size_t m = 0; m < 2; ++m) {
        const double imp = metrics::sdr_improvement(rec.mixture, rec.sources[m], stems[m]);
        worst = std::min(worst, imp);
        sum += imp;
      }
    }
    const double secs = seconds_since(t0);
    return Outcome{worst > 20.0 && secs < 60.0,
                   fmt("16 disjoint mixtures at 0 dB, min improvement %.2f dB > 20 (mean %.2f)",
                       worst, sum / 32.0)};
  });

  DeskRun desk;
  double mi_mean = 0.0, cluster_mean = 0.0, snmf_mean = 0.0;
  report(6, "desk-scale learning trend", [&] {
    const mix::CorpusConfig cc = desk_corpus_config();
    desk.corpus = mix::build_corpus(64, 16, 16, kSeed, cc);
    const model::ModelConfig mc = desk_model_config(cc);
    const auto t0 = Clock::now();
    model::TrainState state = model::train(desk.corpus.train, desk.corpus.val, mc, kSeed);
    desk.train_seconds = seconds_since(t0);
    desk.epochs = state.epochs_done;
    desk.model.emplace(state.best);

    cli::EvalContext ctx;
    ctx.model = &*desk.model;
    ctx.seed = kSeed;
    mi_mean = mean_improvement(evaluate_all(desk, desk.corpus.test, cli::Algo::kSceMi,
                                            infer::Mode::kMaskInference, ctx));
    cluster_mean = mean_improvement(
        evaluate_all(desk, desk.corpus.test, cli::Algo::kSceMi, infer::Mode::kCluster, ctx));
    const bool ok = desk.train_seconds <= 1800.0 && mi_mean >= 5.0 && cluster_mean >= 3.0 &&
                    mi_mean >= cluster_mean;
    return Outcome{ok, fmt("%zu epochs in %.0f s <= 1800; on 16 held-out: MI %.2f dB >= 5, "
                           "cluster %.2f dB >= 3, MI >= cluster",
                           desk.epochs, desk.train_seconds, mi_mean, cluster_mean)};
  });

  report(7, "SNMF baseline sanity", [&] {
    // (a) monotone objective on random problems
    double worst_rise = -std::numeric_limits<double>::infinity();
    for (std::uint64_t p = 0; p < 20; ++p) {
      std::mt19937_64 rng(kSeed + p);
      std::normal_distribution<double> g;
      const Eigen::Index F = 8 + Eigen::Index(p % 9), T = 10 + Eigen::Index(p % 7);
      const Eigen::Index R = 1 + Eigen::Index(p % 5);
      auto absg = [&](Eigen::Index r, Eigen::Index c) {
        snmf::Matrix m(r, c);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::abs(g(rng));
        return m;
      };
      snmf::SnmfConfig cfg;
      cfg.rank = std::size_t(R);
      cfg.mu = 0.1 * double(p % 4);
      cfg.tol = 0.0;
      snmf::Matrix w = absg(F, R);
      for (Eigen::Index r = 0; r < R; ++r) w.col(r) /= w.col(r).norm();
      const auto f = snmf::factorize(absg(F, T), w, absg(R, T), cfg);
      for (std::size_t i = 1; i < f.objective_history.size(); ++i) {
        worst_rise = std::max(worst_rise, f.objective_history[i] - f.objective_history[i - 1]);
      }
    }
    const bool monotone = worst_rise <= 1e-10;

    // (b) disjoint-span mixtures
    mix::CorpusConfig dc = desk_corpus_config();
    dc.disjoint = true;
    const mix::Corpus disjoint = mix::build_corpus(16, 0, 16, kSeed + 1, dc);
    const snmf::SnmfConfig scfg;
    const cli::SnmfPair dpair =
        cli::merge_dictionaries(cli::fit_class_dictionaries(disjoint.train, scfg, kSeed));
    cli::EvalContext dctx;
    dctx.snmf = &dpair;
    const double disjoint_mean = mean_improvement(evaluate_all(
        desk, disjoint.test, cli::Algo::kSnmf, infer::Mode::kMaskInference, dctx));

    // (c) held-out desk set against SCE+MI
    if (!desk.model) throw Error(Errc::kInvalidArgument, "criterion 6 did not produce a model");
    desk.snmf = cli::merge_dictionaries(cli::fit_class_dictionaries(desk.corpus.train, scfg, kSeed));
    cli::EvalContext ctx;
    ctx.snmf = &*desk.snmf;
    snmf_mean = mean_improvement(
        evaluate_all(desk, desk.corpus.test, cli::Algo::kSnmf, infer::Mode::kMaskInference, ctx));
    const bool ok = monotone && disjoint_mean >= 3.0 && snmf_mean <= mi_mean;
    return Outcome{ok, fmt("20 problems, max objective rise %.2e <= 1e-10; disjoint-span %.2f dB "
                           ">= 3; held-out SNMF %.2f dB <= SCE+MI %.2f dB",
                           worst_rise, disjoint_mean, snmf_mean, mi_mean)};
  });

  report(8, "partition invariants", [&] {
    // Oracle masks on the held-out set add binary-partition coverage.
    cli::EvalContext ctx;
    evaluate_all(desk, desk.corpus.test, cli::Algo::kOracleBinary, infer::Mode::kMaskInference,
                 ctx);
    double stem = 0.0, part = 0.0;
    bool inertia = true, all_ok = true;
    for (const auto& inv : desk.invariants) {
      stem = std::max(stem, inv.stem_sum_error);
      part = std::max(part, inv.binary_partition_error);
      inertia = inertia && inv.inertia_monotone;
      all_ok = all_ok && inv.ok();
    }
    // The eval command runs the same checks and exits nonzero on a violation.
    const fs::path dir = fs::temp_directory_path() / "scesep_acceptance" / "invariants";
    fs::remove_all(dir);
    const bool cli_ok =
        quiet_cli({"mix", "--out", dir.string(), "--set", "n_train=0", "--set", "n_val=0",
                   "--set", "n_test=4"}) == 0 &&
        quiet_cli({"eval", "--manifest", (dir / "manifest.tsv").string(), "--algo",
                   "oracle-binary,identity", "--out", dir.string()}) == 0;
    return Outcome{all_ok && cli_ok && !desk.invariants.empty(),
                   fmt("%zu evaluations: stem sum err %.2e <= 1e-9, binary partition err %g, "
                       "inertia %s; eval command %s",
                       desk.invariants.size(), stem, part, inertia ? "monotone" : "NOT monotone",
                       cli_ok ? "clean" : "reported violations")};
  });

  report(9, "determinism", [] {
    const fs::path root = fs::temp_directory_path() / "scesep_acceptance" / "determinism";
    fs::remove_all(root);
    const std::vector<std::string> small = {"--set", "n_train=6", "--set", "n_val=2", "--set",
                                            "n_test=3", "--set", "hidden_total=8", "--set",
                                            "embed_dim=4", "--epochs", "3", "--seed", "11"};
    auto with = [&](std::vector<std::string> a) {
      a.insert(a.end(), small.begin(), small.end());
      return a;
    };
    for (const char* run : {"a", "b"}) {
      const fs::path d = root / run;
      const std::string m = (d / "manifest.tsv").string();
      if (quiet_cli(with({"mix", "--out", d.string()})) != 0 ||
          quiet_cli(with({"train", "--manifest", m, "--out", (d / "model").string()})) != 0 ||
          quiet_cli(with({"train", "--algo", "snmf", "--manifest", m, "--out",
                          (d / "snmf").string(), "--set", "snmf_max_iters=30"})) != 0 ||
          quiet_cli(with({"eval", "--manifest", m, "--checkpoint",
                          (d / "model" / "model.scem").string(), "--snmf-dir",
                          (d / "snmf").string(), "--algo", "sce-mi,snmf", "--mode", "mi,cluster",
                          "--out", (d / "eval").string(), "--set", "snmf_max_iters=30"})) != 0) {
        return Outcome{false, "a command failed"};
      }
    }
    const std::vector<std::string> files = {"manifest.tsv",         "model/model.scem",
                                            "model/train_state.scem", "model/train_log.csv",
                                            "snmf/snmf_class0.snmf", "eval/metrics.csv"};
    std::size_t same = 0;
    std::string diff;
    for (const auto& f : files) {
      const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
      if (!a.empty() && a == b) {
        ++same;
      } else {
        diff += " " + f;
      }
    }
    return Outcome{same == files.size(),
                   fmt("%zu/%zu artifacts byte-identical across two runs%s", same, files.size(),
                       diff.empty() ? "" : (";" + diff + " differ").c_str())};
  });

  std::cout << (failures == 0 ? "all criteria passed" : fmt("%d criteria failed", failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
