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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scesep/cli/commands.hpp"
#include "scesep/cli/run_config.hpp"
#include "scesep/common/error.hpp"
#include "scesep/io/wav.hpp"
#include "test_util.hpp"

namespace scesep::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, {out, err});
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "scesep_cli_test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const std::vector<std::string> kSmall = {"--set", "n_train=4", "--set", "n_val=1", "--set",
                                         "n_test=2"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST(RunConfig, PrecedenceFlagOverFileOverDefault) {
  RunConfig rc;
  EXPECT_EQ(rc.str("epochs"), "30");
  EXPECT_EQ(rc.origin("epochs"), Origin::kDefault);
  rc.set("epochs", "5", Origin::kFlag);
  rc.load_text("epochs = 9  # comment\nlr=0.01\n\n# only a comment\n");
  EXPECT_EQ(rc.integer("epochs"), 5);
  EXPECT_EQ(rc.origin("epochs"), Origin::kFlag);
  EXPECT_DOUBLE_EQ(rc.real("lr"), 0.01);
  EXPECT_EQ(rc.origin("lr"), Origin::kFile);
  std::ostringstream header;
  rc.write_header(header);
  EXPECT_NE(header.str().find("# epochs = 5  [flag]"), std::string::npos);
  EXPECT_NE(header.str().find("flag overrides file for epochs (file had 9)"), std::string::npos);
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  RunConfig rc;
  EXPECT_THROW(rc.load_text("no_such_key = 1\n"), Error);
  EXPECT_THROW(rc.load_text("just words\n"), Error);
  rc.set("epochs", "ten", Origin::kFlag);
  EXPECT_THROW(rc.integer("epochs"), Error);
  rc.set("mi_weight", "2", Origin::kFlag);
  EXPECT_THROW(model_config(rc), Error);
  rc.set("mi_weight", "0.5", Origin::kFlag);
  rc.set("snmf_mu", "-1", Origin::kFlag);
  EXPECT_THROW(snmf_config(rc), Error);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"mix", "--set", "bogus=1"}).code, kExitUsage);
  const fs::path d = fresh_dir("usage");
  const CliRun r = run({"denoise", "--checkpoint", (d / "missing.scem").string(), "--input",
                     (d / "missing.wav").string(), "--out", d.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, ConfigFileIsRead) {
  const fs::path d = fresh_dir("config");
  std::ofstream(d / "run.cfg") << "n_train = 3\nn_val = 0\nn_test = 1\n";
  const CliRun r = run({"mix", "--config", (d / "run.cfg").string(), "--out", d.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("train: 3 mixtures"), std::string::npos);
  EXPECT_EQ(count_lines(slurp(d / "manifest.tsv")), 4u);
}

TEST(Cli, MixIsDeterministicAndMaterializes) {
  const fs::path a = fresh_dir("mix_a"), b = fresh_dir("mix_b");
  ASSERT_EQ(run(with({"mix", "--seed", "7", "--out", a.string(), "--materialize"}, kSmall)).code,
            kExitOk);
  ASSERT_EQ(run(with({"mix", "--seed", "7", "--out", b.string()}, kSmall)).code, kExitOk);
  EXPECT_EQ(slurp(a / "manifest.tsv"), slurp(b / "manifest.tsv"));
  std::size_t wavs = 0;
  for (const auto& e : fs::directory_iterator(a / "audio")) wavs += e.path().extension() == ".wav";
  EXPECT_EQ(wavs, 7u * 3u);
}

class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fresh_dir("pipeline");
    ASSERT_EQ(run(with({"mix", "--seed", "3", "--out", dir_.string()}, kSmall)).code, kExitOk);
  }
  static std::string manifest() { return (dir_ / "manifest.tsv").string(); }
  static fs::path dir_;
};
fs::path CliPipeline::dir_;

TEST_F(CliPipeline, TrainWritesCheckpointLogAndResumesIdentically) {
  const fs::path full = dir_ / "full", part = dir_ / "part";
  const std::vector<std::string> base = with({"train", "--manifest", manifest(), "--seed", "4",
                                              "--set", "hidden_total=8", "--set", "embed_dim=3"},
                                             kSmall);
  ASSERT_EQ(run(with(base, {"--epochs", "4", "--out", full.string()})).code, kExitOk);
  ASSERT_EQ(run(with(base, {"--epochs", "2", "--out", part.string()})).code, kExitOk);
  const CliRun resumed = run(with(base, {"--epochs", "4", "--out", part.string(), "--resume",
                                      (part / "train_state.scem").string()}));
  ASSERT_EQ(resumed.code, kExitOk) << resumed.err;
  EXPECT_NE(resumed.out.find("resuming at epoch 2"), std::string::npos);
  EXPECT_EQ(slurp(full / "train_log.csv"), slurp(part / "train_log.csv"));
  EXPECT_EQ(slurp(full / "model.scem"), slurp(part / "model.scem"));
  EXPECT_EQ(slurp(full / "model.scem").substr(0, 4), "SCEM");
  EXPECT_EQ(count_lines(slurp(full / "train_log.csv")), 5u);

  // Denoise with the trained model.
  const fs::path wav = dir_ / "input.wav";
  io::write_wav(wav, scesep::testing::random_waveform(12000, 3, 16000));
  const fs::path dn = dir_ / "denoised";
  const CliRun mi = run({"denoise", "--checkpoint", (full / "model.scem").string(), "--input",
                      wav.string(), "--out", dn.string(), "--mode", "mi", "--set",
                      "hidden_total=8"});
  ASSERT_EQ(mi.code, kExitOk) << mi.err;
  EXPECT_NE(mi.err.find("resampling"), std::string::npos);
  EXPECT_TRUE(fs::exists(dn / "input.src1.wav"));
  EXPECT_FALSE(fs::exists(dn / "input.src2.wav"));
  const CliRun cl = run({"denoise", "--checkpoint", (full / "model.scem").string(), "--input",
                      wav.string(), "--out", dn.string(), "--mode", "cluster", "--K", "3"});
  ASSERT_EQ(cl.code, kExitOk) << cl.err;
  EXPECT_TRUE(fs::exists(dn / "input.src2.wav"));

  const fs::path ev = dir_ / "eval";
  const CliRun e = run({"eval", "--manifest", manifest(), "--checkpoint",
                     (full / "model.scem").string(), "--algo", "sce-mi,identity", "--mode",
                     "mi,cluster", "--out", ev.string()});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const std::string csv = slurp(ev / "metrics.csv");
  EXPECT_NE(csv.find(",sce-mi,mi,"), std::string::npos);
  EXPECT_NE(csv.find(",sce-mi,cluster,"), std::string::npos);
  EXPECT_NE(csv.find(",identity,-,"), std::string::npos);
  EXPECT_EQ(count_lines(csv), 1u + 3u * 2u * 2u);
}

TEST_F(CliPipeline, IdentityEvalGivesZeroImprovement) {
  const fs::path ev = dir_ / "eval_identity";
  const CliRun e = run({"eval", "--manifest", manifest(), "--algo", "identity", "--out", ev.string()});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  std::istringstream in(slurp(ev / "metrics.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0.000000") << line;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

TEST_F(CliPipeline, SnmfTrainsOneDictionaryPerClass) {
  const fs::path sd = dir_ / "snmf";
  const CliRun t = run({"train", "--algo", "snmf", "--manifest", manifest(), "--out", sd.string(),
                     "--set", "snmf_rank=4", "--set", "snmf_max_iters=20"});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(sd)) {
    files += e.path().extension() == ".snmf";
    if (e.path().extension() == ".snmf") EXPECT_EQ(slurp(e.path()).substr(0, 4), "SNMF");
  }
  EXPECT_EQ(files, count_lines(t.out.substr(t.out.find("class 0"))));
  EXPECT_TRUE(fs::exists(sd / "snmf_class0.snmf"));
  const CliRun e = run({"eval", "--manifest", manifest(), "--algo", "snmf", "--snmf-dir",
                     sd.string(), "--out", (dir_ / "eval_snmf").string(), "--set", "snmf_rank=4"});
  EXPECT_EQ(e.code, kExitOk) << e.err;
}

TEST(Cli, OracleEvalOnDisjointMixtures) {
  const fs::path d = fresh_dir("oracle");
  ASSERT_EQ(run({"mix", "--out", d.string(), "--set", "disjoint=true", "--set", "n_train=0",
                 "--set", "n_val=0", "--set", "n_test=3"})
                .code,
            kExitOk);
  const CliRun e = run({"eval", "--manifest", (d / "manifest.tsv").string(), "--algo",
                     "oracle-binary", "--set", "disjoint=true", "--out", d.string()});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  std::istringstream in(slurp(d / "metrics.csv"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) EXPECT_GT(std::stod(line.substr(line.rfind(',') + 1)), 20.0);
}

TEST(Cli, GradcheckExitCodes) {
  const CliRun ok = run({"gradcheck", "--seed", "2"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
  EXPECT_NE(ok.out.find("gradcheck passed"), std::string::npos);
  EXPECT_EQ(ok.out, run({"gradcheck", "--seed", "2"}).out);
  const CliRun bad = run({"gradcheck", "--seed", "2", "--corrupt", "mi_head+mi_loss"});
  EXPECT_EQ(bad.code, kExitVerification);
}

}  // namespace
}  // namespace scesep::cli
