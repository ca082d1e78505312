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

#include <CLI11.hpp>

#include <ostream>

#include "scesep/cli/commands.hpp"
#include "scesep/common/error.hpp"

namespace scesep::cli {
namespace {

struct FlagBinding {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagBinding kValueFlags[] = {
    {"--seed", "seed", "Master seed"},
    {"--out", "out", "Output directory"},
    {"--algo", "algo", "sce-mi, snmf, oracle-binary or identity (comma list for eval)"},
    {"--mode", "mode", "cluster or mi (comma list for eval)"},
    {"--K", "K", "Number of clusters in cluster mode"},
    {"--manifest", "manifest", "Corpus manifest (TSV)"},
    {"--checkpoint", "checkpoint", "SCEM model checkpoint"},
    {"--snmf-dir", "snmf_dir", "Directory holding SNMF dictionaries"},
    {"--input", "input", "Input WAV file"},
    {"--resume", "resume", "Training state to continue from"},
    {"--epochs", "epochs", "Training epochs"},
};

}  // namespace

int run_cli(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Speech denoising with source-contrastive embeddings", "scesep"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value settings file");
  std::map<std::string, std::string> flag_values;
  for (const auto& b : kValueFlags) app.add_option(b.flag, flag_values[b.key], b.help);
  bool materialize = false;
  app.add_flag("--materialize", materialize, "Also write WAV files for every mixture");
  std::vector<std::string> overrides;
  app.add_option("--set", overrides, "Override any setting as key=value");

  auto* mix = app.add_subcommand("mix", "Plan a synthetic corpus and write its manifest");
  auto* train = app.add_subcommand("train", "Train SCE+MI or fit SNMF dictionaries");
  auto* denoise = app.add_subcommand("denoise", "Split a WAV file into stems");
  auto* eval = app.add_subcommand("eval", "Score algorithms on the test split");
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  std::string corrupt;
  grad->add_option("--corrupt", corrupt, "Scale one check's analytic gradient (negative control)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    RunConfig rc;
    if (!config_path.empty()) rc.load_file(config_path);
    for (const auto& b : kValueFlags) {
      if (app.count(b.flag) > 0) rc.set(b.key, flag_values[b.key], Origin::kFlag);
    }
    if (materialize) rc.set("materialize", "true", Origin::kFlag);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw Error(Errc::kInvalidArgument, "--set expects key=value, got '" + kv + "'");
      }
      rc.set(kv.substr(0, eq), kv.substr(eq + 1), Origin::kFlag);
    }
    rc.write_header(io.out);

    if (mix->parsed()) return cmd_mix(rc, io);
    if (train->parsed()) return cmd_train(rc, io);
    if (denoise->parsed()) return cmd_denoise(rc, io);
    if (eval->parsed()) return cmd_eval(rc, io);
    if (grad->parsed()) return cmd_gradcheck(rc, corrupt, io);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace scesep::cli
