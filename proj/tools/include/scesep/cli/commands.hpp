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

#include <iosfwd>
#include <string>
#include <vector>

#include "scesep/cli/run_config.hpp"

namespace scesep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Each command returns a process exit code; module errors propagate as
/// exceptions and are mapped by run_cli.
int cmd_mix(const RunConfig& rc, Streams io);
int cmd_train(const RunConfig& rc, Streams io);
int cmd_denoise(const RunConfig& rc, Streams io);
int cmd_eval(const RunConfig& rc, Streams io);
int cmd_gradcheck(const RunConfig& rc, const std::string& corrupt, Streams io);

/// Full command-line entry point.
int run_cli(const std::vector<std::string>& args, Streams io);

}  // namespace scesep::cli
