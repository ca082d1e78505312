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
#include <string>
#include <vector>

namespace scesep::model {

struct GradcheckOptions {
  double epsilon = 1e-3;
  // End-to-end step; the full loss is larger, so rounding needs a wider step.
  double model_epsilon = 3e-3;
  double recurrent_tolerance = 1e-4;
  double op_tolerance = 1e-6;
  // Name of a check whose analytic gradient is deliberately scaled by 1.01;
  // used as a negative control.
  std::string corrupt;
};

struct GradcheckEntry {
  std::string name;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  std::size_t checked = 0;
  bool passed = false;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  bool passed() const;
};

/// |a - n| / max(|a|, |n|, 1e-8). The floor only matters for gradients
/// that are zero to within rounding.
double relative_error(double analytic, double numeric);

/// Five-point central finite-difference checks (step epsilon) of every
/// differentiable operation on random small shapes: LSTM in both
/// directions, BLSTM, time-distributed affine, the contrastive loss
/// (embeddings, source vectors and source-table fan-in), the mask head with
/// its loss, and the full model end to end.
GradcheckReport run_gradcheck(std::uint64_t seed, const GradcheckOptions& opts = {});

}  // namespace scesep::model
