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

#include <string>
#include <vector>

#include "scesep/dsp/waveform.hpp"

namespace scesep::metrics {

inline constexpr double kSdrCap = 100.0;

/// Projection SDR in dB: the estimate is split into its projection onto the
/// reference and a residual. Lengths are truncated to the shorter signal.
/// Throws SilentReference.
double sdr(const dsp::Waveform& reference, const dsp::Waveform& estimate);

/// sdr(reference, estimate) - sdr(reference, mixture).
double sdr_improvement(const dsp::Waveform& mixture, const dsp::Waveform& reference,
                       const dsp::Waveform& estimate);

struct EvalResult {
  std::string clip_id;
  std::vector<double> per_source_sdr_db;     // indexed by reference
  std::vector<double> sdr_improvement_db;    // indexed by reference
  std::vector<std::size_t> permutation;      // estimate index -> reference index
  double snr_db = 0.0;
  std::string noise_kind;

  double mean_sdr() const;
  double mean_improvement() const;
};

/// Exhaustive search over matchings for the one with the highest mean SDR,
/// lexicographically smallest permutation on ties. When `mixture` is given
/// the improvements are filled in as well. Throws CountMismatch.
EvalResult best_permutation(const std::vector<dsp::Waveform>& references,
                            const std::vector<dsp::Waveform>& estimates,
                            const dsp::Waveform* mixture = nullptr);

}  // namespace scesep::metrics
