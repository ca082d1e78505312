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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scesep/infer/denoise.hpp"
#include "scesep/metrics/sdr.hpp"
#include "scesep/mix/mixture.hpp"
#include "scesep/model/model.hpp"
#include "scesep/snmf/snmf.hpp"

namespace scesep::cli {

enum class Algo { kSceMi, kSnmf, kOracleBinary, kIdentity };

std::string_view algo_name(Algo a) noexcept;
Algo parse_algo(std::string_view name);

/// Speech dictionary plus all noise dictionaries merged into one.
struct SnmfPair {
  snmf::Dictionary speech;
  snmf::Dictionary noise;
};

/// Per-class dictionaries learned from clean training sources. Class 0 is
/// speech; classes 1.. are the noise kinds present in the records.
std::map<int, snmf::Dictionary> fit_class_dictionaries(const std::vector<mix::MixRecord>& train,
                                                       const snmf::SnmfConfig& cfg,
                                                       std::uint64_t seed);
SnmfPair merge_dictionaries(const std::map<int, snmf::Dictionary>& by_class);
std::map<int, snmf::Dictionary> load_dictionaries(const std::filesystem::path& dir);
std::filesystem::path dictionary_path(const std::filesystem::path& dir, int class_id);

struct EvalContext {
  const model::SeparationModel* model = nullptr;  // sce-mi
  const SnmfPair* snmf = nullptr;                 // snmf
  snmf::SnmfConfig snmf_cfg;
  infer::KMeansOptions kmeans;
  dsp::StftConfig stft;
  std::uint64_t seed = 0;
};

/// Largest deviations seen by the partition checks of one evaluation.
struct InvariantReport {
  double stem_sum_error = 0.0;        // ratio masks: stems vs round-tripped mixture
  double binary_partition_error = 0.0;
  bool inertia_monotone = true;
  bool ok() const;
};

inline constexpr double kStemSumTolerance = 1e-9;

struct RecordEval {
  metrics::EvalResult result;
  InvariantReport invariants;
};

/// Separates one record with the given algorithm and scores it against the
/// record's sources. `mode` only matters for sce-mi.
RecordEval evaluate_record(const mix::MixRecord& rec, Algo algo, infer::Mode mode,
                           const EvalContext& ctx);

}  // namespace scesep::cli
