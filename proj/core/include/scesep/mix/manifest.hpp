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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "scesep/mix/mixture.hpp"

namespace scesep::mix {

enum class Split { kTrain, kVal, kTest };

std::string_view split_name(Split s) noexcept;
Split parse_split(std::string_view name);

/// One manifest line: a recipe for regenerating a mixture.
///
///   clip_id <TAB> split <TAB> class_id <TAB> source-spec <TAB> seed <TAB> snr_db
///
/// class_id is the noise class of the mixture. source-spec is either
///   synth:speaker=<i>;speech_seed=<u64>;noise=<kind>;noise_seed=<u64>;dur=<s>
///   synth-disjoint:<same keys>
///   wav:speech=<path>;noise=<path>;speaker=<i>
struct ManifestEntry {
  std::string clip_id;
  Split split = Split::kTrain;
  int class_id = 1;
  std::string source_spec;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
};

struct CorpusConfig {
  int n_speakers = 8;
  double clip_s = 2.5;
  double snr_lo_db = -5.0;
  double snr_hi_db = 5.0;
  // Replace speech and noise with band-separated tone sources.
  bool disjoint = false;
  MixOptions mix;

  /// Rows needed in the source table: speakers then noise kinds.
  int num_source_ids() const noexcept {
    return n_speakers + static_cast<int>(kAllNoiseKinds.size());
  }
  int noise_source_id(NoiseKind k) const noexcept { return n_speakers + static_cast<int>(k); }
};

struct Corpus {
  std::vector<MixRecord> train;
  std::vector<MixRecord> val;
  std::vector<MixRecord> test;
};

/// Deterministic recipes; each split draws from its own seed stream, so
/// source clips never repeat across splits.
std::vector<ManifestEntry> plan_corpus(std::size_t n_train, std::size_t n_val, std::size_t n_test,
                                       std::uint64_t seed, const CorpusConfig& cfg);

/// Regenerates the mixture described by an entry.
MixRecord realize(const ManifestEntry& entry, const CorpusConfig& cfg);

Corpus build_corpus(std::size_t n_train, std::size_t n_val, std::size_t n_test,
                    std::uint64_t seed, const CorpusConfig& cfg);
Corpus realize_all(const std::vector<ManifestEntry>& entries, const CorpusConfig& cfg);

void write_manifest(std::ostream& os, const std::vector<ManifestEntry>& entries);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(std::istream& is);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace scesep::mix
