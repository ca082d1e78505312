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
#include <map>
#include <string>
#include <vector>

#include "scesep/dsp/stft.hpp"
#include "scesep/infer/kmeans.hpp"
#include "scesep/mix/manifest.hpp"
#include "scesep/model/model.hpp"
#include "scesep/snmf/snmf.hpp"

namespace scesep::cli {

enum class Origin { kDefault, kFile, kFlag };

/// Flat key = value settings for every command. Values are kept as text
/// and parsed on access by the module that owns them.
class RunConfig {
 public:
  RunConfig();

  /// Parses `key = value` lines; '#' starts a comment. Unknown keys and
  /// malformed lines are InvalidArgument.
  void load_file(const std::filesystem::path& path);
  void load_text(const std::string& text, const std::string& source = "<text>");
  /// Later calls win; flags beat file values regardless of call order.
  void set(const std::string& key, const std::string& value, Origin origin);

  bool has(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;
  Origin origin(const std::string& key) const;

  /// One "# key = value  [origin]" line per key, plus a note for each key
  /// where a flag overrode a file value.
  void write_header(std::ostream& os) const;

  static const std::vector<std::string>& known_keys();

 private:
  struct Entry {
    std::string value;
    Origin origin = Origin::kDefault;
    std::string file_value;  // kept to report overrides
  };
  std::map<std::string, Entry> entries_;
};

dsp::StftConfig stft_config(const RunConfig& rc);
mix::CorpusConfig corpus_config(const RunConfig& rc);
model::ModelConfig model_config(const RunConfig& rc);
snmf::SnmfConfig snmf_config(const RunConfig& rc);
infer::KMeansOptions kmeans_options(const RunConfig& rc);

}  // namespace scesep::cli
