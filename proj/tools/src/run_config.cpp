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

#include "scesep/cli/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "scesep/common/error.hpp"

namespace scesep::cli {
namespace {

struct Default {
  const char* key;
  const char* value;
};

// clang-format off
constexpr Default kDefaults[] = {
    {"seed", "0"},
    {"out", "."},
    {"algo", "sce-mi"},
    {"mode", "mi"},
    {"K", "2"},
    {"manifest", ""},
    {"checkpoint", ""},
    {"snmf_dir", ""},
    {"input", ""},
    {"resume", ""},
    {"materialize", "false"},
    {"n_train", "64"},
    {"n_val", "16"},
    {"n_test", "16"},
    {"n_speakers", "8"},
    {"clip_s", "2.5"},
    {"segment_s", "2.0"},
    {"snr_lo_db", "-5"},
    {"snr_hi_db", "5"},
    {"disjoint", "false"},
    {"sample_rate_hz", "10000"},
    {"window_len", "512"},
    {"hop", "256"},
    {"n_blstm_layers", "2"},
    {"hidden_total", "32"},
    {"embed_dim", "8"},
    {"batch", "8"},
    {"mi_weight", "0.5"},
    {"epochs", "30"},
    {"lr", "0.003"},
    {"clip_norm", "5"},
    {"kmeans_restarts", "8"},
    {"kmeans_max_iters", "300"},
    {"snmf_rank", "32"},
    {"snmf_mu", "0.1"},
    {"snmf_max_iters", "200"},
    {"snmf_tol", "1e-5"},
    {"snmf_trim", "-2"},
};
// clang-format on

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::kDefault: return "default";
    case Origin::kFile: return "file";
    case Origin::kFlag: return "flag";
  }
  return "?";
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* want) {
  throw Error(Errc::kInvalidArgument,
              "config key '" + key + "': expected " + want + ", got '" + value + "'");
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& d : kDefaults) entries_[d.key] = Entry{d.value, Origin::kDefault, {}};
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& d : kDefaults) k.emplace_back(d.key);
    return k;
  }();
  return keys;
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path.string());
}

void RunConfig::load_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::kInvalidArgument,
                  source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), Origin::kFile);
  }
}

void RunConfig::set(const std::string& key, const std::string& value, Origin origin) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(Errc::kInvalidArgument, "unknown config key '" + key + "'");
  Entry& e = it->second;
  if (origin == Origin::kFile) {
    e.file_value = value;
    if (e.origin == Origin::kFlag) return;
  }
  e.value = value;
  e.origin = origin;
}

bool RunConfig::has(const std::string& key) const {
  const auto it = entries_.find(key);
  return it != entries_.end() && !it->second.value.empty();
}

const std::string& RunConfig::str(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(Errc::kInvalidArgument, "unknown config key '" + key + "'");
  return it->second.value;
}

double RunConfig::real(const std::string& key) const {
  const std::string& v = str(key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v, "a number");
    return x;
  } catch (const std::logic_error&) {
    bad_value(key, v, "a number");
  }
}

long long RunConfig::integer(const std::string& key) const {
  const std::string& v = str(key);
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "an integer");
  return x;
}

std::uint64_t RunConfig::u64(const std::string& key) const {
  const std::string& v = str(key);
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "an unsigned integer");
  return x;
}

std::size_t RunConfig::count(const std::string& key) const {
  const long long x = integer(key);
  if (x < 0) bad_value(key, str(key), "a non-negative integer");
  return static_cast<std::size_t>(x);
}

bool RunConfig::boolean(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

std::vector<std::string> RunConfig::list(const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream in(str(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Origin RunConfig::origin(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(Errc::kInvalidArgument, "unknown config key '" + key + "'");
  return it->second.origin;
}

void RunConfig::write_header(std::ostream& os) const {
  for (const auto& d : kDefaults) {
    const Entry& e = entries_.at(d.key);
    os << "# " << d.key << " = " << e.value << "  [" << origin_name(e.origin) << "]\n";
  }
  for (const auto& d : kDefaults) {
    const Entry& e = entries_.at(d.key);
    if (e.origin == Origin::kFlag && !e.file_value.empty() && e.file_value != e.value) {
      os << "# note: flag overrides file for " << d.key << " (file had " << e.file_value
         << ")\n";
    }
  }
}

dsp::StftConfig stft_config(const RunConfig& rc) {
  dsp::StftConfig c;
  c.sample_rate_hz = static_cast<int>(rc.integer("sample_rate_hz"));
  c.window_len = rc.count("window_len");
  c.hop = rc.count("hop");
  c.validate();
  return c;
}

mix::CorpusConfig corpus_config(const RunConfig& rc) {
  mix::CorpusConfig c;
  c.n_speakers = static_cast<int>(rc.integer("n_speakers"));
  c.clip_s = rc.real("clip_s");
  c.snr_lo_db = rc.real("snr_lo_db");
  c.snr_hi_db = rc.real("snr_hi_db");
  c.disjoint = rc.boolean("disjoint");
  c.mix.segment_s = rc.real("segment_s");
  c.mix.stft = stft_config(rc);
  if (c.n_speakers < 1) throw Error(Errc::kInvalidArgument, "n_speakers must be >= 1");
  if (!(c.snr_lo_db <= c.snr_hi_db)) {
    throw Error(Errc::kInvalidArgument, "snr_lo_db must not exceed snr_hi_db");
  }
  if (!(c.mix.segment_s > 0.0) || c.clip_s < c.mix.segment_s) {
    throw Error(Errc::kInvalidArgument, "need 0 < segment_s <= clip_s");
  }
  return c;
}

model::ModelConfig model_config(const RunConfig& rc) {
  model::ModelConfig c;
  c.n_blstm_layers = rc.count("n_blstm_layers");
  c.hidden_total = rc.count("hidden_total");
  c.embed_dim = rc.count("embed_dim");
  c.batch = rc.count("batch");
  c.mi_weight = rc.real("mi_weight");
  c.epochs = rc.count("epochs");
  c.lr = rc.real("lr");
  c.clip_norm = rc.real("clip_norm");
  c.num_bins = stft_config(rc).num_bins();
  c.num_sources = 2;
  c.num_source_ids = static_cast<std::size_t>(corpus_config(rc).num_source_ids());
  c.validate();
  return c;
}

snmf::SnmfConfig snmf_config(const RunConfig& rc) {
  snmf::SnmfConfig c;
  c.rank = rc.count("snmf_rank");
  c.mu = rc.real("snmf_mu");
  c.max_iters = rc.count("snmf_max_iters");
  c.tol = rc.real("snmf_tol");
  c.trim_threshold = rc.real("snmf_trim");
  c.validate();
  return c;
}

infer::KMeansOptions kmeans_options(const RunConfig& rc) {
  infer::KMeansOptions o;
  o.restarts = rc.count("kmeans_restarts");
  o.max_iterations = rc.count("kmeans_max_iters");
  if (o.restarts < 1) throw Error(Errc::kInvalidArgument, "kmeans_restarts must be >= 1");
  return o;
}

}  // namespace scesep::cli
