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

#include "scesep/mix/manifest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"
#include "scesep/dsp/waveform.hpp"
#include "scesep/io/wav.hpp"

namespace scesep::mix {

namespace {

std::map<std::string, std::string> parse_kv(std::string_view body) {
  std::map<std::string, std::string> kv;
  while (!body.empty()) {
    const auto semi = body.find(';');
    const std::string_view item = body.substr(0, semi);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kFormat, "bad source-spec item '" + std::string(item) + "'");
    }
    kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (semi == std::string_view::npos) break;
    body.remove_prefix(semi + 1);
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw Error(Errc::kFormat, "source-spec missing '" + key + "'");
  return it->second;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(Errc::kFormat, "bad integer '" + s + "'");
  }
  return v;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error(Errc::kFormat, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(Errc::kFormat, "bad number '" + s + "'");
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SourceClip load_wav_clip(const std::string& path, int rate) {
  dsp::Waveform w = io::read_wav(path);
  if (w.sample_rate_hz != rate) w = dsp::resample(w, rate);
  SourceClip clip;
  clip.waveform = dsp::standardize(w);
  clip.clip_id = std::filesystem::path(path).stem().string();
  return clip;
}

}  // namespace

std::string_view split_name(Split s) noexcept {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw Error(Errc::kFormat, "unknown split '" + std::string(name) + "'");
}

std::vector<ManifestEntry> plan_corpus(std::size_t n_train, std::size_t n_val, std::size_t n_test,
                                       std::uint64_t seed, const CorpusConfig& cfg) {
  if (cfg.n_speakers < 1) throw Error(Errc::kInvalidArgument, "n_speakers must be >= 1");
  if (cfg.snr_hi_db < cfg.snr_lo_db) throw Error(Errc::kInvalidArgument, "empty SNR range");
  if (cfg.clip_s < cfg.mix.segment_s) {
    throw Error(Errc::kInvalidArgument, "clip_s must be at least segment_s");
  }
  std::vector<ManifestEntry> out;
  const std::pair<Split, std::size_t> plan[] = {
      {Split::kTrain, n_train}, {Split::kVal, n_val}, {Split::kTest, n_test}};
  for (const auto& [split, count] : plan) {
    const std::string stream = "corpus/" + std::string(split_name(split));
    for (std::size_t i = 0; i < count; ++i) {
      Rng rng = make_rng(seed, stream, i);
      const int speaker = std::uniform_int_distribution<int>(0, cfg.n_speakers - 1)(rng);
      const auto kind = kAllNoiseKinds[std::uniform_int_distribution<std::size_t>(
          0, kAllNoiseKinds.size() - 1)(rng)];
      const double snr = std::uniform_real_distribution<double>(cfg.snr_lo_db, cfg.snr_hi_db)(rng);
      const std::uint64_t speech_seed = rng();
      const std::uint64_t noise_seed = rng();

      char id[32];
      std::snprintf(id, sizeof(id), "%s-%04zu", std::string(split_name(split)).c_str(), i);
      ManifestEntry e;
      e.clip_id = id;
      e.split = split;
      e.class_id = noise_class_id(kind);
      e.source_spec = std::string(cfg.disjoint ? "synth-disjoint:" : "synth:") +
                      "speaker=" + std::to_string(speaker) +
                      ";speech_seed=" + std::to_string(speech_seed) +
                      ";noise=" + std::string(noise_kind_name(kind)) +
                      ";noise_seed=" + std::to_string(noise_seed) +
                      ";dur=" + fmt_double(cfg.clip_s);
      e.seed = rng();
      e.snr_db = snr;
      out.push_back(std::move(e));
    }
  }
  return out;
}

MixRecord realize(const ManifestEntry& entry, const CorpusConfig& cfg) {
  const int rate = cfg.mix.stft.sample_rate_hz;
  const std::string& spec = entry.source_spec;
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(Errc::kFormat, "bad source-spec '" + spec + "'");
  const std::string scheme = spec.substr(0, colon);
  const auto kv = parse_kv(std::string_view(spec).substr(colon + 1));

  SourceClip speech;
  SourceClip noise;
  const int speaker = static_cast<int>(to_u64(need(kv, "speaker")));
  NoiseKind kind = noise_kind_from_class(entry.class_id);
  if (scheme == "synth" || scheme == "synth-disjoint") {
    kind = parse_noise_kind(need(kv, "noise"));
    const double dur = to_double(need(kv, "dur"));
    const std::uint64_t speech_seed = to_u64(need(kv, "speech_seed"));
    const std::uint64_t noise_seed = to_u64(need(kv, "noise_seed"));
    if (scheme == "synth") {
      speech = synth_speechlike(dur, speech_seed, speaker, rate);
      noise = synth_noise(kind, dur, noise_seed, rate);
    } else {
      speech = synth_band_source(150.0, 1800.0, dur, speech_seed, rate);
      noise = synth_band_source(2600.0, 4600.0, dur, noise_seed, rate);
      noise.clip_id = std::string(noise_kind_name(kind)) + "-" + noise.clip_id;
    }
  } else if (scheme == "wav") {
    speech = load_wav_clip(need(kv, "speech"), rate);
    noise = load_wav_clip(need(kv, "noise"), rate);
  } else {
    throw Error(Errc::kFormat, "unknown source-spec scheme '" + scheme + "'");
  }
  speech.class_id = kSpeechClass;
  speech.source_id = speaker;
  noise.class_id = noise_class_id(kind);
  noise.source_id = cfg.noise_source_id(kind);

  MixRecord rec = mix_at_snr(speech, noise, entry.snr_db, entry.seed, cfg.mix);
  rec.clip_id = entry.clip_id;
  return rec;
}

Corpus realize_all(const std::vector<ManifestEntry>& entries, const CorpusConfig& cfg) {
  Corpus c;
  for (const auto& e : entries) {
    MixRecord rec = realize(e, cfg);
    switch (e.split) {
      case Split::kTrain: c.train.push_back(std::move(rec)); break;
      case Split::kVal: c.val.push_back(std::move(rec)); break;
      case Split::kTest: c.test.push_back(std::move(rec)); break;
    }
  }
  return c;
}

Corpus build_corpus(std::size_t n_train, std::size_t n_val, std::size_t n_test,
                    std::uint64_t seed, const CorpusConfig& cfg) {
  return realize_all(plan_corpus(n_train, n_val, n_test, seed, cfg), cfg);
}

void write_manifest(std::ostream& os, const std::vector<ManifestEntry>& entries) {
  for (const auto& e : entries) {
    os << e.clip_id << '\t' << split_name(e.split) << '\t' << e.class_id << '\t' << e.source_spec
       << '\t' << e.seed << '\t' << fmt_double(e.snr_db) << '\n';
  }
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  write_manifest(out, entries);
}

std::vector<ManifestEntry> read_manifest(std::istream& is) {
  std::vector<ManifestEntry> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() != 6) {
      throw Error(Errc::kFormat, "manifest line " + std::to_string(lineno) + " has " +
                                     std::to_string(fields.size()) + " fields, expected 6");
    }
    ManifestEntry e;
    e.clip_id = fields[0];
    e.split = parse_split(fields[1]);
    e.class_id = static_cast<int>(to_u64(fields[2]));
    e.source_spec = fields[3];
    e.seed = to_u64(fields[4]);
    e.snr_db = to_double(fields[5]);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return read_manifest(in);
}

}  // namespace scesep::mix
