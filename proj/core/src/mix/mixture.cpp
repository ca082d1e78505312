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

#include "scesep/mix/mixture.hpp"

#include <cmath>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"

namespace scesep::mix {

std::size_t LabelTensor::dominant(std::size_t t, std::size_t f) const {
  for (std::size_t m = 0; m < sources_; ++m) {
    if ((*this)(t, f, m) > 0) return m;
  }
  return sources_;
}

LabelTensor make_labels(const std::vector<dsp::ComplexSpectrogram>& source_specs) {
  if (source_specs.empty()) throw Error(Errc::kShapeMismatch, "need at least one source");
  const auto& first = source_specs.front();
  for (const auto& s : source_specs) {
    if (!s.same_shape(first)) throw Error(Errc::kShapeMismatch, "source spectrograms differ in shape");
  }
  LabelTensor y(first.frames(), first.bins(), source_specs.size());
  for (std::size_t t = 0; t < first.frames(); ++t) {
    for (std::size_t f = 0; f < first.bins(); ++f) {
      std::size_t best = 0;
      double best_mag = std::abs(source_specs[0](t, f));
      for (std::size_t m = 1; m < source_specs.size(); ++m) {
        const double mag = std::abs(source_specs[m](t, f));
        if (mag > best_mag) {
          best = m;
          best_mag = mag;
        }
      }
      y(t, f, best) = 1;
    }
  }
  return y;
}

double noise_gain_for_snr(double speech_power, double noise_power, double snr_db) {
  return std::sqrt(speech_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
}

MixRecord mix_at_snr(const SourceClip& speech, const SourceClip& noise, double snr_db,
                     std::uint64_t seed, const MixOptions& opts) {
  const int rate = opts.stft.sample_rate_hz;
  if (speech.waveform.sample_rate_hz != rate || noise.waveform.sample_rate_hz != rate) {
    throw Error(Errc::kInvalidArgument, "clips must be at the analysis sample rate");
  }
  const auto seg = static_cast<std::size_t>(std::llround(opts.segment_s * rate));
  if (speech.waveform.size() < seg || noise.waveform.size() < seg) {
    throw Error(Errc::kTooShort, "clip shorter than the mixing segment");
  }

  Rng rng = make_rng(seed, "segment");
  auto pick = [&](const dsp::Waveform& w) {
    std::uniform_int_distribution<std::size_t> offset(0, w.size() - seg);
    const std::size_t start = offset(rng);
    return std::vector<double>(w.samples.begin() + static_cast<std::ptrdiff_t>(start),
                               w.samples.begin() + static_cast<std::ptrdiff_t>(start + seg));
  };
  std::vector<double> s = pick(speech.waveform);
  std::vector<double> n = pick(noise.waveform);

  const double ps = dsp::power(s);
  const double pn = dsp::power(n);
  if (!(ps > 0.0)) throw Error(Errc::kSilentSource, "speech segment " + speech.clip_id + " is silent");
  if (!(pn > 0.0)) throw Error(Errc::kSilentSource, "noise segment " + noise.clip_id + " is silent");
  const double g = noise_gain_for_snr(ps, pn, snr_db);
  for (double& v : n) v *= g;

  MixRecord rec;
  rec.snr_db = snr_db;
  rec.noise_gain = g;
  rec.seed = seed;
  rec.mixture = dsp::Waveform{std::vector<double>(seg), rate};
  for (std::size_t i = 0; i < seg; ++i) rec.mixture.samples[i] = s[i] + n[i];
  rec.sources.push_back(dsp::Waveform{std::move(s), rate});
  rec.sources.push_back(dsp::Waveform{std::move(n), rate});
  rec.mixture_spec = dsp::stft(rec.mixture, opts.stft);
  for (const auto& src : rec.sources) rec.source_specs.push_back(dsp::stft(src, opts.stft));
  rec.labels = make_labels(rec.source_specs);
  rec.source_ids = {speech.source_id, noise.source_id};
  rec.source_clip_ids = {speech.clip_id, noise.clip_id};
  rec.noise_class = noise.class_id;
  return rec;
}

double measured_snr_db(const MixRecord& rec) {
  return 10.0 * std::log10(dsp::power(rec.sources.at(0).samples) /
                           dsp::power(rec.sources.at(1).samples));
}

}  // namespace scesep::mix
