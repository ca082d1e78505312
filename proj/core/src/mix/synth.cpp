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

#include "scesep/mix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"

namespace scesep::mix {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// RBJ cookbook biquad, direct form I.
class Biquad {
 public:
  static Biquad lowpass(double fc, double fs, double q = M_SQRT1_2) {
    const double w = kTwoPi * fc / fs, a = std::sin(w) / (2 * q), c = std::cos(w);
    return Biquad((1 - c) / 2, 1 - c, (1 - c) / 2, 1 + a, -2 * c, 1 - a);
  }
  static Biquad highpass(double fc, double fs, double q = M_SQRT1_2) {
    const double w = kTwoPi * fc / fs, a = std::sin(w) / (2 * q), c = std::cos(w);
    return Biquad((1 + c) / 2, -(1 + c), (1 + c) / 2, 1 + a, -2 * c, 1 - a);
  }
  static Biquad bandpass(double fc, double fs, double q) {
    const double w = kTwoPi * fc / fs, a = std::sin(w) / (2 * q), c = std::cos(w);
    return Biquad(a, 0, -a, 1 + a, -2 * c, 1 - a);
  }

  double operator()(double x) {
    const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  Biquad(double b0, double b1, double b2, double a0, double a1, double a2)
      : b0_(b0 / a0), b1_(b1 / a0), b2_(b2 / a0), a1_(a1 / a0), a2_(a2 / a0) {}
  double b0_, b1_, b2_, a1_, a2_;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t num_samples(double duration_s, int rate) {
  if (!(duration_s > 0.0)) throw Error(Errc::kInvalidArgument, "duration must be positive");
  return static_cast<std::size_t>(std::llround(duration_s * rate));
}

// Zero mean, unit power. Generators never emit silence, so this cannot fail
// for valid durations.
void normalize(std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double p = 0.0;
  for (double& v : x) {
    v -= mean;
    p += v * v;
  }
  p /= static_cast<double>(x.size());
  const double g = p > 0.0 ? 1.0 / std::sqrt(p) : 1.0;
  for (double& v : x) v *= g;
}

std::string hex_id(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(12, '0');
  for (int i = 11; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

struct Syllable {
  std::size_t start, end;
  double f1a, f1b, f2a, f2b, f3;
  double pitch_a, pitch_b;
  double level;
};

}  // namespace

std::string_view noise_kind_name(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::kSiren: return "siren";
    case NoiseKind::kJackhammer: return "jackhammer";
    case NoiseKind::kEngine: return "engine";
    case NoiseKind::kCrowd: return "crowd";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  for (NoiseKind k : kAllNoiseKinds) {
    if (noise_kind_name(k) == name) return k;
  }
  throw Error(Errc::kUnknownKind, "unknown noise kind '" + std::string(name) + "'");
}

NoiseKind noise_kind_from_class(int class_id) {
  if (class_id < 1 || class_id > static_cast<int>(kAllNoiseKinds.size())) {
    throw Error(Errc::kUnknownKind, "class id " + std::to_string(class_id) + " is not a noise class");
  }
  return kAllNoiseKinds[static_cast<std::size_t>(class_id - 1)];
}

SourceClip synth_speechlike(double duration_s, std::uint64_t seed, std::optional<int> speaker,
                            int sample_rate_hz) {
  const std::size_t n = num_samples(duration_s, sample_rate_hz);
  const double fs = sample_rate_hz;
  Rng rng = make_rng(seed, "speechlike");

  double base_pitch = 0.0;
  double formant_scale = 0.0;
  if (speaker) {
    Rng voice = make_rng(static_cast<std::uint64_t>(*speaker), "speaker-voice");
    base_pitch = uniform(voice, 95.0, 230.0);
    formant_scale = uniform(voice, 0.85, 1.15);
  } else {
    base_pitch = uniform(rng, 95.0, 230.0);
    formant_scale = uniform(rng, 0.85, 1.15);
  }

  std::vector<Syllable> syllables;
  for (std::size_t pos = static_cast<std::size_t>(uniform(rng, 0.0, 0.08) * fs); pos < n;) {
    const auto len = static_cast<std::size_t>(uniform(rng, 0.14, 0.32) * fs);
    Syllable s{};
    s.start = pos;
    s.end = std::min(n, pos + len);
    s.f1a = uniform(rng, 300.0, 850.0) * formant_scale;
    s.f1b = uniform(rng, 300.0, 850.0) * formant_scale;
    s.f2a = uniform(rng, 850.0, 2300.0) * formant_scale;
    s.f2b = uniform(rng, 850.0, 2300.0) * formant_scale;
    s.f3 = uniform(rng, 2400.0, 3100.0) * formant_scale;
    s.pitch_a = base_pitch * uniform(rng, 0.9, 1.15);
    s.pitch_b = base_pitch * uniform(rng, 0.85, 1.1);
    s.level = uniform(rng, 0.6, 1.0);
    syllables.push_back(s);
    const double gap = uniform(rng, 0.0, 1.0) < 0.15 ? uniform(rng, 0.15, 0.3)
                                                     : uniform(rng, 0.03, 0.09);
    pos = s.end + static_cast<std::size_t>(gap * fs);
  }

  const double vibrato_rate = uniform(rng, 4.0, 6.0);
  const double vibrato_phase = uniform(rng, 0.0, kTwoPi);
  constexpr int kMaxHarmonics = 48;
  constexpr double kTopHz = 4200.0;
  std::vector<double> phase(kMaxHarmonics, 0.0);
  for (double& p : phase) p = uniform(rng, 0.0, kTwoPi);
  std::vector<double> amp(kMaxHarmonics, 0.0);

  std::vector<double> out(n, 0.0);
  std::size_t current = 0;
  double pitch_phase_base = base_pitch;
  for (std::size_t i = 0; i < n; ++i) {
    while (current < syllables.size() && syllables[current].end <= i) ++current;
    if (current >= syllables.size() || i < syllables[current].start) {
      // Keep harmonic phases running across gaps so onsets are smooth.
      for (int h = 0; h < kMaxHarmonics; ++h) {
        phase[static_cast<std::size_t>(h)] += kTwoPi * (h + 1) * pitch_phase_base / fs;
      }
      continue;
    }
    const Syllable& s = syllables[current];
    const double u = static_cast<double>(i - s.start) / static_cast<double>(s.end - s.start);
    const double env = s.level * std::pow(std::sin(M_PI * u), 1.5);
    const double t = static_cast<double>(i) / fs;
    const double f0 = (s.pitch_a + (s.pitch_b - s.pitch_a) * u) *
                      (1.0 + 0.012 * std::sin(kTwoPi * vibrato_rate * t + vibrato_phase));
    pitch_phase_base = f0;
    const double f1 = s.f1a + (s.f1b - s.f1a) * u;
    const double f2 = s.f2a + (s.f2b - s.f2a) * u;
    if (i % 8 == 0 || i == s.start) {
      for (int h = 0; h < kMaxHarmonics; ++h) {
        const double fh = (h + 1) * f0;
        double a = 0.0;
        if (fh < kTopHz) {
          a = 1.0 * std::exp(-0.5 * std::pow((fh - f1) / 90.0, 2)) +
              0.6 * std::exp(-0.5 * std::pow((fh - f2) / 130.0, 2)) +
              0.25 * std::exp(-0.5 * std::pow((fh - s.f3) / 170.0, 2)) + 0.04 / (h + 1);
          // Soft roll-off approaching the top of the band.
          if (fh > 3600.0) a *= std::max(0.0, (kTopHz - fh) / (kTopHz - 3600.0));
        }
        amp[static_cast<std::size_t>(h)] = a;
      }
    }
    double v = 0.0;
    for (int h = 0; h < kMaxHarmonics; ++h) {
      auto& p = phase[static_cast<std::size_t>(h)];
      p += kTwoPi * (h + 1) * f0 / fs;
      if (p > kTwoPi) p = std::fmod(p, kTwoPi);
      v += amp[static_cast<std::size_t>(h)] * std::sin(p);
    }
    out[i] = env * v;
  }

  // Faint breath noise so pauses are not digitally silent.
  Biquad breath = Biquad::bandpass(1200.0, fs, 0.7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& x : out) x += 0.003 * breath(gauss(rng));

  normalize(out);
  SourceClip clip;
  clip.waveform = dsp::Waveform{std::move(out), sample_rate_hz};
  clip.class_id = kSpeechClass;
  clip.clip_id = (speaker ? "spk" + std::to_string(*speaker) : std::string("spk")) + "-" +
                 hex_id(seed);
  clip.source_id = speaker.value_or(0);
  return clip;
}

SourceClip synth_noise(NoiseKind kind, double duration_s, std::uint64_t seed,
                       int sample_rate_hz) {
  const std::size_t n = num_samples(duration_s, sample_rate_hz);
  const double fs = sample_rate_hz;
  Rng rng = make_rng(seed, std::string("noise/") + std::string(noise_kind_name(kind)));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(n, 0.0);

  switch (kind) {
    case NoiseKind::kSiren: {
      const double center = uniform(rng, 900.0, 1500.0);
      const double depth = uniform(rng, 250.0, 550.0);
      const double rate = uniform(rng, 0.3, 1.2);
      const double lfo_phase = uniform(rng, 0.0, kTwoPi);
      double phase = uniform(rng, 0.0, kTwoPi);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double f = center + depth * std::sin(kTwoPi * rate * t + lfo_phase);
        phase += kTwoPi * f / fs;
        if (phase > kTwoPi) phase -= kTwoPi;
        out[i] = std::sin(phase) + 0.15 * std::sin(2.0 * phase);
      }
      break;
    }
    case NoiseKind::kJackhammer: {
      const double strike_rate = uniform(rng, 16.0, 28.0);
      const double tau = uniform(rng, 0.002, 0.005) * fs;
      const double ring_hz = uniform(rng, 1800.0, 3200.0);
      Biquad body = Biquad::highpass(300.0, fs);
      bool on = uniform(rng, 0.0, 1.0) < 0.7;
      auto segment_end = static_cast<std::size_t>(uniform(rng, 0.2, 0.7) * fs);
      double since_strike = 1e9;
      const double period = fs / strike_rate;
      for (std::size_t i = 0; i < n; ++i) {
        if (i >= segment_end) {
          on = !on;
          segment_end = i + static_cast<std::size_t>((on ? uniform(rng, 0.3, 0.8)
                                                         : uniform(rng, 0.1, 0.35)) * fs);
        }
        since_strike += 1.0;
        if (on && since_strike >= period) since_strike = 0.0;
        const double decay = std::exp(-since_strike / tau);
        const double ring = std::sin(kTwoPi * ring_hz * since_strike / fs);
        out[i] = body(decay * (gauss(rng) + 0.8 * ring));
      }
      break;
    }
    case NoiseKind::kEngine: {
      const double firing = uniform(rng, 25.0, 45.0);
      const double drift = uniform(rng, 0.03, 0.12);
      const double drift_rate = uniform(rng, 0.1, 0.4);
      std::vector<double> harmonic_phase(10);
      for (double& p : harmonic_phase) p = uniform(rng, 0.0, kTwoPi);
      Biquad rumble = Biquad::lowpass(180.0, fs);
      Biquad rumble2 = Biquad::lowpass(180.0, fs);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double f = firing * (1.0 + drift * std::sin(kTwoPi * drift_rate * t));
        double v = 0.0;
        for (std::size_t h = 0; h < harmonic_phase.size(); ++h) {
          harmonic_phase[h] += kTwoPi * static_cast<double>(h + 1) * f / fs;
          v += std::sin(harmonic_phase[h]) / static_cast<double>(h + 1);
        }
        out[i] = v + 6.0 * rumble2(rumble(gauss(rng)));
      }
      break;
    }
    case NoiseKind::kCrowd: {
      // Paul Kellet's economy pink filter on white noise, then band-limited.
      double b0 = 0, b1 = 0, b2 = 0;
      Biquad hp = Biquad::highpass(150.0, fs);
      Biquad lp = Biquad::lowpass(4000.0, fs);
      const double sway_rate = uniform(rng, 0.5, 2.0);
      const double sway_phase = uniform(rng, 0.0, kTwoPi);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = gauss(rng);
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        const double pink = b0 + b1 + b2 + w * 0.1848;
        const double t = static_cast<double>(i) / fs;
        const double sway = 1.0 + 0.3 * std::sin(kTwoPi * sway_rate * t + sway_phase);
        out[i] = sway * lp(hp(pink));
      }
      break;
    }
  }

  normalize(out);
  SourceClip clip;
  clip.waveform = dsp::Waveform{std::move(out), sample_rate_hz};
  clip.class_id = noise_class_id(kind);
  clip.clip_id = std::string(noise_kind_name(kind)) + "-" + hex_id(seed);
  clip.source_id = 0;
  return clip;
}

SourceClip synth_band_source(double lo_hz, double hi_hz, double duration_s, std::uint64_t seed,
                             int sample_rate_hz) {
  if (!(lo_hz > 0.0 && hi_hz > lo_hz && hi_hz < 0.5 * sample_rate_hz)) {
    throw Error(Errc::kInvalidArgument, "band must satisfy 0 < lo < hi < nyquist");
  }
  const std::size_t n = num_samples(duration_s, sample_rate_hz);
  const double fs = sample_rate_hz;
  Rng rng = make_rng(seed, "band-source");
  std::vector<double> out(n, 0.0);
  constexpr int kTones = 6;
  const double width = hi_hz - lo_hz;
  for (int k = 0; k < kTones; ++k) {
    // Glide stays inside the band: center +- depth with margin.
    const double depth = uniform(rng, 0.0, 0.1) * width;
    const double center = uniform(rng, lo_hz + depth, hi_hz - depth);
    const double glide_rate = uniform(rng, 0.2, 1.0);
    const double glide_phase = uniform(rng, 0.0, kTwoPi);
    const double am_rate = uniform(rng, 2.0, 6.0);
    const double am_phase = uniform(rng, 0.0, kTwoPi);
    const double level = uniform(rng, 0.5, 1.0);
    double phase = uniform(rng, 0.0, kTwoPi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      phase += kTwoPi * (center + depth * std::sin(kTwoPi * glide_rate * t + glide_phase)) / fs;
      if (phase > kTwoPi) phase -= kTwoPi;
      const double am = 0.6 + 0.4 * std::sin(kTwoPi * am_rate * t + am_phase);
      out[i] += level * am * std::sin(phase);
    }
  }
  normalize(out);
  SourceClip clip;
  clip.waveform = dsp::Waveform{std::move(out), sample_rate_hz};
  clip.class_id = kSpeechClass;
  clip.clip_id = "band" + std::to_string(static_cast<int>(lo_hz)) + "-" +
                 std::to_string(static_cast<int>(hi_hz)) + "-" + hex_id(seed);
  return clip;
}

SourceClip synth_noise(std::string_view kind, double duration_s, std::uint64_t seed,
                       int sample_rate_hz) {
  return synth_noise(parse_noise_kind(kind), duration_s, seed, sample_rate_hz);
}

}  // namespace scesep::mix
