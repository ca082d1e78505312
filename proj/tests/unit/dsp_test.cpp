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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "scesep/common/error.hpp"
#include "scesep/dsp/feature.hpp"
#include "scesep/dsp/stft.hpp"
#include "scesep/dsp/waveform.hpp"
#include "test_util.hpp"

namespace scesep::dsp {
namespace {

using scesep::testing::random_waveform;
using scesep::testing::rel_l2;
using scesep::testing::sine;

TEST(Waveform, StandardizeGivesZeroMeanUnitVariance) {
  Waveform w = random_waveform(1000, 3);
  for (double& x : w.samples) x = 3.0 * x + 7.0;
  const Waveform s = standardize(w);
  double mean = 0.0;
  for (double x : s.samples) mean += x;
  mean /= 1000.0;
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(power(s.samples), 1.0, 1e-12);
}

TEST(Waveform, StandardizeRejectsConstantAndShort) {
  Waveform c{std::vector<double>(50, 2.5)};
  try {
    standardize(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kConstantSignal);
  }
  Waveform one{{1.0}};
  try {
    standardize(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTooShort);
  }
}

TEST(Waveform, ValidateRejectsNonFinite) {
  Waveform w{{0.0, std::nan(""), 1.0}};
  EXPECT_THROW(validate(w), Error);
}

TEST(Resample, LengthAndIdentity) {
  const Waveform w = random_waveform(16000, 5, 16000);
  EXPECT_EQ(resample(w, 10000).size(), 10000u);
  EXPECT_EQ(resample(w, 16000).samples, w.samples);
  const Waveform odd = random_waveform(44101, 6, 44100);
  EXPECT_EQ(resample(odd, 10000).size(), 44101u * 10000u / 44100u);
}

TEST(Resample, PreservesInBandSine) {
  const Waveform w = sine(440.0, 16000, 16000);
  const Waveform r = resample(w, 10000);
  const Waveform ref = sine(440.0, 10000, 10000);
  // Skip the kernel's edge region.
  double err = 0.0;
  for (std::size_t i = 100; i < 9900; ++i) err = std::max(err, std::abs(r.samples[i] - ref.samples[i]));
  EXPECT_LT(err, 1e-2);
}

TEST(Stft, ShapeForTwoSecondClip) {
  const ComplexSpectrogram s = stft(random_waveform(20000, 1));
  EXPECT_EQ(s.frames(), 78u);
  EXPECT_EQ(s.bins(), 257u);
  EXPECT_EQ(StftConfig{}.num_frames(20000), 78u);
}

TEST(Stft, UncenteredFrameCount) {
  StftConfig cfg;
  cfg.center = false;
  EXPECT_EQ(stft(random_waveform(20000, 1), cfg).frames(), (20000u - 512u) / 256u + 1u);
}

TEST(Stft, HannWindowIsPeriodic) {
  const auto w = hann_window(512);
  EXPECT_DOUBLE_EQ(w[0], 0.0);
  EXPECT_NEAR(w[256], 1.0, 1e-15);
  EXPECT_NEAR(w[1], w[511], 1e-15);
}

TEST(Stft, RoundTrip) {
  const Waveform w = random_waveform(20000, 3);
  const Waveform r = istft(stft(w));
  ASSERT_EQ(r.size(), w.size());
  EXPECT_LT(rel_l2(r.samples, w.samples), 1e-10);
}

TEST(Stft, RoundTripInteriorAnyLength) {
  // trailing samples past the last full frame are not analysed
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Waveform w = random_waveform(20000 + 37 * seed, seed);
    const Waveform r = istft(stft(w));
    ASSERT_EQ(r.size(), w.size());
    const std::vector<double> a(r.samples.begin() + 256, r.samples.end() - 256);
    const std::vector<double> b(w.samples.begin() + 256, w.samples.end() - 256);
    EXPECT_LT(rel_l2(a, b), 1e-10);
  }
}

TEST(Stft, Linearity) {
  const Waveform a = random_waveform(5000, 1), b = random_waveform(5000, 2);
  Waveform sum = a;
  for (std::size_t i = 0; i < sum.size(); ++i) sum.samples[i] = 2.0 * a.samples[i] - 0.5 * b.samples[i];
  const auto sa = stft(a), sb = stft(b), ss = stft(sum);
  double err = 0.0;
  for (std::size_t i = 0; i < ss.values().size(); ++i) {
    err = std::max(err, std::abs(ss.values()[i] - (2.0 * sa.values()[i] - 0.5 * sb.values()[i])));
  }
  EXPECT_LT(err, 1e-9);
}

TEST(Stft, SineLandsInExpectedBin) {
  // 1000 Hz at 10 kHz with a 512 window: bin 51.2.
  const auto s = stft(sine(1000.0, 8000));
  std::size_t best = 0;
  for (std::size_t f = 0; f < s.bins(); ++f) {
    if (std::abs(s(10, f)) > std::abs(s(10, best))) best = f;
  }
  EXPECT_EQ(best, 51u);
}

TEST(Stft, TooShortThrows) {
  try {
    stft(random_waveform(100, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTooShort);
  }
}

TEST(Stft, IstftRejectsWrongBins) {
  ComplexSpectrogram s(10, 100, 3000);
  EXPECT_THROW(istft(s), Error);
}

TEST(Feature, CompressNormalizesToUnitMax) {
  const auto feat = compress(stft(random_waveform(4000, 9)));
  double mx = 0.0;
  for (double m : feat.mag) {
    EXPECT_GE(m, 0.0);
    mx = std::max(mx, m);
  }
  EXPECT_DOUBLE_EQ(mx, 1.0);
}

TEST(Feature, SilentInputKeepsUnitScale) {
  const auto feat = compress(stft(Waveform{std::vector<double>(4000, 0.0)}));
  EXPECT_EQ(feat.norm_scale, 1.0);
  for (double m : feat.mag) EXPECT_EQ(m, 0.0);
}

TEST(Feature, UncompressInvertsCompress) {
  const auto s = stft(random_waveform(4000, 4));
  const auto back = uncompress(compress(s));
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < s.values().size(); ++i) {
    err = std::max(err, std::abs(back.values()[i] - s.values()[i]));
    ref = std::max(ref, std::abs(s.values()[i]));
  }
  EXPECT_LT(err, 1e-12 * ref);
}

TEST(Feature, CompressIsScaleInvariant) {
  Waveform w = random_waveform(4000, 8);
  const auto a = compress(stft(w));
  for (double& x : w.samples) x *= 37.0;
  const auto b = compress(stft(w));
  for (std::size_t i = 0; i < a.mag.size(); ++i) EXPECT_NEAR(a.mag[i], b.mag[i], 1e-12);
}

}  // namespace
}  // namespace scesep::dsp
