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
#include <set>
#include <sstream>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"
#include "scesep/mix/manifest.hpp"
#include "scesep/mix/mixture.hpp"
#include "scesep/mix/synth.hpp"

namespace scesep::mix {
namespace {

TEST(Random, StreamsAreDeterministicAndDistinct) {
  EXPECT_EQ(stream_seed(7, "a"), stream_seed(7, "a"));
  EXPECT_NE(stream_seed(7, "a"), stream_seed(7, "b"));
  EXPECT_NE(stream_seed(7, "a"), stream_seed(8, "a"));
  EXPECT_NE(stream_seed(7, "a", 0), stream_seed(7, "a", 1));
  Rng r1 = make_rng(3, "x"), r2 = make_rng(3, "x");
  EXPECT_EQ(r1(), r2());
}

TEST(Synth, SourcesAreZeroMeanUnitPowerAndDeterministic) {
  const auto a = synth_speechlike(2.5, 11, 3);
  const auto b = synth_speechlike(2.5, 11, 3);
  EXPECT_EQ(a.waveform.samples, b.waveform.samples);
  EXPECT_EQ(a.waveform.size(), 25000u);
  for (NoiseKind k : kAllNoiseKinds) {
    const auto n = synth_noise(k, 2.0, 5);
    double mean = 0.0;
    for (double x : n.waveform.samples) mean += x;
    EXPECT_NEAR(mean / n.waveform.size(), 0.0, 1e-12);
    EXPECT_NEAR(dsp::power(n.waveform.samples), 1.0, 1e-12);
    EXPECT_EQ(n.class_id, noise_class_id(k));
  }
  EXPECT_NEAR(dsp::power(a.waveform.samples), 1.0, 1e-12);
}

TEST(Synth, NoiseKindNames) {
  for (NoiseKind k : kAllNoiseKinds) EXPECT_EQ(parse_noise_kind(noise_kind_name(k)), k);
  try {
    parse_noise_kind("dog_bark");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnknownKind);
  }
  EXPECT_THROW(noise_kind_from_class(0), Error);
}

TEST(Labels, OneHotWithTiesToLowestIndex) {
  dsp::ComplexSpectrogram a(2, 3), b(2, 3);
  a(0, 0) = 1.0;
  b(0, 0) = 2.0;
  a(0, 1) = 3.0;
  b(0, 1) = {0.0, 3.0};  // equal magnitude
  const LabelTensor y = make_labels({a, b});
  EXPECT_EQ(y.dominant(0, 0), 1u);
  EXPECT_EQ(y.dominant(0, 1), 0u);
  EXPECT_EQ(y.dominant(1, 2), 0u);  // all-zero bin
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t f = 0; f < 3; ++f) {
      EXPECT_EQ((y(t, f, 0) + 1) / 2 + (y(t, f, 1) + 1) / 2, 1);
    }
  }
  dsp::ComplexSpectrogram c(3, 3);
  EXPECT_THROW(make_labels({a, c}), Error);
}

TEST(Mixture, HitsTargetSnrAndSumsSources) {
  const auto s = synth_speechlike(2.5, 1, 0);
  const auto n = synth_noise(NoiseKind::kEngine, 2.5, 2);
  for (double snr : {-5.0, 0.0, 3.7, 5.0}) {
    const MixRecord r = mix_at_snr(s, n, snr, 99);
    EXPECT_NEAR(measured_snr_db(r), snr, 1e-9);
    ASSERT_EQ(r.mixture.size(), 20000u);
    for (std::size_t i = 0; i < r.mixture.size(); ++i) {
      EXPECT_DOUBLE_EQ(r.mixture.samples[i], r.sources[0].samples[i] + r.sources[1].samples[i]);
    }
    EXPECT_EQ(r.labels.frames(), 78u);
    EXPECT_EQ(r.mixture_spec.frames(), 78u);
  }
}

TEST(Mixture, SpeechKeepsUnitGain) {
  const auto s = synth_speechlike(2.0, 1, 0);
  const auto n = synth_noise(NoiseKind::kSiren, 2.0, 2);
  const MixRecord r = mix_at_snr(s, n, 2.0, 1);
  EXPECT_EQ(r.sources[0].samples, s.waveform.samples);
}

TEST(Mixture, RejectsSilentAndShort) {
  auto s = synth_speechlike(2.5, 1, 0);
  auto n = synth_noise(NoiseKind::kCrowd, 2.5, 2);
  SourceClip silent = n;
  std::fill(silent.waveform.samples.begin(), silent.waveform.samples.end(), 0.0);
  try {
    mix_at_snr(s, silent, 0.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSilentSource);
  }
  SourceClip shorty = n;
  shorty.waveform.samples.resize(1000);
  try {
    mix_at_snr(s, shorty, 0.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTooShort);
  }
}

TEST(Manifest, PlanIsDeterministicAndInRange) {
  CorpusConfig cfg;
  const auto a = plan_corpus(10, 3, 4, 7, cfg);
  const auto b = plan_corpus(10, 3, 4, 7, cfg);
  std::ostringstream sa, sb;
  write_manifest(sa, a);
  write_manifest(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.size(), 17u);
  std::set<std::string> ids;
  for (const auto& e : a) {
    EXPECT_GE(e.snr_db, -5.0);
    EXPECT_LE(e.snr_db, 5.0);
    EXPECT_TRUE(ids.insert(e.clip_id).second);
  }
  const auto c = plan_corpus(10, 3, 4, 8, cfg);
  std::ostringstream sc;
  write_manifest(sc, c);
  EXPECT_NE(sa.str(), sc.str());
}

TEST(Manifest, RoundTripAndRealize) {
  CorpusConfig cfg;
  const auto plan = plan_corpus(3, 1, 1, 5, cfg);
  std::stringstream ss;
  write_manifest(ss, plan);
  const auto back = read_manifest(ss);
  ASSERT_EQ(back.size(), plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    EXPECT_EQ(back[i].clip_id, plan[i].clip_id);
    EXPECT_EQ(back[i].source_spec, plan[i].source_spec);
    EXPECT_EQ(back[i].seed, plan[i].seed);
    EXPECT_EQ(back[i].snr_db, plan[i].snr_db);
    EXPECT_EQ(back[i].split, plan[i].split);
  }
  const MixRecord r1 = realize(back[0], cfg), r2 = realize(plan[0], cfg);
  EXPECT_EQ(r1.mixture.samples, r2.mixture.samples);
  EXPECT_NEAR(r1.snr_db, plan[0].snr_db, 0.0);
  EXPECT_EQ(r1.source_ids.size(), 2u);
  EXPECT_LT(r1.source_ids[0], cfg.n_speakers);
  EXPECT_GE(r1.source_ids[1], cfg.n_speakers);
  EXPECT_LT(r1.source_ids[1], cfg.num_source_ids());
}

TEST(Manifest, MalformedLineIsFormatError) {
  std::stringstream ss("only\tthree\tfields\n");
  EXPECT_THROW(read_manifest(ss), Error);
}

}  // namespace
}  // namespace scesep::mix
