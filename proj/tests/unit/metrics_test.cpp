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
#include <sstream>

#include "scesep/common/error.hpp"
#include "scesep/metrics/report.hpp"
#include "scesep/metrics/sdr.hpp"
#include "test_util.hpp"

namespace scesep::metrics {
namespace {

using dsp::Waveform;
using scesep::testing::random_waveform;

// Noise orthogonal to `ref` with power ref_power / ratio.
Waveform orthogonal_noise(const Waveform& ref, double ratio, std::uint64_t seed) {
  Waveform n = random_waveform(ref.size(), seed);
  double rn = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    rn += ref.samples[i] * n.samples[i];
    rr += ref.samples[i] * ref.samples[i];
  }
  for (std::size_t i = 0; i < ref.size(); ++i) n.samples[i] -= rn / rr * ref.samples[i];
  const double scale = std::sqrt(dsp::power(ref.samples) / ratio / dsp::power(n.samples));
  for (double& x : n.samples) x *= scale;
  return n;
}

Waveform add(const Waveform& a, const Waveform& b) {
  Waveform s = a;
  for (std::size_t i = 0; i < s.size(); ++i) s.samples[i] += b.samples[i];
  return s;
}

TEST(Sdr, PerfectAndScaledEstimatesHitCap) {
  const Waveform r = random_waveform(1000, 1);
  EXPECT_EQ(sdr(r, r), kSdrCap);
  Waveform twice = r;
  for (double& x : twice.samples) x *= 2.0;
  EXPECT_EQ(sdr(r, twice), kSdrCap);
}

TEST(Sdr, OrthogonalNoiseAtOnePercent) {
  const Waveform r = random_waveform(4000, 2);
  EXPECT_NEAR(sdr(r, add(r, orthogonal_noise(r, 100.0, 3))), 20.0, 0.1);
}

TEST(Sdr, ScaleInvariant) {
  const Waveform r = random_waveform(2000, 4);
  const Waveform e = add(r, random_waveform(2000, 5));
  Waveform scaled = e;
  for (double& x : scaled.samples) x *= 3.7;
  EXPECT_NEAR(sdr(r, e), sdr(r, scaled), 1e-10);
}

TEST(Sdr, SilentReferenceAndTruncation) {
  try {
    sdr(Waveform{std::vector<double>(10, 0.0)}, random_waveform(10, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSilentReference);
  }
  const Waveform r = random_waveform(100, 6);
  Waveform longer = r;
  longer.samples.push_back(50.0);
  EXPECT_EQ(sdr(r, longer), kSdrCap);
}

TEST(SdrImprovement, MixtureAsEstimateIsZero) {
  const Waveform s = random_waveform(1000, 1), n = random_waveform(1000, 2);
  const Waveform m = add(s, n);
  EXPECT_EQ(sdr_improvement(m, s, m), 0.0);
  EXPECT_GT(sdr_improvement(m, s, s), 0.0);
  EXPECT_DOUBLE_EQ(sdr_improvement(m, s, s), kSdrCap - sdr(s, m));
}

TEST(BestPermutation, SwappedEstimates) {
  const Waveform a = random_waveform(500, 1), b = random_waveform(500, 2);
  const EvalResult r = best_permutation({a, b}, {b, a});
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(r.per_source_sdr_db, (std::vector<double>{kSdrCap, kSdrCap}));
}

TEST(BestPermutation, SingleSourceIsIdentity) {
  const Waveform a = random_waveform(500, 1);
  EXPECT_EQ(best_permutation({a}, {add(a, random_waveform(500, 3))}).permutation,
            std::vector<std::size_t>{0});
}

TEST(BestPermutation, ConstructedCrossing) {
  const Waveform r0 = random_waveform(4000, 1), r1 = random_waveform(4000, 2);
  // est0 ~ r1 at 20 dB, est1 ~ r0 at 20 dB.
  const Waveform e0 = add(r1, orthogonal_noise(r1, 100.0, 5));
  const Waveform e1 = add(r0, orthogonal_noise(r0, 100.0, 6));
  const EvalResult r = best_permutation({r0, r1}, {e0, e1}, nullptr);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_NEAR(r.per_source_sdr_db[0], 20.0, 0.1);
  EXPECT_NEAR(r.per_source_sdr_db[1], 20.0, 0.1);
}

TEST(BestPermutation, TiesGoToLexicographicallySmallest) {
  const Waveform a = random_waveform(500, 1);
  const EvalResult r = best_permutation({a, a, a}, {a, a, a});
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(BestPermutation, NeverWorseThanIdentity) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<Waveform> refs, ests;
    for (std::uint64_t k = 0; k < 3; ++k) {
      refs.push_back(random_waveform(300, seed * 10 + k));
      ests.push_back(add(refs.back(), random_waveform(300, seed * 10 + k + 100)));
    }
    std::swap(ests[0], ests[2]);
    const EvalResult best = best_permutation(refs, ests);
    double identity = 0.0;
    for (std::size_t k = 0; k < 3; ++k) identity += sdr(refs[k], ests[k]);
    EXPECT_GE(best.mean_sdr(), identity / 3.0 - 1e-12);
  }
}

TEST(BestPermutation, CountMismatch) {
  const Waveform a = random_waveform(100, 1);
  try {
    best_permutation({a, a}, {a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kCountMismatch);
  }
}

EvalResult result(double snr, const std::string& kind, double imp) {
  EvalResult r;
  r.snr_db = snr;
  r.noise_kind = kind;
  r.per_source_sdr_db = {imp, imp};
  r.sdr_improvement_db = {imp, imp + 2.0};
  return r;
}

TEST(Report, SingleResultIsOneRow) {
  const auto rows = report({result(1.2, "siren", 4.0)}, GroupBy::kNoiseKind);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].group, "siren");
  EXPECT_EQ(rows[0].count, 1u);
  EXPECT_DOUBLE_EQ(rows[0].mean_improvement_db, 5.0);
  EXPECT_DOUBLE_EQ(rows[0].median_sdr_db, 4.0);
}

TEST(Report, ElevenSnrBuckets) {
  std::vector<EvalResult> rs;
  for (int i = 0; i <= 100; ++i) rs.push_back(result(-5.0 + 0.1 * i, "crowd", 1.0));
  const auto rows = report(rs, GroupBy::kSnr);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows.front().group, "-5");
  EXPECT_EQ(rows.back().group, "5");
}

TEST(Report, HandAveragedMeans) {
  const auto rows =
      report({result(0, "engine", 1.0), result(0, "engine", 2.0), result(0, "engine", 6.0)},
             GroupBy::kNoiseKind);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].mean_sdr_db, 3.0);
  EXPECT_DOUBLE_EQ(rows[0].median_sdr_db, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_improvement_db, 4.0);
}

TEST(Report, MetricsCsvSchema) {
  EvalResult r = result(-1.5, "siren", 3.0);
  r.clip_id = "test-0001";
  std::ostringstream os;
  write_metrics_csv(os, metrics_rows(r, "sce-mi", "mi"));
  std::istringstream in(os.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "clip_id,algorithm,mode,snr_db,noise_kind,source_idx,sdr_db,sdr_improvement_db");
  EXPECT_EQ(first, "test-0001,sce-mi,mi,-1.500000,siren,0,3.000000,3.000000");
}

}  // namespace
}  // namespace scesep::metrics
