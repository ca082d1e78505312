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
#include <filesystem>
#include <limits>
#include <random>

#include "scesep/common/error.hpp"
#include "scesep/snmf/snmf.hpp"

namespace scesep::snmf {
namespace {

Matrix abs_gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::abs(g(rng));
  return m;
}

Matrix unit_columns(Matrix w) {
  for (Eigen::Index r = 0; r < w.cols(); ++r) w.col(r) /= w.col(r).norm();
  return w;
}

TEST(TrimSilence, DropsZeroFrames) {
  Matrix m = Matrix::Constant(6, 4, 0.5);
  m.row(1).setZero();
  m.row(4).setZero();
  const Matrix t = trim_silence(m);
  ASSERT_EQ(t.rows(), 4);
  EXPECT_EQ(t, Matrix::Constant(4, 4, 0.5));
}

TEST(TrimSilence, BoundaryThresholds) {
  Matrix m = Matrix::Constant(3, 2, 0.1);
  m.row(2).setZero();
  EXPECT_EQ(trim_silence(Matrix::Constant(3, 2, 0.1)).rows(), 3);
  EXPECT_EQ(trim_silence(m, -std::numeric_limits<double>::infinity()).rows(), 3);
  try {
    trim_silence(m, std::numeric_limits<double>::infinity());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kAllTrimmed);
  }
}

TEST(Factorize, ExactFactorizationIsFixedPoint) {
  std::mt19937_64 rng(1);
  const Matrix w = unit_columns(abs_gaussian(10, 3, rng));
  const Matrix h = abs_gaussian(3, 20, rng);
  SnmfConfig cfg;
  cfg.mu = 0.0;
  cfg.rank = 3;
  const Factorization f = factorize(w * h, w, h, cfg);
  EXPECT_NEAR(f.objective_history.back(), 0.0, 1e-20);
  EXPECT_LT((f.w * f.h - w * h).norm(), 1e-10);
}

TEST(Factorize, RecoversRankOne) {
  std::mt19937_64 rng(2);
  const Matrix w = unit_columns(abs_gaussian(30, 1, rng));
  const Matrix h = abs_gaussian(1, 50, rng);
  SnmfConfig cfg;
  cfg.rank = 1;
  cfg.mu = 0.0;
  cfg.max_iters = 500;
  cfg.tol = 0.0;
  const Factorization f = factorize(w * h, unit_columns(abs_gaussian(30, 1, rng)),
                                    abs_gaussian(1, 50, rng), cfg);
  const double cosine = f.w.col(0).dot(w.col(0)) / (f.w.col(0).norm() * w.col(0).norm());
  EXPECT_GT(cosine, 0.999);
}

TEST(Factorize, LargeMuDrivesActivationsTowardZero) {
  std::mt19937_64 rng(3);
  const Matrix v = abs_gaussian(20, 40, rng);
  const Matrix w0 = unit_columns(abs_gaussian(20, 4, rng));
  const Matrix h0 = abs_gaussian(4, 40, rng);
  SnmfConfig free;
  free.rank = 4;
  free.mu = 0.0;
  SnmfConfig sparse = free;
  sparse.mu = 1e3 * v.mean();
  const double l1_free = factorize(v, w0, h0, free).h.sum();
  const double l1_sparse = factorize(v, w0, h0, sparse).h.sum();
  EXPECT_LT(l1_sparse, 0.01 * l1_free);
}

TEST(Factorize, ObjectiveNeverIncreases) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const Eigen::Index F = 5 + Eigen::Index(seed % 7), T = 8 + Eigen::Index(seed % 5);
    const Eigen::Index R = 1 + Eigen::Index(seed % 4);
    SnmfConfig cfg;
    cfg.rank = std::size_t(R);
    cfg.mu = 0.05 * double(seed % 5);
    cfg.max_iters = 100;
    cfg.tol = 0.0;
    const Factorization f = factorize(abs_gaussian(F, T, rng), unit_columns(abs_gaussian(F, R, rng)),
                                      abs_gaussian(R, T, rng), cfg);
    for (std::size_t i = 1; i < f.objective_history.size(); ++i) {
      ASSERT_LE(f.objective_history[i], f.objective_history[i - 1] + 1e-10) << "seed " << seed;
    }
    EXPECT_GE(f.w.minCoeff(), 0.0);
    EXPECT_GE(f.h.minCoeff(), 0.0);
    for (Eigen::Index r = 0; r < R; ++r) EXPECT_NEAR(f.w.col(r).norm(), 1.0, 1e-9);
  }
}

TEST(Factorize, NegativeInputRejected) {
  Matrix v = Matrix::Ones(3, 3);
  v(1, 1) = -1.0;
  try {
    factorize(v, Matrix::Ones(3, 1), Matrix::Ones(1, 3), SnmfConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNegativeInput);
  }
}

TEST(NormalizeColumns, KeepsProductInvariant) {
  std::mt19937_64 rng(4);
  Matrix w = abs_gaussian(12, 5, rng) * 3.0, h = abs_gaussian(5, 9, rng);
  const Matrix before = w * h;
  normalize_columns(w, h);
  EXPECT_LT((w * h - before).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FitDictionary, UnitColumnsAndDeterministic) {
  std::mt19937_64 rng(5);
  std::vector<Matrix> clips{abs_gaussian(30, 16, rng), abs_gaussian(25, 16, rng)};
  SnmfConfig cfg;
  cfg.rank = 6;
  const Dictionary a = fit_dictionary(clips, 2, cfg, 9);
  const Dictionary b = fit_dictionary(clips, 2, cfg, 9);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.class_id, 2);
  EXPECT_GE(a.w.minCoeff(), 0.0);
  for (Eigen::Index r = 0; r < 6; ++r) EXPECT_NEAR(a.w.col(r).norm(), 1.0, 1e-9);
}

// Speech atoms live on bins 0..9, noise atoms on 10..19.
std::pair<Dictionary, Dictionary> disjoint_dicts(std::mt19937_64& rng) {
  Matrix ws = Matrix::Zero(20, 4), wn = Matrix::Zero(20, 4);
  ws.topRows(10) = abs_gaussian(10, 4, rng);
  wn.bottomRows(10) = abs_gaussian(10, 4, rng);
  return {Dictionary{unit_columns(ws), 0}, Dictionary{unit_columns(wn), 1}};
}

TEST(Separate, DisjointSpanMixture) {
  std::mt19937_64 rng(6);
  const auto [ws, wn] = disjoint_dicts(rng);
  const Matrix x = (ws.w * abs_gaussian(4, 15, rng)).transpose();  // T x F
  SnmfConfig cfg;
  cfg.mu = 0.0;
  const Separation s = separate(x, ws, wn, cfg);
  for (Eigen::Index t = 0; t < 15; ++t) {
    for (Eigen::Index f = 0; f < 10; ++f) {
      if (x(t, f) > 1e-6) EXPECT_GT(s.mask.at({std::size_t(t), std::size_t(f), 0}), 0.9);
    }
  }
  for (std::size_t i = 0; i < s.mask.size() / 2; ++i) {
    EXPECT_NEAR(s.mask[2 * i] + s.mask[2 * i + 1], 1.0, 1e-12);
  }
}

TEST(Separate, ZeroBinsSplitEvenly) {
  std::mt19937_64 rng(7);
  const auto [ws, wn] = disjoint_dicts(rng);
  const Separation s = separate(Matrix::Zero(3, 20), ws, wn, SnmfConfig{});
  for (double m : s.mask.values()) EXPECT_DOUBLE_EQ(m, 0.5);
}

TEST(Dictionary, SaveLoadAndConcat) {
  std::mt19937_64 rng(8);
  const Dictionary d{unit_columns(abs_gaussian(7, 3, rng)), 3};
  const auto p = std::filesystem::temp_directory_path() / "scesep_dict.snmf";
  save_dictionary(p, d, SnmfConfig{});
  const Dictionary back = load_dictionary(p);
  EXPECT_EQ(back.w, d.w);
  EXPECT_EQ(back.class_id, 3);
  const std::vector<Dictionary> both{d, back};
  EXPECT_EQ(concat(both, 1).rank(), 6u);
}

}  // namespace
}  // namespace scesep::snmf
