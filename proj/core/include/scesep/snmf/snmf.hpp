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

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "scesep/nn/tensor.hpp"

namespace scesep::snmf {

using Matrix = Eigen::MatrixXd;

struct SnmfConfig {
  std::size_t rank = 32;  // R, basis vectors per class
  double mu = 0.1;        // l1 weight on activations
  std::size_t max_iters = 200;
  double tol = 1e-5;  // relative objective change
  double trim_threshold = -2.0;  // log10 below the global max frame peak

  void validate() const;
};

/// F x R non-negative basis, columns of unit l2 norm.
struct Dictionary {
  Matrix w;
  int class_id = 0;

  std::size_t bins() const noexcept { return static_cast<std::size_t>(w.rows()); }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(w.cols()); }
};

/// 0.5 * ||V - W H||_F^2 + mu * sum(H).
double objective(const Matrix& v, const Matrix& w, const Matrix& h, double mu);

/// Keeps frames (rows of a T x F magnitude) whose peak satisfies
/// log10(peak) > log10(global peak) + threshold. -inf keeps everything.
/// Throws AllTrimmed.
Matrix trim_silence(const Matrix& mag, double threshold = -2.0);

struct Factorization {
  Matrix w;  // F x R
  Matrix h;  // R x T
  // Objective before any update, then after every iteration.
  std::vector<double> objective_history;
  std::size_t iterations = 0;
  std::size_t rejected_w_steps = 0;
  bool converged = false;
};

/// Alternating multiplicative updates on V (F x T) from (w0, h0):
///   H <- H * (W'V) / (W'WH + mu)
///   W <- W * (VH') / (WHH'), then unit columns with H rescaled.
/// A W step whose renormalization would raise the objective is discarded.
/// With update_w false only H moves. Throws NegativeInput.
Factorization factorize(const Matrix& v, Matrix w0, Matrix h0, const SnmfConfig& cfg,
                        bool update_w = true);

/// Scales every column of w to unit norm and the matching row of h by the
/// inverse factor, leaving w * h unchanged. Zero columns are left alone.
void normalize_columns(Matrix& w, Matrix& h);

/// Learns a dictionary from per-clip T x F magnitudes of one class. Each
/// clip is silence-trimmed and the results are concatenated along time.
Dictionary fit_dictionary(std::span<const Matrix> training_mags, int class_id,
                          const SnmfConfig& cfg, std::uint64_t seed);

struct Separation {
  nn::Tensor mask;  // [T, F, 2], speech then noise
  Matrix h;         // activations over [W_s | W_n]
  std::vector<double> objective_history;
};

inline constexpr double kMaskEpsilon = 1e-12;

/// Decomposes a T x F mixture magnitude over the fixed concatenation
/// [W_s | W_n] and returns Wiener-style masks.
Separation separate(const Matrix& x_mag, const Dictionary& speech, const Dictionary& noise,
                    const SnmfConfig& cfg);

/// Column concatenation of several dictionaries.
Dictionary concat(std::span<const Dictionary> dicts, int class_id);

/// Row-major T x F magnitudes as an Eigen matrix.
Matrix to_matrix(std::span<const double> mag, std::size_t frames, std::size_t bins);

void save_dictionary(const std::filesystem::path& path, const Dictionary& d,
                     const SnmfConfig& cfg);
Dictionary load_dictionary(const std::filesystem::path& path);

}  // namespace scesep::snmf
