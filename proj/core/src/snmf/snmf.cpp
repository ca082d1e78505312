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

#include "scesep/snmf/snmf.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"
#include "scesep/io/container.hpp"

namespace scesep::snmf {
namespace {

constexpr double kTiny = 1e-300;

void require_nonnegative(const Matrix& m, const char* what) {
  if (m.size() > 0 && !(m.minCoeff() >= 0.0)) {
    throw Error(Errc::kNegativeInput, std::string(what) + " has negative entries");
  }
}

// Scalar that best fits alpha * W H to V; used to start H at the data scale.
double fit_scale(const Matrix& v, const Matrix& wh) {
  const double den = wh.squaredNorm();
  if (den <= 0.0) return 1.0;
  const double a = (v.array() * wh.array()).sum() / den;
  return a > 0.0 ? a : 1.0;
}

void update_h(const Matrix& v, const Matrix& w, Matrix& h, double mu) {
  const Matrix num = w.transpose() * v;
  const Matrix den = (w.transpose() * w) * h;
  h.array() *= num.array() / (den.array() + mu + kTiny);
}

void update_w(const Matrix& v, Matrix& w, const Matrix& h) {
  const Matrix num = v * h.transpose();
  const Matrix den = w * (h * h.transpose());
  w.array() *= num.array() / (den.array() + kTiny);
}

}  // namespace

void SnmfConfig::validate() const {
  if (rank < 1) throw Error(Errc::kInvalidArgument, "snmf rank must be >= 1");
  if (!(mu >= 0.0)) throw Error(Errc::kInvalidArgument, "snmf mu must be >= 0");
  if (max_iters < 1) throw Error(Errc::kInvalidArgument, "snmf max_iters must be >= 1");
}

double objective(const Matrix& v, const Matrix& w, const Matrix& h, double mu) {
  return 0.5 * (v - w * h).squaredNorm() + mu * h.sum();
}

Matrix trim_silence(const Matrix& mag, double threshold) {
  if (mag.size() == 0) throw Error(Errc::kInvalidArgument, "trim_silence on empty input");
  if (threshold == -std::numeric_limits<double>::infinity()) return mag;
  const Eigen::VectorXd peaks = mag.rowwise().maxCoeff();
  const double floor = std::log10(peaks.maxCoeff()) + threshold;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < mag.rows(); ++t) {
    if (std::log10(peaks[t]) > floor) keep.push_back(t);
  }
  if (keep.empty()) throw Error(Errc::kAllTrimmed, "every frame fell below the threshold");
  Matrix out(static_cast<Eigen::Index>(keep.size()), mag.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = mag.row(keep[i]);
  }
  return out;
}

void normalize_columns(Matrix& w, Matrix& h) {
  for (Eigen::Index r = 0; r < w.cols(); ++r) {
    const double n = w.col(r).norm();
    if (n <= 0.0) continue;
    w.col(r) /= n;
    h.row(r) *= n;
  }
}

Factorization factorize(const Matrix& v, Matrix w0, Matrix h0, const SnmfConfig& cfg,
                        bool update_dict) {
  cfg.validate();
  require_nonnegative(v, "V");
  require_nonnegative(w0, "W");
  require_nonnegative(h0, "H");
  if (w0.rows() != v.rows() || h0.cols() != v.cols() || w0.cols() != h0.rows()) {
    throw Error(Errc::kShapeMismatch, "factorization shapes do not agree");
  }
  Factorization f;
  f.w = std::move(w0);
  f.h = std::move(h0);
  double obj = objective(v, f.w, f.h, cfg.mu);
  f.objective_history.push_back(obj);

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    update_h(v, f.w, f.h, cfg.mu);
    if (update_dict) {
      const double after_h = objective(v, f.w, f.h, cfg.mu);
      Matrix w = f.w;
      Matrix h = f.h;
      update_w(v, w, h);
      normalize_columns(w, h);
      // Renormalizing can inflate the l1 term past what the W step saved.
      if (objective(v, w, h, cfg.mu) <= after_h) {
        f.w = std::move(w);
        f.h = std::move(h);
      } else {
        ++f.rejected_w_steps;
      }
    }
    const double next = objective(v, f.w, f.h, cfg.mu);
    f.objective_history.push_back(next);
    ++f.iterations;
    const double change = std::abs(obj - next) / std::max(std::abs(obj), kTiny);
    obj = next;
    if (change < cfg.tol) {
      f.converged = true;
      break;
    }
  }
  return f;
}

Matrix to_matrix(std::span<const double> mag, std::size_t frames, std::size_t bins) {
  if (mag.size() != frames * bins) {
    throw Error(Errc::kShapeMismatch, "magnitude size does not match T x F");
  }
  return Eigen::Map<const nn::RowMatrix>(mag.data(), static_cast<Eigen::Index>(frames),
                                         static_cast<Eigen::Index>(bins));
}

Dictionary fit_dictionary(std::span<const Matrix> training_mags, int class_id,
                          const SnmfConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (training_mags.empty()) throw Error(Errc::kEmptyCorpus, "no training magnitudes");
  const Eigen::Index bins = training_mags.front().cols();
  std::vector<Matrix> kept;
  Eigen::Index frames = 0;
  for (const Matrix& m : training_mags) {
    if (m.cols() != bins) throw Error(Errc::kShapeMismatch, "clips differ in bin count");
    require_nonnegative(m, "training magnitude");
    kept.push_back(trim_silence(m, cfg.trim_threshold));
    frames += kept.back().rows();
  }
  Matrix v(bins, frames);  // F x T
  Eigen::Index col = 0;
  for (const Matrix& m : kept) {
    v.middleCols(col, m.rows()) = m.transpose();
    col += m.rows();
  }

  const auto R = static_cast<Eigen::Index>(cfg.rank);
  Rng rng = make_rng(seed, "snmf/init", static_cast<std::uint64_t>(class_id));
  std::normal_distribution<double> normal;
  Matrix w(bins, R), h(R, frames);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = std::abs(normal(rng));
  for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = std::abs(normal(rng));
  for (Eigen::Index r = 0; r < R; ++r) w.col(r) /= w.col(r).norm();
  h *= fit_scale(v, w * h);

  Factorization f = factorize(v, std::move(w), std::move(h), cfg, true);
  return Dictionary{std::move(f.w), class_id};
}

Separation separate(const Matrix& x_mag, const Dictionary& speech, const Dictionary& noise,
                    const SnmfConfig& cfg) {
  require_nonnegative(x_mag, "mixture magnitude");
  if (speech.bins() != static_cast<std::size_t>(x_mag.cols()) ||
      noise.bins() != speech.bins()) {
    throw Error(Errc::kShapeMismatch, "dictionary bins do not match the mixture");
  }
  const Eigen::Index rs = speech.w.cols(), rn = noise.w.cols();
  Matrix w(speech.w.rows(), rs + rn);
  w << speech.w, noise.w;
  const Matrix v = x_mag.transpose();
  Matrix h = Matrix::Ones(rs + rn, v.cols());
  h *= fit_scale(v, w * h);

  Factorization f = factorize(v, w, std::move(h), cfg, false);
  const Matrix vs = speech.w * f.h.topRows(rs);
  const Matrix vn = noise.w * f.h.bottomRows(rn);

  const auto T = static_cast<std::size_t>(x_mag.rows());
  const auto F = static_cast<std::size_t>(x_mag.cols());
  Separation out;
  out.mask = nn::Tensor({T, F, 2});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t fb = 0; fb < F; ++fb) {
      const auto fi = static_cast<Eigen::Index>(fb), ti = static_cast<Eigen::Index>(t);
      const double s = vs(fi, ti);
      const double ms = (s + kMaskEpsilon) / (s + vn(fi, ti) + 2.0 * kMaskEpsilon);
      out.mask[(t * F + fb) * 2] = ms;
      out.mask[(t * F + fb) * 2 + 1] = 1.0 - ms;
    }
  }
  out.h = std::move(f.h);
  out.objective_history = std::move(f.objective_history);
  return out;
}

Dictionary concat(std::span<const Dictionary> dicts, int class_id) {
  if (dicts.empty()) throw Error(Errc::kInvalidArgument, "nothing to concatenate");
  Eigen::Index cols = 0;
  for (const auto& d : dicts) {
    if (d.w.rows() != dicts.front().w.rows()) {
      throw Error(Errc::kShapeMismatch, "dictionaries differ in bin count");
    }
    cols += d.w.cols();
  }
  Dictionary out{Matrix(dicts.front().w.rows(), cols), class_id};
  Eigen::Index at = 0;
  for (const auto& d : dicts) {
    out.w.middleCols(at, d.w.cols()) = d.w;
    at += d.w.cols();
  }
  return out;
}

void save_dictionary(const std::filesystem::path& path, const Dictionary& d,
                     const SnmfConfig& cfg) {
  io::Container c;
  c.magic = io::kDictionaryMagic;
  c.version = 1;
  c.metadata["kind"] = "snmf-dictionary";
  c.metadata["class_id"] = std::to_string(d.class_id);
  c.metadata["rank"] = std::to_string(d.rank());
  c.metadata["bins"] = std::to_string(d.bins());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", cfg.mu);
  c.metadata["mu"] = buf;
  io::NamedTensor t;
  t.name = "W";
  t.dims = {d.bins(), d.rank()};
  const nn::RowMatrix rm = d.w;
  t.data.assign(rm.data(), rm.data() + rm.size());
  c.tensors.push_back(std::move(t));
  io::write_container(path, c);
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  const io::Container c = io::read_container(path, io::kDictionaryMagic, 1);
  const io::NamedTensor& t = c.tensor("W");
  if (t.dims.size() != 2) throw Error(Errc::kFormat, "dictionary W must be rank 2");
  Dictionary d;
  d.class_id = std::stoi(c.meta("class_id"));
  d.w = Eigen::Map<const nn::RowMatrix>(t.data.data(), static_cast<Eigen::Index>(t.dims[0]),
                                        static_cast<Eigen::Index>(t.dims[1]));
  return d;
}

}  // namespace scesep::snmf
