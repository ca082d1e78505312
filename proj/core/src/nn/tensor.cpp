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

#include "scesep/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "scesep/common/error.hpp"

namespace scesep::nn {

namespace {

std::size_t product(const Shape& s) {
  return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

std::string shape_string(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), data_(product(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (product(shape_) != data_.size()) {
    throw Error(Errc::kShapeMismatch, "shape " + shape_string(shape_) + " does not hold " +
                                          std::to_string(data_.size()) + " elements");
  }
}

Tensor Tensor::reshaped(Shape shape) const {
  if (product(shape) != data_.size()) {
    throw Error(Errc::kShapeMismatch,
                "cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

MatrixMap Tensor::matrix(std::size_t rows, std::size_t cols) {
  if (rows * cols != data_.size()) throw Error(Errc::kShapeMismatch, "bad matrix view");
  return MatrixMap(data_.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

ConstMatrixMap Tensor::matrix(std::size_t rows, std::size_t cols) const {
  if (rows * cols != data_.size()) throw Error(Errc::kShapeMismatch, "bad matrix view");
  return ConstMatrixMap(data_.data(), static_cast<Eigen::Index>(rows),
                        static_cast<Eigen::Index>(cols));
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != shape_.size()) throw Error(Errc::kShapeMismatch, "index rank mismatch");
  std::size_t off = 0;
  std::size_t axis = 0;
  for (std::size_t i : idx) {
    if (i >= shape_[axis]) throw Error(Errc::kShapeMismatch, "index out of range");
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

void expect_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    throw Error(Errc::kShapeMismatch, std::string(what) + " expects rank " +
                                          std::to_string(rank) + ", got " +
                                          shape_string(t.shape()));
  }
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid(double z) noexcept {
  return -(std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z))));
}

}  // namespace scesep::nn
