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

#include "scesep/infer/kmeans.hpp"

#include <limits>
#include <string>

#include "scesep/common/error.hpp"
#include "scesep/common/random.hpp"

namespace scesep::infer {

namespace {

double sq_dist(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

std::vector<double> seed_plus_plus(std::span<const double> pts, std::size_t n, std::size_t dim,
                                   std::size_t k, Rng& rng) {
  std::vector<double> centroids(k * dim);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  const std::size_t i0 = first(rng);
  std::copy_n(pts.data() + i0 * dim, dim, centroids.data());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(pts.data() + i * dim, centroids.data(), dim);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t chosen = 0;
    if (total > 0.0) {
      double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    std::copy_n(pts.data() + chosen * dim, dim, centroids.data() + c * dim);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(pts.data() + i * dim, centroids.data() + c * dim, dim));
    }
  }
  return centroids;
}

double assign(std::span<const double> pts, std::size_t n, std::size_t dim, std::size_t k,
              const std::vector<double>& centroids, std::vector<int>& labels,
              std::vector<double>& dist) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double d = sq_dist(pts.data() + i * dim, centroids.data() + c * dim, dim);
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[i] = arg;
    dist[i] = best;
    inertia += best;
  }
  return inertia;
}

void update(std::span<const double> pts, std::size_t n, std::size_t dim, std::size_t k,
            const std::vector<int>& labels, std::vector<double>& dist,
            std::vector<double>& centroids) {
  std::vector<double> sums(k * dim, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    ++counts[c];
    for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += pts[i * dim + d];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      for (std::size_t d = 0; d < dim; ++d) {
        centroids[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
      }
      continue;
    }
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (dist[i] > dist[far]) far = i;
    }
    std::copy_n(pts.data() + far * dim, dim, centroids.data() + c * dim);
    dist[far] = 0.0;
  }
}

}  // namespace

ClusterAssignment kmeans(std::span<const double> points, std::size_t dim, std::size_t k,
                         std::uint64_t seed, const KMeansOptions& opts) {
  if (dim == 0 || points.size() % dim != 0) {
    throw Error(Errc::kShapeMismatch, "point buffer is not a multiple of dim");
  }
  const std::size_t n = points.size() / dim;
  if (k == 0) throw Error(Errc::kInvalidArgument, "k must be >= 1");
  if (n < k) {
    throw Error(Errc::kTooFewPoints, std::to_string(n) + " points for " + std::to_string(k) +
                                         " clusters");
  }

  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng = make_rng(seed, "kmeans", r);
    ClusterAssignment run;
    run.k = k;
    run.dim = dim;
    run.labels.assign(n, -1);
    run.centroids = seed_plus_plus(points, n, dim, k, rng);
    std::vector<int> previous;
    std::vector<double> dist(n);
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      previous = run.labels;
      run.inertia_history.push_back(assign(points, n, dim, k, run.centroids, run.labels, dist));
      run.iterations = it + 1;
      if (run.labels == previous) break;
      update(points, n, dim, k, run.labels, dist, run.centroids);
    }
    run.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      run.inertia += sq_dist(points.data() + i * dim,
                             run.centroids.data() + static_cast<std::size_t>(run.labels[i]) * dim,
                             dim);
    }
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

}  // namespace scesep::infer
