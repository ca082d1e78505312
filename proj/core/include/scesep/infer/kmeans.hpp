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

#include <cstdint>
#include <span>
#include <vector>

namespace scesep::infer {

struct KMeansOptions {
  std::size_t restarts = 8;
  std::size_t max_iterations = 300;
};

struct ClusterAssignment {
  std::vector<int> labels;       // one per point, in [0, K)
  std::vector<double> centroids;  // K x dim, row-major
  std::size_t k = 0;
  std::size_t dim = 0;
  double inertia = 0.0;  // sum of squared distances to assigned centroids
  // Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding over `points` (n x dim,
/// row-major). Runs `restarts` independent seedings and keeps the lowest
/// inertia, earliest restart on ties. Assignment ties go to the lower
/// cluster index; an emptied cluster is moved onto the point farthest from
/// its centroid. Throws TooFewPoints when n < k.
ClusterAssignment kmeans(std::span<const double> points, std::size_t dim, std::size_t k,
                         std::uint64_t seed, const KMeansOptions& opts = {});

}  // namespace scesep::infer
