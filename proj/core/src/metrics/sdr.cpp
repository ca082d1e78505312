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

#include "scesep/metrics/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scesep/common/error.hpp"

namespace scesep::metrics {

double sdr(const dsp::Waveform& reference, const dsp::Waveform& estimate) {
  const std::size_t n = std::min(reference.size(), estimate.size());
  const auto& r = reference.samples;
  const auto& e = estimate.samples;
  double rr = 0.0, er = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rr += r[i] * r[i];
    er += e[i] * r[i];
  }
  if (!(rr > 0.0)) throw Error(Errc::kSilentReference, "reference has zero energy");
  const double a = er / rr;
  double target = 0.0, resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = a * r[i];
    target += s * s;
    const double d = e[i] - s;
    resid += d * d;
  }
  if (resid < 1e-20 * target) return kSdrCap;
  if (target <= 0.0) return -kSdrCap;
  return std::min(kSdrCap, 10.0 * std::log10(target / resid));
}

double sdr_improvement(const dsp::Waveform& mixture, const dsp::Waveform& reference,
                       const dsp::Waveform& estimate) {
  return sdr(reference, estimate) - sdr(reference, mixture);
}

double EvalResult::mean_sdr() const {
  if (per_source_sdr_db.empty()) return 0.0;
  return std::accumulate(per_source_sdr_db.begin(), per_source_sdr_db.end(), 0.0) /
         static_cast<double>(per_source_sdr_db.size());
}

double EvalResult::mean_improvement() const {
  if (sdr_improvement_db.empty()) return 0.0;
  return std::accumulate(sdr_improvement_db.begin(), sdr_improvement_db.end(), 0.0) /
         static_cast<double>(sdr_improvement_db.size());
}

EvalResult best_permutation(const std::vector<dsp::Waveform>& references,
                            const std::vector<dsp::Waveform>& estimates,
                            const dsp::Waveform* mixture) {
  const std::size_t m = references.size();
  if (estimates.size() != m) {
    throw Error(Errc::kCountMismatch, std::to_string(estimates.size()) + " estimates for " +
                                          std::to_string(m) + " references");
  }
  // table[e][r]
  std::vector<std::vector<double>> table(m, std::vector<double>(m));
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t r = 0; r < m; ++r) table[e][r] = sdr(references[r], estimates[e]);
  }
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_sum = -std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (std::size_t e = 0; e < m; ++e) sum += table[e][perm[e]];
    if (sum > best_sum) {
      best_sum = sum;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  EvalResult res;
  res.permutation = best;
  res.per_source_sdr_db.assign(m, 0.0);
  for (std::size_t e = 0; e < m; ++e) res.per_source_sdr_db[best[e]] = table[e][best[e]];
  if (mixture != nullptr) {
    res.sdr_improvement_db.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      res.sdr_improvement_db[r] = res.per_source_sdr_db[r] - sdr(references[r], *mixture);
    }
  }
  return res;
}

}  // namespace scesep::metrics
