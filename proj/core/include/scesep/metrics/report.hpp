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

#include <iosfwd>
#include <string>
#include <vector>

#include "scesep/metrics/sdr.hpp"

namespace scesep::metrics {

enum class GroupBy { kSnr, kNoiseKind };

GroupBy parse_group_by(const std::string& name);

struct ReportRow {
  std::string group;
  std::size_t count = 0;
  double mean_sdr_db = 0.0;
  double median_sdr_db = 0.0;
  double mean_improvement_db = 0.0;
  double median_improvement_db = 0.0;
};

/// One row per group, sorted by group key. Each result contributes its
/// per-clip mean over sources. SNR groups are 1 dB buckets around integer
/// values.
std::vector<ReportRow> report(const std::vector<EvalResult>& results, GroupBy by);

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows);

/// One row of the per-source metrics CSV.
struct MetricsRow {
  std::string clip_id;
  std::string algorithm;
  std::string mode;
  double snr_db = 0.0;
  std::string noise_kind;
  std::size_t source_idx = 0;
  double sdr_db = 0.0;
  double sdr_improvement_db = 0.0;
};

inline constexpr const char* kMetricsHeader =
    "clip_id,algorithm,mode,snr_db,noise_kind,source_idx,sdr_db,sdr_improvement_db";

std::vector<MetricsRow> metrics_rows(const EvalResult& r, const std::string& algorithm,
                                     const std::string& mode);
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows);

}  // namespace scesep::metrics
