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

#include "scesep/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "scesep/common/error.hpp"

namespace scesep::metrics {
namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

GroupBy parse_group_by(const std::string& name) {
  if (name == "snr") return GroupBy::kSnr;
  if (name == "noise_kind") return GroupBy::kNoiseKind;
  throw Error(Errc::kInvalidArgument, "unknown grouping '" + name + "'");
}

std::vector<ReportRow> report(const std::vector<EvalResult>& results, GroupBy by) {
  struct Acc {
    std::vector<double> sdr, imp;
  };
  // Numeric ordering for SNR buckets.
  std::map<std::pair<long, std::string>, Acc> groups;
  for (const auto& r : results) {
    std::pair<long, std::string> key;
    if (by == GroupBy::kSnr) {
      const long b = std::lround(r.snr_db);
      key = {b, std::to_string(b)};
    } else {
      key = {0, r.noise_kind};
    }
    auto& acc = groups[key];
    acc.sdr.push_back(r.mean_sdr());
    acc.imp.push_back(r.mean_improvement());
  }
  std::vector<ReportRow> rows;
  for (const auto& [key, acc] : groups) {
    ReportRow row;
    row.group = key.second;
    row.count = acc.sdr.size();
    row.mean_sdr_db = mean(acc.sdr);
    row.median_sdr_db = median(acc.sdr);
    row.mean_improvement_db = mean(acc.imp);
    row.median_improvement_db = median(acc.imp);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "group,count,mean_sdr_db,median_sdr_db,mean_improvement_db,median_improvement_db\n";
  for (const auto& r : rows) {
    os << r.group << ',' << r.count << ',' << fmt(r.mean_sdr_db) << ','
       << fmt(r.median_sdr_db) << ',' << fmt(r.mean_improvement_db) << ','
       << fmt(r.median_improvement_db) << '\n';
  }
}

std::vector<MetricsRow> metrics_rows(const EvalResult& r, const std::string& algorithm,
                                     const std::string& mode) {
  std::vector<MetricsRow> rows;
  for (std::size_t i = 0; i < r.per_source_sdr_db.size(); ++i) {
    MetricsRow row;
    row.clip_id = r.clip_id;
    row.algorithm = algorithm;
    row.mode = mode;
    row.snr_db = r.snr_db;
    row.noise_kind = r.noise_kind;
    row.source_idx = i;
    row.sdr_db = r.per_source_sdr_db[i];
    row.sdr_improvement_db = i < r.sdr_improvement_db.size() ? r.sdr_improvement_db[i] : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    os << r.clip_id << ',' << r.algorithm << ',' << r.mode << ',' << fmt(r.snr_db) << ','
       << r.noise_kind << ',' << r.source_idx << ',' << fmt(r.sdr_db) << ','
       << fmt(r.sdr_improvement_db) << '\n';
  }
}

}  // namespace scesep::metrics
