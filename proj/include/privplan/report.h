// Copyright 2026 The privplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Aggregation of simulation metrics across seeds and comparison of two runs.

#ifndef PRIVPLAN_REPORT_H_
#define PRIVPLAN_REPORT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "privplan/harness.h"
#include "privplan/serialization.h"

namespace privplan {

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample deviation; 0 for a single run
};

Stat describe(std::span<const double> values);

// Population variance of the per-round accepted utility.
double per_round_utility_variance(std::span<const RoundMetrics> rounds);

struct SeriesRow {
  int64_t round = 0;
  Stat requests_offered;
  Stat requests_accepted;
  Stat utility_accepted;
  Stat cumulative_requests;
  Stat cumulative_utility;
  std::array<Stat, kNumTiers> accepted_by_tier;
};

struct Summary {
  size_t runs = 0;
  std::vector<uint64_t> seeds;
  Stat total_requests_offered;
  Stat total_requests_accepted;
  Stat total_utility;
  Stat acceptance_rate;
  Stat utility_variance;
  std::array<Stat, kNumTiers> tier_share;  // share of accepted requests
  bool audit_passed = true;
  bool any_timeout = false;
  std::vector<SeriesRow> series;
};

// Every *.metrics.json file under `dir`, ordered by file name.
std::vector<MetricsDocument> load_metrics_dir(const std::filesystem::path& dir);

// Throws ReportError when `runs` is empty or the runs differ in anything but
// the seed.
Summary summarize(std::span<const MetricsDocument> runs);

struct Comparison {
  Summary base;
  Summary other;
  double utility_ratio = 0.0;  // other / base, totals averaged over seeds
  double requests_ratio = 0.0;
  Stat per_seed_utility_ratio;
};

// Joins two run sets seed by seed. They must share the workload shape,
// rotation, grid, global budget and seeds; otherwise ReportError.
Comparison compare(std::span<const MetricsDocument> base,
                   std::span<const MetricsDocument> other);

std::string summary_table(const Summary& s);
std::string series_csv(const Summary& s);
std::string comparison_table(const Comparison& c);

}  // namespace privplan

#endif  // PRIVPLAN_REPORT_H_
