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

#include "privplan/report.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "privplan/errors.h"

namespace privplan {
namespace {

Json WithoutSeed(Json config) {
  if (config.contains("workload")) config["workload"].erase("seed");
  return config;
}

// Fields two compared run sets must agree on.
Json Shape(const Json& config) {
  const Json& w = config.at("workload");
  return {
      {"workload",
       {{"name", w.at("name")},
        {"rounds", w.at("rounds")},
        {"domain_size", w.at("domain_size")},
        {"round_duration_minutes", w.at("round_duration_minutes")},
        {"request_interarrival_minutes", w.at("request_interarrival_minutes")},
        {"families", w.at("families")}}},
      {"rotation", config.at("rotation")},
      {"alphas", config.at("alphas")},
      {"global_budget", config.at("global_budget")}};
}

double Total(const MetricsDocument& run, double RoundMetrics::* field) {
  double s = 0.0;
  for (const RoundMetrics& m : run.rounds) s += m.*field;
  return s;
}

int64_t Total(const MetricsDocument& run, int64_t RoundMetrics::* field) {
  int64_t s = 0;
  for (const RoundMetrics& m : run.rounds) s += m.*field;
  return s;
}

std::string Cell(const Stat& s) {
  std::ostringstream out;
  out << std::setprecision(6) << s.mean << " +/- " << s.stddev;
  return out.str();
}

}  // namespace

Stat describe(std::span<const double> values) {
  Stat s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= double(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / double(values.size() - 1));
  }
  return s;
}

double per_round_utility_variance(std::span<const RoundMetrics> rounds) {
  if (rounds.empty()) return 0.0;
  double mean = 0.0;
  for (const RoundMetrics& m : rounds) mean += m.utility_accepted;
  mean /= double(rounds.size());
  double ss = 0.0;
  for (const RoundMetrics& m : rounds) {
    ss += (m.utility_accepted - mean) * (m.utility_accepted - mean);
  }
  return ss / double(rounds.size());
}

std::vector<MetricsDocument> load_metrics_dir(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ReportError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".metrics.json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<MetricsDocument> out;
  for (const auto& f : files) {
    try {
      out.push_back(MetricsFromJson(ReadJsonFile(f)));
    } catch (const ConfigError& e) {
      throw ReportError(e.what());
    }
  }
  if (out.empty()) throw ReportError("no metrics files in " + dir.string());
  return out;
}

Summary summarize(std::span<const MetricsDocument> runs) {
  if (runs.empty()) throw ReportError("no metrics to summarize");
  const Json reference = WithoutSeed(runs.front().config);
  const size_t n_rounds = runs.front().rounds.size();
  for (const MetricsDocument& run : runs) {
    if (WithoutSeed(run.config) != reference) {
      throw ReportError("metrics files come from different configurations");
    }
    if (run.rounds.size() != n_rounds) {
      throw ReportError("metrics files cover different round counts");
    }
  }

  Summary s;
  s.runs = runs.size();
  std::vector<double> offered, accepted, utility, rate, variance;
  std::array<std::vector<double>, kNumTiers> share;
  for (const MetricsDocument& run : runs) {
    s.seeds.push_back(run.seed);
    s.audit_passed = s.audit_passed && run.audit.passed;
    for (const RoundMetrics& m : run.rounds) {
      s.any_timeout = s.any_timeout || m.solver_timed_out;
    }
    const double o = double(Total(run, &RoundMetrics::requests_offered));
    const double a = double(Total(run, &RoundMetrics::requests_accepted));
    offered.push_back(o);
    accepted.push_back(a);
    utility.push_back(Total(run, &RoundMetrics::utility_accepted));
    rate.push_back(o > 0 ? a / o : 0.0);
    variance.push_back(per_round_utility_variance(run.rounds));
    for (int t = 0; t < kNumTiers; ++t) {
      double tier = 0.0;
      for (const RoundMetrics& m : run.rounds)
        tier += double(m.accepted_by_tier[t]);
      share[t].push_back(a > 0 ? tier / a : 0.0);
    }
  }
  s.total_requests_offered = describe(offered);
  s.total_requests_accepted = describe(accepted);
  s.total_utility = describe(utility);
  s.acceptance_rate = describe(rate);
  s.utility_variance = describe(variance);
  for (int t = 0; t < kNumTiers; ++t) s.tier_share[t] = describe(share[t]);

  std::vector<double> cum_req(runs.size(), 0.0), cum_util(runs.size(), 0.0);
  for (size_t r = 0; r < n_rounds; ++r) {
    SeriesRow row;
    row.round = runs.front().rounds[r].round;
    std::vector<double> off, acc, util;
    std::array<std::vector<double>, kNumTiers> tiers;
    for (size_t i = 0; i < runs.size(); ++i) {
      const RoundMetrics& m = runs[i].rounds[r];
      off.push_back(double(m.requests_offered));
      acc.push_back(double(m.requests_accepted));
      util.push_back(m.utility_accepted);
      cum_req[i] += double(m.requests_accepted);
      cum_util[i] += m.utility_accepted;
      for (int t = 0; t < kNumTiers; ++t) {
        tiers[t].push_back(double(m.accepted_by_tier[t]));
      }
    }
    row.requests_offered = describe(off);
    row.requests_accepted = describe(acc);
    row.utility_accepted = describe(util);
    row.cumulative_requests = describe(cum_req);
    row.cumulative_utility = describe(cum_util);
    for (int t = 0; t < kNumTiers; ++t)
      row.accepted_by_tier[t] = describe(tiers[t]);
    s.series.push_back(row);
  }
  return s;
}

Comparison compare(std::span<const MetricsDocument> base,
                   std::span<const MetricsDocument> other) {
  Comparison c;
  c.base = summarize(base);
  c.other = summarize(other);
  if (Shape(base.front().config) != Shape(other.front().config)) {
    throw ReportError("compared runs use different workloads or budgets");
  }
  std::map<uint64_t, const MetricsDocument*> by_seed;
  for (const MetricsDocument& b : base) by_seed[b.seed] = &b;
  if (by_seed.size() != other.size()) {
    throw ReportError("compared runs use different seeds");
  }
  std::vector<double> ratios;
  for (const MetricsDocument& o : other) {
    auto it = by_seed.find(o.seed);
    if (it == by_seed.end()) {
      throw ReportError("compared runs use different seeds");
    }
    const double b = Total(*it->second, &RoundMetrics::utility_accepted);
    const double u = Total(o, &RoundMetrics::utility_accepted);
    ratios.push_back(b > 0 ? u / b : std::numeric_limits<double>::infinity());
  }
  c.per_seed_utility_ratio = describe(ratios);
  c.utility_ratio = c.base.total_utility.mean > 0
                        ? c.other.total_utility.mean / c.base.total_utility.mean
                        : std::numeric_limits<double>::infinity();
  c.requests_ratio = c.base.total_requests_accepted.mean > 0
                         ? c.other.total_requests_accepted.mean /
                               c.base.total_requests_accepted.mean
                         : std::numeric_limits<double>::infinity();
  return c;
}

std::string summary_table(const Summary& s) {
  std::ostringstream out;
  out << "runs                 " << s.runs << '\n'
      << "requests offered     " << Cell(s.total_requests_offered) << '\n'
      << "requests accepted    " << Cell(s.total_requests_accepted) << '\n'
      << "acceptance rate      " << Cell(s.acceptance_rate) << '\n'
      << "utility accepted     " << Cell(s.total_utility) << '\n'
      << "per-round variance   " << Cell(s.utility_variance) << '\n';
  for (int t = 0; t < kNumTiers; ++t) {
    std::string name(TierName(Tier(t)));
    name.resize(12, ' ');
    out << "share " << name << "   " << Cell(s.tier_share[t]) << '\n';
  }
  out << "audit                " << (s.audit_passed ? "passed" : "FAILED")
      << '\n'
      << "solver timeouts      " << (s.any_timeout ? "yes" : "no") << '\n';
  return out.str();
}

std::string series_csv(const Summary& s) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "round,requests_offered,requests_offered_sd,requests_accepted,"
         "requests_accepted_sd,utility,utility_sd,cumulative_requests,"
         "cumulative_requests_sd,cumulative_utility,cumulative_utility_sd";
  for (int t = 0; t < kNumTiers; ++t) {
    out << ',' << TierName(Tier(t)) << ',' << TierName(Tier(t)) << "_sd";
  }
  out << '\n';
  for (const SeriesRow& r : s.series) {
    out << r.round;
    for (const Stat* st :
         {&r.requests_offered, &r.requests_accepted, &r.utility_accepted,
          &r.cumulative_requests, &r.cumulative_utility}) {
      out << ',' << st->mean << ',' << st->stddev;
    }
    for (const Stat& st : r.accepted_by_tier) {
      out << ',' << st.mean << ',' << st.stddev;
    }
    out << '\n';
  }
  return out.str();
}

std::string comparison_table(const Comparison& c) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "utility (base)       " << Cell(c.base.total_utility) << '\n'
      << "utility (other)      " << Cell(c.other.total_utility) << '\n'
      << "utility ratio        " << c.utility_ratio << '\n'
      << "per-seed ratio       " << Cell(c.per_seed_utility_ratio) << '\n'
      << "requests (base)      " << Cell(c.base.total_requests_accepted) << '\n'
      << "requests (other)     " << Cell(c.other.total_requests_accepted)
      << '\n'
      << "requests ratio       " << c.requests_ratio << '\n';
  return out.str();
}

}  // namespace privplan
