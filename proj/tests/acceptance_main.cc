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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "privplan/accounting.h"
#include "privplan/allocation.h"
#include "privplan/harness.h"
#include "privplan/report.h"
#include "testing/instances.h"
#include "testing/oracles.h"
#include "testing/unlock_properties.h"

namespace privplan {
namespace {

// Pinned thresholds.
constexpr double kUnlockSeconds = 60;
constexpr int kUnlockSequences = 1000;
constexpr double kExactSeconds = 300;
constexpr int kExactInstances = 200;
constexpr double kSegmentSeconds = 300;
constexpr int kSegmentInstances = 200;
constexpr double kAmplificationSeconds = 600;
constexpr double kAmplificationTolerance = 1e-9;
constexpr int kLatticePoints = 50;
constexpr int64_t kMonteCarloSamples = 400000;
constexpr double kMonteCarloTolerance = 5e-2;
constexpr int kSeeds = 5;
constexpr double kSubsamplingFraction = 0.25;
constexpr double kSubsamplingRatio = 2.0;
constexpr double kUnlockingRatio = 1.2;
constexpr double kHeuristicQuality = 0.9;
constexpr double kHeuristicRounds = 0.9;
constexpr double kExactRoundSeconds = 10;
constexpr double kPerformanceSeconds = 60;
constexpr double kPerformanceBytes = 1e9;

struct Outcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

Outcome Timed(const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = body();
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

double TotalUtility(const SimulationResult& r) {
  double total = 0.0;
  for (const RoundMetrics& m : r.rounds) total += m.utility_accepted;
  return total;
}

SimulationConfig Desk(WorkloadFamily family, uint64_t seed) {
  return profile_config(Profile::kDesk, family, seed);
}

Outcome UnlockProperties() {
  const testing::UnlockViolations v =
      testing::CheckUnlockProperties(kUnlockSequences, 2026);
  Outcome out;
  out.pass = v.total() == 0;
  out.detail = Format(
      "%lld sequences, %lld rounds; violations: max budget %lld, lower "
      "bound %lld, upper bound %lld, greedy %lld, balanced %lld, closed form "
      "%lld",
      (long long)v.sequences, (long long)v.rounds, (long long)v.max_budget,
      (long long)v.lower_bound, (long long)v.upper_bound, (long long)v.greedy,
      (long long)v.balanced, (long long)v.closed_form);
  for (const std::string& e : v.examples) out.detail += "\n    " + e;
  return out;
}

Outcome ExactOptimality() {
  std::mt19937_64 rng(7);
  int mismatches = 0;
  for (int d = 0; d < kExactInstances; ++d) {
    const Problem p = testing::RandomProblem(rng);
    const Allocation exact = solve_exact(p);
    const testing::BruteForce bf = testing::BruteForceOptimum(p);
    if (!exact.optimal || exact.objective_value != bf.objective ||
        !verify_allocation(p, exact)) {
      ++mismatches;
    }
  }
  return {mismatches == 0,
          Format("%d instances, %d mismatches vs exhaustive search",
                 kExactInstances, mismatches)};
}

Outcome SegmentSoundness() {
  std::mt19937_64 rng(11);
  int mismatches = 0;
  for (int d = 0; d < kSegmentInstances; ++d) {
    const testing::PlannerInstance in = testing::RandomPlannerInstance(rng);
    PlannerOptions segments;
    segments.algorithm = Algorithm::kExact;
    segments.prune = true;
    PlannerOptions cells = segments;
    cells.prune = false;
    cells.segment_mode = SegmentMode::kPerCell;
    const RoundPlan a = plan_round(in.requests, in.state, in.policy, segments);
    const RoundPlan b = plan_round(in.requests, in.state, in.policy, cells);
    const double scale = std::max(1.0, std::abs(b.allocation.objective_value));
    if (!a.residual.optimal || !b.residual.optimal ||
        std::abs(a.allocation.objective_value - b.allocation.objective_value) >
            1e-12 * scale) {
      ++mismatches;
    }
  }
  return {mismatches == 0, Format("%d instances, %d objective mismatches",
                                  kSegmentInstances, mismatches)};
}

Outcome Amplification() {
  const GridPtr grid = AlphaGrid::Default();
  const double tol = kAmplificationTolerance;
  auto near = [tol](double a, double b) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
  };
  int64_t checks = 0, failures = 0;
  auto check = [&](bool ok) {
    ++checks;
    if (!ok) ++failures;
  };
  // Containment, monotonicity in gamma and both boundaries on a lattice.
  auto sweep = [&](const std::function<RdpVector(double)>& amplified,
                   const RdpVector& base) {
    RdpVector previous = RdpVector::Zero(grid);
    for (int step = 0; step < kLatticePoints; ++step) {
      const double gamma = step / double(kLatticePoints - 1);
      const RdpVector v = amplified(gamma);
      for (Eigen::Index i = 0; i < grid->size(); ++i) {
        check(v[i] <= base[i] + tol * std::max(1.0, base[i]));
        check(v[i] >= previous[i] - tol * std::max(1.0, previous[i]));
        if (step == 0) check(near(v[i], 0.0));
        if (step == kLatticePoints - 1) check(near(v[i], base[i]));
      }
      previous = v;
    }
  };
  for (double sigma : {0.5, 1.0, 2.0, 4.0, 30.0}) {
    sweep([&](double g) { return amplify_poisson_gaussian(sigma, g, grid); },
          gaussian_rdp(sigma, 1.0, grid));
  }
  for (double eps : {0.01, 0.1, 0.25, 0.75, 2.0}) {
    RdpCurve curve = [eps](double a) {
      return std::min(eps, a * eps * eps / 2);
    };
    sweep(
        [&](double g) { return amplify_poisson_generic(curve, eps, g, grid); },
        pure_dp_to_rdp(eps, grid));
  }
  // Order-2 value against a sampled divergence estimate.
  const GridPtr two = AlphaGrid::Make({2});
  double worst = 0.0;
  uint64_t seed = 1;
  for (double sigma : {0.5, 1.0, 2.0}) {
    for (double gamma : {0.1, 0.25, 0.5}) {
      const double mc = testing::MonteCarloSampledGaussianD2(
          sigma, gamma, kMonteCarloSamples, seed++);
      worst = std::max(
          worst, std::abs(amplify_poisson_gaussian(sigma, gamma, two)[0] - mc));
    }
  }
  return {failures == 0 && worst <= kMonteCarloTolerance,
          Format("%lld lattice checks, %lld failures; worst Monte Carlo gap "
                 "%.4f over 9 pairs",
                 (long long)checks, (long long)failures, worst)};
}

Outcome Audit() {
  int runs = 0, failed = 0;
  double max_eps = 0.0;
  for (WorkloadFamily family : {WorkloadFamily::kW1, WorkloadFamily::kW2,
                                WorkloadFamily::kW3, WorkloadFamily::kW4}) {
    for (Algorithm algorithm :
         {Algorithm::kFcfs, Algorithm::kDpf, Algorithm::kDpk}) {
      for (uint64_t seed = 0; seed < kSeeds; ++seed) {
        SimulationConfig c = Desk(family, seed);
        c.algorithm = algorithm;
        const SimulationResult r = run_simulation(c);
        ++runs;
        if (!r.audit.passed) ++failed;
        max_eps = std::max(max_eps, r.audit.max_epsilon);
      }
    }
  }
  return {failed == 0,
          Format("%d runs, %d over budget, largest converted epsilon %.6f",
                 runs, failed, max_eps)};
}

Outcome Subsampling() {
  Outcome out{true, ""};
  for (WorkloadFamily family : {WorkloadFamily::kW1, WorkloadFamily::kW2}) {
    double sub = 0.0, upc = 0.0, offered = 0.0;
    for (uint64_t seed = 0; seed < kSeeds; ++seed) {
      SimulationConfig c = Desk(family, seed);
      c.workload.fraction_choices = {{kSubsamplingFraction, 1.0}};
      sub += TotalUtility(run_simulation(c));
      c.accounting = Accounting::kUpc;
      const SimulationResult r = run_simulation(c);
      upc += TotalUtility(r);
      for (const RoundMetrics& m : r.rounds) offered += m.utility_offered;
    }
    const double ratio = sub / upc;
    out.pass = out.pass && ratio >= kSubsamplingRatio;
    // Offered / UPC utility caps the ratio any accounting can reach.
    out.detail +=
        Format("%s%s ratio %.3f (ceiling %.3f)", out.detail.empty() ? "" : "; ",
               std::string(WorkloadName(family)).c_str(), ratio, offered / upc);
  }
  return out;
}

Outcome Unlocking() {
  auto run = [](double slack, double& utility, double& variance) {
    utility = variance = 0.0;
    for (uint64_t seed = 0; seed < kSeeds; ++seed) {
      SimulationConfig c = Desk(WorkloadFamily::kW1, seed);
      c.delta_slack = slack;
      const SimulationResult r = run_simulation(c);
      utility += TotalUtility(r) / kSeeds;
      variance += per_round_utility_variance(r.rounds) / kSeeds;
    }
  };
  double u0, v0, u4, v4, u8, v8;
  run(0.0, u0, v0);
  run(0.4, u4, v4);
  run(0.8, u8, v8);
  const double ratio = u4 / u0;
  return {ratio >= kUnlockingRatio && v8 > v4,
          Format("utility ratio 0.4/0 = %.3f; per-round variance %.6g at 0.8 "
                 "vs %.6g at 0.4",
                 ratio, v8, v4)};
}

Outcome HeuristicQuality() {
  int rounds = 0, solved = 0, good = 0;
  double worst = 1.0;
  for (WorkloadFamily family : {WorkloadFamily::kW1, WorkloadFamily::kW2,
                                WorkloadFamily::kW3, WorkloadFamily::kW4}) {
    for (uint64_t seed = 0; seed < kSeeds; ++seed) {
      const SimulationConfig c = Desk(family, seed);
      const UnlockPolicy policy = c.unlock_policy();
      PlannerOptions dpk = c.planner_options();
      dpk.algorithm = Algorithm::kDpk;
      PlannerOptions exact = dpk;
      exact.algorithm = Algorithm::kExact;
      exact.exact.time_limit_seconds = kExactRoundSeconds;
      CostCache costs(c.grid);
      const Workload w = generate(c.workload, costs);
      RotationState state = RotationState::Initial(
          c.rotation, AttributeSchema{c.workload.domain_size});
      PolicyContext context{1, c.global_budget.delta, 1};
      // Follow the DPK trajectory and solve each round exactly on the side.
      for (int r = 0; r < c.workload.rounds; ++r) {
        if (r > 0) state = advance_round(state);
        std::vector<RequestRecord> batch;
        for (const WorkloadRequest& req : w.batches[size_t(r)]) {
          batch.push_back(
              to_request_record(req, c.workload.domain_size, true, costs));
        }
        const RoundPlan heuristic = plan_round(batch, state, policy, dpk);
        const RoundPlan optimum = plan_round(batch, state, policy, exact);
        ++rounds;
        if (optimum.residual.optimal) {
          ++solved;
          const double best = optimum.allocation.objective_value;
          const double got = heuristic.allocation.objective_value;
          const double quality = best > 0.0 ? got / best : 1.0;
          worst = std::min(worst, quality);
          if (quality >= kHeuristicQuality) ++good;
        }
        context.round = state.round;
        apply_allocation(heuristic.allocation, heuristic.requests, state,
                         policy, context);
      }
    }
  }
  return {solved > 0 && good >= kHeuristicRounds * solved,
          Format("%d of %d solved rounds at >= 90%% of optimum (%d rounds, "
                 "worst %.4f)",
                 good, solved, rounds, worst)};
}

Outcome Performance() {
  const auto start = std::chrono::steady_clock::now();
  const SimulationResult r = run_simulation(Desk(WorkloadFamily::kW1, 0));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double bytes = double(usage.ru_maxrss) * 1024.0;
  return {seconds < kPerformanceSeconds && bytes < kPerformanceBytes &&
              r.rounds.size() == 10,
          Format("%zu rounds in %.2f s, peak resident %.1f MB", r.rounds.size(),
                 seconds, bytes / 1e6)};
}

}  // namespace
}  // namespace privplan

int main() {
  using namespace privplan;
  // Performance runs first so the peak memory reading is its own.
  const Outcome perf = Timed(Performance);
  struct Row {
    const char* name;
    Outcome outcome;
    double limit;
  };
  std::vector<Row> rows;
  auto add = [&](const char* name, Outcome (*fn)(), double limit) {
    rows.push_back({name, Timed(fn), limit});
    const Row& row = rows.back();
    std::printf(
        "criterion %zu %s %s: %s [%.1f s]\n", rows.size(),
        row.outcome.pass && row.outcome.seconds < limit ? "PASS" : "FAIL", name,
        row.outcome.detail.c_str(), row.outcome.seconds);
    std::fflush(stdout);
  };
  add("unlocking properties", UnlockProperties, kUnlockSeconds);
  add("exact solver optimality", ExactOptimality, kExactSeconds);
  add("segment and pruning soundness", SegmentSoundness, kSegmentSeconds);
  add("amplification correctness", Amplification, kAmplificationSeconds);
  add("global guarantee audit", Audit, 1e9);
  add("subsampling vs user-parallel composition", Subsampling, 1e9);
  add("budget unlocking", Unlocking, 1e9);
  add("heuristic quality", HeuristicQuality, 1e9);
  rows.push_back({"performance", perf, 1e9});
  std::printf("criterion 9 %s performance: %s [%.1f s]\n",
              perf.pass ? "PASS" : "FAIL", perf.detail.c_str(), perf.seconds);
  bool all = true;
  for (const Row& row : rows) {
    all = all && row.outcome.pass && row.outcome.seconds < row.limit;
  }
  return all ? 0 : 1;
}
