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

// Round-loop simulation over generated workloads and the end-to-end budget
// audit.

#ifndef PRIVPLAN_HARNESS_H_
#define PRIVPLAN_HARNESS_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "privplan/accounting.h"
#include "privplan/allocation.h"
#include "privplan/population.h"
#include "privplan/request.h"
#include "privplan/workload.h"

namespace privplan {

enum class Accounting { kSubsampled, kUpc };

std::string_view AccountingName(Accounting a);
Accounting ParseAccounting(std::string_view name);

enum class Profile { kDesk, kPaper };

std::string_view ProfileName(Profile p);
Profile ParseProfile(std::string_view name);

struct SimulationConfig {
  WorkloadConfig workload;
  RotationConfig rotation;
  double delta_slack = 0.4;
  GridPtr grid = AlphaGrid::Default();
  AdpBudget global_budget;
  Algorithm algorithm = Algorithm::kDpk;
  Accounting accounting = Accounting::kSubsampled;
  ObjectiveMode objective = ObjectiveMode::kUtility;
  bool prune = true;
  ExactOptions exact;
  // Replications run by the command-line driver, seeds seed .. seed+n-1.
  int seeds = 5;

  void Validate() const;
  UnlockPolicy unlock_policy() const;
  PlannerOptions planner_options() const;
};

// Workload family `family` on the desk or paper scale.
SimulationConfig profile_config(Profile profile, WorkloadFamily family,
                                uint64_t seed);

struct RoundMetrics {
  int64_t round = 0;  // 1-based
  int64_t requests_offered = 0;
  int64_t requests_accepted = 0;
  double utility_offered = 0.0;
  double utility_accepted = 0.0;
  std::array<int64_t, kNumTiers> offered_by_tier{};
  std::array<int64_t, kNumTiers> accepted_by_tier{};
  // Per order: consumed / total budget averaged over the blocks of the
  // active groups; NaN where the total budget is marked.
  std::vector<double> budget_utilization;
  int64_t segments = 0;
  int64_t contested_segments = 0;
  int64_t auto_accepted = 0;
  int64_t auto_rejected = 0;
  bool solver_timed_out = false;
  double wall_ms = 0.0;
};

struct AuditResult {
  bool passed = true;
  // Largest converted epsilon over every ledger.
  double max_epsilon = 0.0;
  int64_t ledgers_checked = 0;
};

// Converts every ledger of the active window and the residual pool to
// (epsilon, delta) and checks it against the global budget.
AuditResult audit(const RotationState& state, const AdpBudget& budget);

struct SimulationResult {
  SimulationConfig config;
  std::vector<RoundMetrics> rounds;
  RotationState final_state;
  std::vector<PolicyRecord> policies;
  AuditResult audit;
};

// advance rotation, ingest the round's batch, cost it (amplified or UPC),
// plan, apply and record metrics. Deterministic in config.workload.seed.
SimulationResult run_simulation(const SimulationConfig& config);

// Per-order utilization of the active window (see RoundMetrics).
std::vector<double> budget_utilization(const RotationState& state,
                                       const UnlockPolicy& policy);

RoundMetrics round_metrics(int64_t round, const RoundPlan& plan,
                           const RotationState& state,
                           const UnlockPolicy& policy);

}  // namespace privplan

#endif  // PRIVPLAN_HARNESS_H_
