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

#include "privplan/harness.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "privplan/errors.h"

namespace privplan {
namespace {

constexpr uint64_t kUpcStream = 0x5851f42d4c957f2dULL;
constexpr uint64_t kPopulationStream = 0x14057b7ef767814fULL;

}  // namespace

std::string_view AccountingName(Accounting a) {
  switch (a) {
    case Accounting::kSubsampled:
      return "subsampled";
    case Accounting::kUpc:
      return "upc";
  }
  throw ParameterError("unknown accounting mode");
}

Accounting ParseAccounting(std::string_view name) {
  if (name == "subsampled") return Accounting::kSubsampled;
  if (name == "upc") return Accounting::kUpc;
  throw ParameterError("unknown accounting mode: " + std::string(name));
}

std::string_view ProfileName(Profile p) {
  switch (p) {
    case Profile::kDesk:
      return "desk";
    case Profile::kPaper:
      return "paper";
  }
  throw ParameterError("unknown profile");
}

Profile ParseProfile(std::string_view name) {
  if (name == "desk") return Profile::kDesk;
  if (name == "paper") return Profile::kPaper;
  throw ParameterError("unknown profile: " + std::string(name));
}

void SimulationConfig::Validate() const {
  workload.Validate();
  rotation.Validate();
  global_budget.Validate();
  if (!grid) throw ConfigError("missing alpha grid");
  if (!(delta_slack >= 0.0 && delta_slack <= 1.0)) {
    throw ConfigError("delta_slack must lie in [0, 1]");
  }
  if (!(exact.time_limit_seconds > 0.0)) {
    throw ConfigError("exact solver time limit must be > 0");
  }
  if (seeds < 1) throw ConfigError("seeds must be >= 1");
  unlock_policy().Validate();
}

UnlockPolicy SimulationConfig::unlock_policy() const {
  return UnlockPolicy{delta_slack, rotation.window_k,
                      total_budget_rdp(global_budget, grid)};
}

PlannerOptions SimulationConfig::planner_options() const {
  PlannerOptions o;
  o.algorithm = algorithm;
  o.objective = objective;
  o.prune = prune;
  o.exact = exact;
  return o;
}

SimulationConfig profile_config(Profile profile, WorkloadFamily family,
                                uint64_t seed) {
  SimulationConfig c;
  c.workload = build_workload(family, seed);
  if (profile == Profile::kDesk) {
    c.workload.domain_size = 2048;
    c.workload.rounds = 10;
    c.workload.request_interarrival_minutes =
        c.workload.round_duration_minutes / 50.0;
  }
  return c;
}

AuditResult audit(const RotationState& state, const AdpBudget& budget) {
  AuditResult out;
  auto check = [&](const Group& g) {
    for (const Group::Run& run : g.runs()) {
      if (!run.ledger) continue;
      const double eps = rdp_to_adp(run.ledger->consumed, budget.delta);
      out.max_epsilon = std::max(out.max_epsilon, eps);
      if (eps > budget.epsilon + 1e-9) out.passed = false;
      ++out.ledgers_checked;
    }
  };
  for (const Group& g : state.active) check(g);
  for (const Group& g : state.residual_pool) check(g);
  return out;
}

std::vector<double> budget_utilization(const RotationState& state,
                                       const UnlockPolicy& policy) {
  const RdpVector& total = policy.total_budget;
  const Eigen::Index n = total.size();
  Eigen::ArrayXd used = Eigen::ArrayXd::Zero(n);
  double cells = 0.0;
  for (const Group& g : state.active) {
    for (const Group::Run& run : g.runs()) {
      const double len = double(run.cells.end - run.cells.begin);
      cells += len;
      if (run.ledger) used += len * run.ledger->consumed.eps();
    }
  }
  std::vector<double> out(size_t(n), std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index a = 0; a < n; ++a) {
    if (total.is_marked(a) || !(total[a] > 0.0) || cells == 0.0) continue;
    out[size_t(a)] = used[a] / cells / total[a];
  }
  return out;
}

RoundMetrics round_metrics(int64_t round, const RoundPlan& plan,
                           const RotationState& state,
                           const UnlockPolicy& policy) {
  RoundMetrics m;
  m.round = round;
  std::map<int64_t, const RequestRecord*> by_id;
  for (const RequestRecord& r : plan.requests) {
    by_id[r.request_id] = &r;
    ++m.requests_offered;
    m.utility_offered += r.utility;
    ++m.offered_by_tier[size_t(r.tier)];
  }
  for (int64_t id : plan.allocation.accepted) {
    const RequestRecord& r = *by_id.at(id);
    ++m.requests_accepted;
    m.utility_accepted += r.utility;
    ++m.accepted_by_tier[size_t(r.tier)];
  }
  m.budget_utilization = budget_utilization(state, policy);
  m.segments = int64_t(plan.segments.size());
  m.contested_segments = int64_t(plan.contested);
  m.auto_accepted = int64_t(plan.auto_accepted.size());
  m.auto_rejected = int64_t(plan.auto_rejected.size());
  m.solver_timed_out = plan.allocation.timed_out;
  return m;
}

SimulationResult run_simulation(const SimulationConfig& config) {
  config.Validate();
  SimulationResult result;
  result.config = config;
  const UnlockPolicy policy = config.unlock_policy();
  const PlannerOptions options = config.planner_options();
  const int k = config.rotation.window_k;

  CostCache costs(config.grid);
  const Workload workload = generate(config.workload, costs);

  RotationState state = RotationState::Initial(
      config.rotation, AttributeSchema{config.workload.domain_size});
  std::mt19937_64 upc_rng(config.workload.seed ^ kUpcStream);
  std::mt19937_64 population_rng(config.workload.seed ^ kPopulationStream);
  // Users waiting for their group, keyed by group ordinal.
  std::map<int64_t, int64_t> population;
  PolicyContext context{1, config.global_budget.delta, 1};

  for (int r = 0; r < config.workload.rounds; ++r) {
    const auto start = std::chrono::steady_clock::now();
    if (r > 0) state = advance_round(state);
    const int64_t round = state.round;
    for (Group& g : state.active) {
      auto it = population.find(g.id());
      if (it != population.end()) g.set_population(it->second);
    }

    std::vector<RequestRecord> batch;
    batch.reserve(workload.batches[size_t(r)].size());
    const bool amplify = config.accounting == Accounting::kSubsampled;
    for (const WorkloadRequest& w : workload.batches[size_t(r)]) {
      batch.push_back(
          to_request_record(w, config.workload.domain_size, amplify, costs));
    }
    RoundPlan plan = amplify
                         ? plan_round(batch, state, policy, options)
                         : account_upc(batch, state, policy, options, upc_rng);

    context.round = round;
    std::vector<PolicyRecord> emitted = apply_allocation(
        plan.allocation, plan.requests, state, policy, context);
    result.policies.insert(result.policies.end(),
                           std::make_move_iterator(emitted.begin()),
                           std::make_move_iterator(emitted.end()));

    // Users arriving this round join one of the next T groups.
    const int64_t users = workload.user_arrivals[size_t(r)];
    for (int64_t u = 0; u < users; ++u) {
      const int64_t activation =
          assign_group(round, config.rotation.horizon_t, population_rng);
      ++population[activation + k - 1];
    }

    RoundMetrics m = round_metrics(round, plan, state, policy);
    m.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    result.rounds.push_back(std::move(m));
  }
  result.audit = audit(state, config.global_budget);
  result.final_state = std::move(state);
  return result;
}

}  // namespace privplan
