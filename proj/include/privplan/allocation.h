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

// Per-round request selection over contested segments.
//
// A Problem has one constraint per (segment, group) pair. A constraint holds
// when, for at least one Rényi order, the summed cost of its selected member
// requests stays within the segment's remaining budget in that group.

#ifndef PRIVPLAN_ALLOCATION_H_
#define PRIVPLAN_ALLOCATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privplan/population.h"
#include "privplan/request.h"
#include "privplan/segmentation.h"

namespace privplan {

enum class ObjectiveMode { kUtility, kRequestCount };
enum class Algorithm { kFcfs, kDpf, kDpk, kExact };

std::string_view AlgorithmName(Algorithm a);
Algorithm ParseAlgorithm(std::string_view name);
std::string_view ObjectiveName(ObjectiveMode m);
ObjectiveMode ParseObjective(std::string_view name);

struct ProblemRequest {
  int64_t id = 0;
  RdpVector cost;
  double weight = 1.0;
  double arrival_time = 0.0;
  // Indices into Problem::groups the request may be granted.
  std::vector<int> eligible;
  // Number of eligible groups an accepted request must receive.
  int required = 0;

  bool collapsed() const { return required == int(eligible.size()); }
};

struct Constraint {
  size_t segment = 0;
  int group = 0;             // index into Problem::groups
  std::vector<int> members;  // indices into Problem::requests
  RdpVector budget;
};

struct Problem {
  GridPtr grid;
  std::vector<int64_t> groups;
  std::vector<ProblemRequest> requests;
  std::vector<Constraint> constraints;
  ObjectiveMode mode = ObjectiveMode::kUtility;

  // Constraint indices per (request, group index).
  std::vector<std::vector<std::vector<int>>> ConstraintsByRequestGroup() const;
};

Problem build_problem(std::span<const RequestRecord> requests,
                      std::span<const Segment> segments,
                      const std::vector<int64_t>& groups, ObjectiveMode mode);

// Charge of one accepted request on one group.
struct BlockCharge {
  int64_t group_id = 0;
  CellSet cells;
  RdpVector charge;
};

struct Allocation {
  std::vector<int64_t> accepted;
  // Granted group ids per accepted request.
  std::map<int64_t, std::vector<int64_t>> granted_groups;
  // Witness order per problem constraint (nullopt when no problem was built).
  std::vector<std::optional<Eigen::Index>> admitting_order;
  std::vector<BlockCharge> per_block_charges;
  double objective_value = 0.0;
  bool optimal = false;
  bool timed_out = false;
};

// Builds an allocation from (request index, granted group indices) pairs and
// computes the witness order of every constraint.
Allocation allocation_from_selection(
    const Problem& problem,
    const std::vector<std::pair<size_t, std::vector<int>>>& selection);

double dominant_share(const Problem& problem, size_t request);
double dpk_efficiency(const Problem& problem, size_t request);

Allocation allocate_fcfs(const Problem& problem);
Allocation allocate_dpf(const Problem& problem);
// Greedy in decreasing dpk_efficiency and greedy in decreasing weight; returns
// the better of the two (the efficiency pass on ties).
Allocation allocate_dpk(const Problem& problem);

struct ExactOptions {
  double time_limit_seconds = 60.0;
  // Seed the search with the DPK solution.
  bool warm_start = true;
};

// Branch and bound over accept/reject decisions (and group choices for
// requests with required < eligible). Sets `optimal` when the search
// completed within the time limit.
Allocation solve_exact(const Problem& problem,
                       const ExactOptions& options = {});

Allocation allocate(const Problem& problem, Algorithm algorithm,
                    const ExactOptions& options = {});

// Recomputes every constraint from the accepted set alone and checks that
// each witness order holds.
bool verify_allocation(const Problem& problem, const Allocation& allocation);

// Fills per_block_charges from the accepted requests and their grants.
void attach_block_charges(Allocation& allocation,
                          std::span<const RequestRecord> requests);

struct PolicyRecord {
  int64_t policy_id = 0;
  int64_t round = 0;
  std::string application_id;
  int64_t request_id = 0;
  std::vector<int64_t> groups;
  CellSet predicate;
  RdpVector granted;
  double delta = 0.0;
  double sampling_fraction = 1.0;
};

struct PolicyContext {
  int64_t round = 0;
  double delta = 1e-7;
  int64_t next_policy_id = 1;
};

// Charges every granted block and returns one access policy per accepted
// request. Throws ConflictError, leaving the state untouched, when any block
// filter refuses its charge.
std::vector<PolicyRecord> apply_allocation(
    const Allocation& allocation, std::span<const RequestRecord> requests,
    RotationState& state, const UnlockPolicy& policy, PolicyContext& context);

// Groups charged by a user-level baseline request with fraction f:
// round-half-up of f * K, within [1, K].
int upc_group_count(double fraction, int window_k);

// Strips the predicate, keeps the unamplified cost, and pins the request to
// a uniformly drawn subset of the active groups.
RequestRecord to_upc_request(const RequestRecord& request,
                             const std::vector<int64_t>& active_groups,
                             int64_t domain_size, std::mt19937_64& rng);

struct PlannerOptions {
  Algorithm algorithm = Algorithm::kDpk;
  ObjectiveMode objective = ObjectiveMode::kUtility;
  bool prune = true;
  SegmentMode segment_mode = SegmentMode::kSegments;
  ExactOptions exact;
};

struct RoundPlan {
  // The requests as planned (after any baseline conversion).
  std::vector<RequestRecord> requests;
  std::vector<Segment> segments;
  size_t contested = 0;
  std::vector<int64_t> auto_accepted;
  std::vector<int64_t> auto_rejected;
  Problem problem;
  Allocation residual;
  // Final allocation: auto-accepted plus residual selection, with charges.
  Allocation allocation;
};

// Segments, prunes, builds and solves one round against the current state.
RoundPlan plan_round(std::span<const RequestRecord> requests,
                     const RotationState& state, const UnlockPolicy& policy,
                     const PlannerOptions& options);

// User-level parallel composition baseline: converts the requests with
// to_upc_request and plans them like any other batch.
RoundPlan account_upc(std::span<const RequestRecord> requests,
                      const RotationState& state, const UnlockPolicy& policy,
                      const PlannerOptions& options, std::mt19937_64& rng);

}  // namespace privplan

#endif  // PRIVPLAN_ALLOCATION_H_
