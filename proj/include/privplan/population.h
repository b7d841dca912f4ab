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

// Partitioned population: group rotation over a sliding window, biased
// budget unlocking, and per-block consumption ledgers.

#ifndef PRIVPLAN_POPULATION_H_
#define PRIVPLAN_POPULATION_H_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "privplan/cells.h"
#include "privplan/rdp_vector.h"

namespace privplan {

struct AttributeSchema {
  // Flattened partitioning-attribute domain.
  int64_t domain_size = 204800;

  void Validate() const;
};

struct RotationConfig {
  int window_k = 12;    // active groups per round, even
  int horizon_t = 104;  // users spread over the next T groups, T >= K

  void Validate() const;
};

struct UnlockPolicy {
  double delta_slack = 0.4;
  int window_k = 12;
  RdpVector total_budget;

  void Validate() const;
};

// Fraction of the total budget unlocked after k active rounds.
double unlock_fraction(int k, int window_k, double delta_slack);

RdpVector unlocked_budget(int k, const UnlockPolicy& policy);

// Ledger of one (group, attribute-cell) block.
struct BlockLedger {
  int64_t group_id = 0;
  int64_t attribute_cell = 0;
  int rounds_active = 1;
  RdpVector consumed;
  std::vector<RdpVector> history;

  static BlockLedger Fresh(int64_t group_id, int64_t cell, int rounds_active,
                           GridPtr grid);
  // Same consumption state, regardless of which cell it describes.
  bool SameState(const BlockLedger& other) const;
};

RdpVector available_budget(const BlockLedger& ledger,
                           const UnlockPolicy& policy);

// Appends the charge if the block filter admits it, otherwise throws
// BudgetExceededError and leaves the input untouched.
BlockLedger consume(BlockLedger ledger, const RdpVector& charge,
                    const UnlockPolicy& policy);

// Activation round in {arrival_round + 1, ..., arrival_round + horizon_t}.
int64_t assign_group(int64_t arrival_round, int horizon_t,
                     std::mt19937_64& rng);

// One user group and the ledgers of its blocks. Blocks are kept as runs of
// consecutive cells with identical history; cells no request has touched
// carry no ledger.
class Group {
 public:
  struct Run {
    CellRange cells;
    std::optional<BlockLedger> ledger;
  };

  Group(int64_t id, int rounds_active, int64_t domain_size);

  int64_t id() const { return id_; }
  int rounds_active() const { return rounds_active_; }
  void set_rounds_active(int k);
  int64_t domain_size() const { return domain_size_; }
  int64_t population() const { return population_; }
  void set_population(int64_t n) { population_ = n; }

  // Element-wise minimum remaining budget over the cells.
  RdpVector Remaining(const CellSet& cells, const UnlockPolicy& policy) const;
  // Distinct remaining budgets over the cells, without those implied by a
  // tighter one. A single entry when every cell shares the same history.
  std::vector<RdpVector> RemainingClasses(const CellSet& cells,
                                          const UnlockPolicy& policy) const;

  // Charges are (cells, cost) pairs that add up where they overlap. Either
  // every touched block admits its summed charge and all are applied, or
  // BudgetExceededError is thrown and no ledger changes.
  void ApplyCharges(const std::vector<std::pair<CellSet, RdpVector>>& charges,
                    const UnlockPolicy& policy);
  bool Admits(const std::vector<std::pair<CellSet, RdpVector>>& charges,
              const UnlockPolicy& policy) const;

  std::vector<Run> runs() const;
  // Replaces the run table (deserialization). Runs must tile the domain.
  void RestoreRuns(std::vector<Run> runs);

 private:
  struct Piece {
    CellRange cells;
    RdpVector charge;
  };
  std::vector<Piece> SumCharges(
      const std::vector<std::pair<CellSet, RdpVector>>& charges) const;
  void SplitAt(int64_t cell);
  void Coalesce();

  int64_t id_;
  int rounds_active_;
  int64_t domain_size_;
  int64_t population_ = 0;
  std::map<int64_t, Run> runs_;  // keyed by first cell
};

// Active window (oldest first) plus retired groups.
struct RotationState {
  int window_k = 12;
  int64_t domain_size = 0;
  int64_t round = 1;
  std::deque<Group> active;
  std::vector<Group> residual_pool;

  // K fresh groups 1..K; group 1 is the oldest (k = K), group K the newest.
  static RotationState Initial(const RotationConfig& rotation,
                               const AttributeSchema& schema);

  std::vector<int64_t> active_ids() const;
  const Group& group(int64_t id) const;
  Group& group(int64_t id);
};

// Retires the oldest group, activates the next ordinal with k = 1 and ages
// every survivor by one round.
RotationState advance_round(RotationState state);

// Minimum over active groups of the remaining budget on `cells`.
RdpVector window_available(const RotationState& state, const CellSet& cells,
                           const UnlockPolicy& policy);

}  // namespace privplan

#endif  // PRIVPLAN_POPULATION_H_
