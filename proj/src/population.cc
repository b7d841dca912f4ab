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

#include "privplan/population.h"

#include <algorithm>
#include <set>

#include "privplan/errors.h"

namespace privplan {

void AttributeSchema::Validate() const {
  if (domain_size < 1) throw ConfigError("domain_size must be >= 1");
}

void RotationConfig::Validate() const {
  if (window_k < 2 || window_k % 2 != 0) {
    throw ConfigError("window K must be a positive even integer");
  }
  if (horizon_t < window_k) throw ConfigError("horizon T must be >= K");
}

void UnlockPolicy::Validate() const {
  if (!(delta_slack >= 0.0 && delta_slack <= 1.0)) {
    throw ConfigError("unlock slack must lie in [0, 1]");
  }
  RotationConfig{window_k, window_k}.Validate();
  if (!total_budget.is_non_negative()) {
    throw ConfigError("total budget must be non-negative");
  }
}

double unlock_fraction(int k, int window_k, double delta_slack) {
  if (k < 1 || k > window_k) {
    throw ParameterError("rounds active must lie in [1, K]");
  }
  const int half_floor = window_k / 2;
  const int half_ceil = (window_k + 1) / 2;
  const double front = delta_slack * std::min(k, half_floor);
  const double back = delta_slack * std::max(0, k - half_ceil);
  return (k + front - back) / window_k;
}

RdpVector unlocked_budget(int k, const UnlockPolicy& policy) {
  const double fraction =
      unlock_fraction(k, policy.window_k, policy.delta_slack);
  if (k == policy.window_k) return policy.total_budget;
  return fraction * policy.total_budget;
}

BlockLedger BlockLedger::Fresh(int64_t group_id, int64_t cell,
                               int rounds_active, GridPtr grid) {
  return BlockLedger{
      group_id, cell, rounds_active, RdpVector::Zero(std::move(grid)), {}};
}

bool BlockLedger::SameState(const BlockLedger& other) const {
  return rounds_active == other.rounds_active && consumed == other.consumed &&
         history == other.history;
}

RdpVector available_budget(const BlockLedger& ledger,
                           const UnlockPolicy& policy) {
  return unlocked_budget(ledger.rounds_active, policy) - ledger.consumed;
}

BlockLedger consume(BlockLedger ledger, const RdpVector& charge,
                    const UnlockPolicy& policy) {
  if (!filter_admits(ledger.consumed, charge,
                     unlocked_budget(ledger.rounds_active, policy))) {
    throw BudgetExceededError("charge exceeds the block budget at every order");
  }
  ledger.consumed = compose(ledger.consumed, charge);
  ledger.history.push_back(charge);
  return ledger;
}

int64_t assign_group(int64_t arrival_round, int horizon_t,
                     std::mt19937_64& rng) {
  if (horizon_t < 1) throw ParameterError("horizon must be >= 1");
  std::uniform_int_distribution<int64_t> pick(1, horizon_t);
  return arrival_round + pick(rng);
}

Group::Group(int64_t id, int rounds_active, int64_t domain_size)
    : id_(id), rounds_active_(rounds_active), domain_size_(domain_size) {
  if (domain_size < 1) throw ParameterError("domain size must be >= 1");
  runs_.emplace(0, Run{{0, domain_size}, std::nullopt});
}

void Group::set_rounds_active(int k) {
  rounds_active_ = k;
  for (auto& [begin, run] : runs_) {
    if (run.ledger) run.ledger->rounds_active = k;
  }
}

RdpVector Group::Remaining(const CellSet& cells,
                           const UnlockPolicy& policy) const {
  const RdpVector fresh = unlocked_budget(rounds_active_, policy);
  RdpVector out = fresh;
  for (const CellRange& range : cells.ranges()) {
    auto it = runs_.upper_bound(range.begin);
    if (it != runs_.begin()) --it;
    for (; it != runs_.end() && it->first < range.end; ++it) {
      if (it->second.cells.end <= range.begin) continue;
      if (it->second.ledger) {
        out = cwiseMin(out, fresh - it->second.ledger->consumed);
      }
    }
  }
  return out;
}

namespace {

// Budget `tight` is at most `loose` at every order; marked orders count as
// the smallest value.
bool NoLooser(const RdpVector& tight, const RdpVector& loose) {
  for (Eigen::Index a = 0; a < tight.size(); ++a) {
    if (tight.is_marked(a)) continue;
    if (loose.is_marked(a) || tight[a] > loose[a]) return false;
  }
  return true;
}

}  // namespace

std::vector<RdpVector> Group::RemainingClasses(
    const CellSet& cells, const UnlockPolicy& policy) const {
  const RdpVector fresh = unlocked_budget(rounds_active_, policy);
  std::vector<RdpVector> seen;
  auto add = [&](RdpVector v) {
    for (const RdpVector& s : seen) {
      if (NoLooser(s, v)) return;
    }
    std::erase_if(seen, [&](const RdpVector& s) { return NoLooser(v, s); });
    seen.push_back(std::move(v));
  };
  for (const CellRange& range : cells.ranges()) {
    auto it = runs_.upper_bound(range.begin);
    if (it != runs_.begin()) --it;
    for (; it != runs_.end() && it->first < range.end; ++it) {
      if (it->second.cells.end <= range.begin) continue;
      add(it->second.ledger ? fresh - it->second.ledger->consumed : fresh);
    }
  }
  return seen;
}

std::vector<Group::Piece> Group::SumCharges(
    const std::vector<std::pair<CellSet, RdpVector>>& charges) const {
  std::set<int64_t> cuts;
  for (const auto& [cells, cost] : charges) {
    for (const CellRange& r : cells.ranges()) {
      cuts.insert(r.begin);
      cuts.insert(r.end);
    }
  }
  std::vector<Piece> pieces;
  if (cuts.empty()) return pieces;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const CellRange piece{*it, *std::next(it)};
    std::optional<RdpVector> sum;
    for (const auto& [cells, cost] : charges) {
      if (!cells.contains(piece.begin)) continue;
      sum = sum ? compose(*sum, cost) : cost;
    }
    if (sum) pieces.push_back({piece, std::move(*sum)});
  }
  return pieces;
}

void Group::SplitAt(int64_t cell) {
  if (cell <= 0 || cell >= domain_size_) return;
  auto it = runs_.upper_bound(cell);
  --it;
  if (it->first == cell) return;
  Run tail = it->second;
  tail.cells.begin = cell;
  if (tail.ledger) tail.ledger->attribute_cell = cell;
  it->second.cells.end = cell;
  runs_.emplace(cell, std::move(tail));
}

bool Group::Admits(const std::vector<std::pair<CellSet, RdpVector>>& charges,
                   const UnlockPolicy& policy) const {
  const RdpVector budget = unlocked_budget(rounds_active_, policy);
  for (const Piece& piece : SumCharges(charges)) {
    auto it = runs_.upper_bound(piece.cells.begin);
    --it;
    for (; it != runs_.end() && it->first < piece.cells.end; ++it) {
      const RdpVector consumed = it->second.ledger
                                     ? it->second.ledger->consumed
                                     : RdpVector::Zero(budget.grid_ptr());
      if (!filter_admits(consumed, piece.charge, budget)) return false;
    }
  }
  return true;
}

void Group::ApplyCharges(
    const std::vector<std::pair<CellSet, RdpVector>>& charges,
    const UnlockPolicy& policy) {
  if (!Admits(charges, policy)) {
    throw BudgetExceededError("group " + std::to_string(id_) +
                              ": charge refused by a block filter");
  }
  const std::vector<Piece> pieces = SumCharges(charges);
  for (const Piece& piece : pieces) {
    SplitAt(piece.cells.begin);
    SplitAt(piece.cells.end);
  }
  for (const Piece& piece : pieces) {
    for (auto it = runs_.find(piece.cells.begin);
         it != runs_.end() && it->first < piece.cells.end; ++it) {
      Run& run = it->second;
      if (!run.ledger) {
        run.ledger = BlockLedger::Fresh(id_, run.cells.begin, rounds_active_,
                                        piece.charge.grid_ptr());
      }
      run.ledger = consume(std::move(*run.ledger), piece.charge, policy);
    }
  }
  Coalesce();
}

void Group::Coalesce() {
  auto it = runs_.begin();
  while (it != runs_.end()) {
    auto next = std::next(it);
    if (next == runs_.end()) break;
    const auto& a = it->second.ledger;
    const auto& b = next->second.ledger;
    const bool same = (!a && !b) || (a && b && a->SameState(*b));
    if (same) {
      it->second.cells.end = next->second.cells.end;
      runs_.erase(next);
    } else {
      it = next;
    }
  }
}

std::vector<Group::Run> Group::runs() const {
  std::vector<Run> out;
  out.reserve(runs_.size());
  for (const auto& [begin, run] : runs_) out.push_back(run);
  return out;
}

void Group::RestoreRuns(std::vector<Run> runs) {
  std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    return a.cells.begin < b.cells.begin;
  });
  int64_t cursor = 0;
  std::map<int64_t, Run> table;
  for (Run& run : runs) {
    if (run.cells.begin != cursor || run.cells.end <= run.cells.begin) {
      throw ConfigError("ledger runs must tile the attribute domain");
    }
    cursor = run.cells.end;
    if (run.ledger) run.ledger->rounds_active = rounds_active_;
    table.emplace(run.cells.begin, std::move(run));
  }
  if (cursor != domain_size_) {
    throw ConfigError("ledger runs must tile the attribute domain");
  }
  runs_ = std::move(table);
}

RotationState RotationState::Initial(const RotationConfig& rotation,
                                     const AttributeSchema& schema) {
  rotation.Validate();
  schema.Validate();
  RotationState state;
  state.window_k = rotation.window_k;
  state.domain_size = schema.domain_size;
  for (int g = 1; g <= rotation.window_k; ++g) {
    state.active.emplace_back(g, rotation.window_k - g + 1, schema.domain_size);
  }
  return state;
}

std::vector<int64_t> RotationState::active_ids() const {
  std::vector<int64_t> ids;
  ids.reserve(active.size());
  for (const Group& g : active) ids.push_back(g.id());
  return ids;
}

const Group& RotationState::group(int64_t id) const {
  for (const Group& g : active) {
    if (g.id() == id) return g;
  }
  throw ParameterError("group " + std::to_string(id) + " is not active");
}

Group& RotationState::group(int64_t id) {
  return const_cast<Group&>(std::as_const(*this).group(id));
}

RotationState advance_round(RotationState state) {
  if (state.active.empty()) throw ParameterError("empty rotation window");
  const int64_t next_id = state.active.back().id() + 1;
  state.residual_pool.push_back(std::move(state.active.front()));
  state.active.pop_front();
  for (Group& g : state.active) g.set_rounds_active(g.rounds_active() + 1);
  state.active.emplace_back(next_id, 1, state.domain_size);
  ++state.round;
  return state;
}

RdpVector window_available(const RotationState& state, const CellSet& cells,
                           const UnlockPolicy& policy) {
  std::optional<RdpVector> out;
  for (const Group& g : state.active) {
    RdpVector r = g.Remaining(cells, policy);
    out = out ? cwiseMin(*out, r) : r;
  }
  if (!out) throw ParameterError("empty rotation window");
  return *out;
}

}  // namespace privplan
