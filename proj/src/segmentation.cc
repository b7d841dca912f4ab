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

#include "privplan/segmentation.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "privplan/errors.h"

namespace privplan {

std::string_view TierName(Tier tier) {
  switch (tier) {
    case Tier::kMouse:
      return "mouse";
    case Tier::kHare:
      return "hare";
    case Tier::kElephant:
      return "elephant";
  }
  throw ParameterError("unknown tier");
}

Tier ParseTier(std::string_view name) {
  for (Tier t : {Tier::kMouse, Tier::kHare, Tier::kElephant}) {
    if (TierName(t) == name) return t;
  }
  throw ParameterError("unknown tier: " + std::string(name));
}

void RequestRecord::Validate() const {
  if (predicate.empty()) throw ParameterError("request selects no cells");
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw ParameterError("sample fraction must lie in (0, 1]");
  }
  if (!cost.has_grid() || !cost.is_non_negative()) {
    throw ParameterError("request cost must be a non-negative RDP vector");
  }
  if (!(utility >= 0.0)) throw ParameterError("request utility must be >= 0");
  if (required_groups < 0 ||
      (!groups.empty() && required_groups > int(groups.size()))) {
    throw ParameterError("required groups exceed the eligible groups");
  }
}

std::vector<RdpVector> budget_classes(const Segment& s, size_t g) {
  if (g < s.per_group_classes.size() && !s.per_group_classes[g].empty()) {
    return s.per_group_classes[g];
  }
  return {s.per_group_remaining.at(g)};
}

bool ChargesGroup(const RequestRecord& request, int64_t group_id) {
  return request.groups.empty() ||
         std::find(request.groups.begin(), request.groups.end(), group_id) !=
             request.groups.end();
}

namespace {

struct Piece {
  CellRange cells;
  std::vector<int64_t> signature;
};

// Elementary pieces between consecutive predicate endpoints, each with the
// sorted ids of the requests covering it. Undemanded pieces are dropped.
std::vector<Piece> SweepPieces(std::span<const RequestRecord> requests) {
  std::vector<std::pair<int64_t, int>> events;  // (cell, +/-(index+1))
  for (size_t i = 0; i < requests.size(); ++i) {
    for (const CellRange& r : requests[i].predicate.ranges()) {
      events.emplace_back(r.begin, int(i) + 1);
      events.emplace_back(r.end, -(int(i) + 1));
    }
  }
  std::sort(events.begin(), events.end());
  std::vector<Piece> pieces;
  std::set<int64_t> active;
  size_t e = 0;
  while (e < events.size()) {
    const int64_t at = events[e].first;
    for (; e < events.size() && events[e].first == at; ++e) {
      const int code = events[e].second;
      const int64_t id = requests[size_t(std::abs(code) - 1)].request_id;
      if (code > 0) {
        active.insert(id);
      } else {
        active.erase(id);
      }
    }
    if (e < events.size() && !active.empty()) {
      pieces.push_back({{at, events[e].first},
                        std::vector<int64_t>(active.begin(), active.end())});
    }
  }
  return pieces;
}

}  // namespace

std::vector<Segment> compute_segments(std::span<const RequestRecord> requests,
                                      const RotationState& state,
                                      const UnlockPolicy& policy,
                                      SegmentMode mode) {
  {
    std::unordered_set<int64_t> ids;
    for (const RequestRecord& r : requests) {
      if (!ids.insert(r.request_id).second) {
        throw ParameterError("duplicate request id " +
                             std::to_string(r.request_id));
      }
    }
  }
  std::vector<std::pair<std::vector<int64_t>, std::vector<CellRange>>> groups;
  const std::vector<Piece> pieces = SweepPieces(requests);
  if (mode == SegmentMode::kSegments) {
    std::map<std::vector<int64_t>, size_t> index;
    for (const Piece& p : pieces) {
      auto [it, inserted] = index.emplace(p.signature, groups.size());
      if (inserted) groups.emplace_back(p.signature, std::vector<CellRange>{});
      groups[it->second].second.push_back(p.cells);
    }
  } else {
    for (const Piece& p : pieces) {
      for (int64_t c = p.cells.begin; c < p.cells.end; ++c) {
        groups.emplace_back(p.signature, std::vector<CellRange>{{c, c + 1}});
      }
    }
  }

  const std::vector<int64_t> group_ids = state.active_ids();
  std::vector<Segment> segments;
  segments.reserve(groups.size());
  for (auto& [signature, ranges] : groups) {
    Segment s;
    s.signature = std::move(signature);
    s.cells = CellSet(std::move(ranges));
    s.group_ids = group_ids;
    for (const Group& g : state.active) {
      s.per_group_remaining.push_back(g.Remaining(s.cells, policy));
      s.per_group_classes.push_back(g.RemainingClasses(s.cells, policy));
    }
    segments.push_back(std::move(s));
  }
  return segments;
}

namespace {

std::unordered_map<int64_t, const RequestRecord*> IndexById(
    std::span<const RequestRecord> requests) {
  std::unordered_map<int64_t, const RequestRecord*> out;
  for (const RequestRecord& r : requests) out.emplace(r.request_id, &r);
  return out;
}

const RequestRecord& Lookup(
    const std::unordered_map<int64_t, const RequestRecord*>& index,
    int64_t id) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw ParameterError("segment references unknown request " +
                         std::to_string(id));
  }
  return *it->second;
}

// Sum of the costs the signature places on group `g` of the segment.
RdpVector GroupDemand(
    const Segment& s, size_t g,
    const std::unordered_map<int64_t, const RequestRecord*>& index) {
  RdpVector total = RdpVector::Zero(s.per_group_remaining[g].grid_ptr());
  for (int64_t id : s.signature) {
    const RequestRecord& r = Lookup(index, id);
    if (ChargesGroup(r, s.group_ids[g])) total = compose(total, r.cost);
  }
  return total;
}

}  // namespace

ContestedSplit classify_contested(std::span<const Segment> segments,
                                  std::span<const RequestRecord> requests) {
  const auto index = IndexById(requests);
  ContestedSplit split;
  for (size_t k = 0; k < segments.size(); ++k) {
    const Segment& s = segments[k];
    bool contested = false;
    for (size_t g = 0; g < s.group_ids.size() && !contested; ++g) {
      const RdpVector demand = GroupDemand(s, g, index);
      for (const RdpVector& budget : budget_classes(s, g)) {
        if (!filter_admits(RdpVector::Zero(budget.grid_ptr()), demand,
                           budget)) {
          contested = true;
          break;
        }
      }
    }
    (contested ? split.contested : split.uncontested).push_back(k);
  }
  return split;
}

PruneResult prune(std::span<const RequestRecord> requests,
                  std::span<const Segment> segments,
                  const ContestedSplit& split) {
  const auto index = IndexById(requests);
  std::unordered_set<int64_t> touches_contested;
  for (size_t k : split.contested) {
    for (int64_t id : segments[k].signature) touches_contested.insert(id);
  }

  // Groups on which each request fits alone on every segment it demands.
  std::unordered_map<int64_t, std::set<int64_t>> solo_violations;
  for (const Segment& s : segments) {
    for (int64_t id : s.signature) {
      const RequestRecord& r = Lookup(index, id);
      for (size_t g = 0; g < s.group_ids.size(); ++g) {
        if (!ChargesGroup(r, s.group_ids[g])) continue;
        for (const RdpVector& budget : budget_classes(s, g)) {
          if (!filter_admits(RdpVector::Zero(budget.grid_ptr()), r.cost,
                             budget)) {
            solo_violations[id].insert(s.group_ids[g]);
          }
        }
      }
    }
  }

  PruneResult result;
  std::unordered_set<int64_t> removed;
  for (const RequestRecord& r : requests) {
    if (!touches_contested.contains(r.request_id)) {
      result.auto_accept.push_back(r.request_id);
      removed.insert(r.request_id);
      continue;
    }
    auto it = solo_violations.find(r.request_id);
    if (it != solo_violations.end()) {
      const size_t eligible = r.groups.empty()
                                  ? segments.front().group_ids.size()
                                  : r.groups.size();
      const size_t required =
          r.required_groups > 0 ? size_t(r.required_groups) : eligible;
      if (eligible - it->second.size() < required) {
        result.auto_reject.push_back(r.request_id);
        removed.insert(r.request_id);
        continue;
      }
    }
    result.residual_requests.push_back(r);
  }

  for (size_t k : split.contested) {
    Segment s = segments[k];
    // Auto-accepted demand is charged before the residual problem is built.
    for (size_t g = 0; g < s.group_ids.size(); ++g) {
      RdpVector accepted = RdpVector::Zero(s.per_group_remaining[g].grid_ptr());
      for (int64_t id : s.signature) {
        const RequestRecord& r = Lookup(index, id);
        if (!touches_contested.contains(id) &&
            ChargesGroup(r, s.group_ids[g])) {
          accepted = compose(accepted, r.cost);
        }
      }
      s.per_group_remaining[g] = s.per_group_remaining[g] - accepted;
      for (RdpVector& budget : s.per_group_classes[g]) {
        budget = budget - accepted;
      }
    }
    std::erase_if(s.signature,
                  [&](int64_t id) { return removed.contains(id); });
    if (!s.signature.empty()) result.residual_segments.push_back(std::move(s));
  }
  return result;
}

}  // namespace privplan
