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

// Segments: maximal sets of cells demanded by the same set of requests.
// Only contested segments constrain the allocation; requests that touch none
// are accepted outright, requests that cannot fit alone are rejected.

#ifndef PRIVPLAN_SEGMENTATION_H_
#define PRIVPLAN_SEGMENTATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "privplan/cells.h"
#include "privplan/population.h"
#include "privplan/request.h"

namespace privplan {

struct Segment {
  // Sorted ids of the requests demanding every cell of the segment.
  std::vector<int64_t> signature;
  CellSet cells;
  std::vector<int64_t> group_ids;
  // Aligned with group_ids: element-wise minimum over the member cells.
  std::vector<RdpVector> per_group_remaining;
  // Aligned with group_ids: the distinct remaining budgets of the member
  // cells (see Group::RemainingClasses). Each one is its own constraint, so
  // cells with diverging histories keep their own witness order.
  std::vector<std::vector<RdpVector>> per_group_classes;
};

// Budgets constraining group `g` of the segment: its classes, or the
// minimum when no classes were recorded.
std::vector<RdpVector> budget_classes(const Segment& s, size_t g);

enum class SegmentMode {
  kSegments,  // merge cells with identical demand
  kPerCell,   // one constraint per demanded cell, no merging
};

// True when `request` charges `group_id` (its group list is empty or names it).
bool ChargesGroup(const RequestRecord& request, int64_t group_id);

std::vector<Segment> compute_segments(
    std::span<const RequestRecord> requests, const RotationState& state,
    const UnlockPolicy& policy, SegmentMode mode = SegmentMode::kSegments);

struct ContestedSplit {
  std::vector<size_t> contested;  // indices into the segment list
  std::vector<size_t> uncontested;
};

ContestedSplit classify_contested(std::span<const Segment> segments,
                                  std::span<const RequestRecord> requests);

struct PruneResult {
  std::vector<int64_t> auto_accept;
  std::vector<int64_t> auto_reject;
  std::vector<RequestRecord> residual_requests;
  std::vector<Segment> residual_segments;
};

PruneResult prune(std::span<const RequestRecord> requests,
                  std::span<const Segment> segments,
                  const ContestedSplit& split);

}  // namespace privplan

#endif  // PRIVPLAN_SEGMENTATION_H_
