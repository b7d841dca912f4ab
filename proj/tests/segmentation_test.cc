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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "testing/instances.h"

namespace privplan {
namespace {

using testing::Vec;

class SegmentationTest : public ::testing::Test {
 protected:
  SegmentationTest()
      : grid_(AlphaGrid::Make({2, 8})),
        // Slack 1 with K = 2 unlocks everything in the first round.
        policy_{1.0, 2, Vec(grid_, {1.0, 1.0})},
        state_(RotationState::Initial({2, 2}, {8})) {}

  RequestRecord Request(int64_t id, CellSet cells, double cost,
                        double utility = 1.0) {
    RequestRecord r;
    r.request_id = id;
    r.application_id = "app";
    r.predicate = std::move(cells);
    r.cost = Vec(grid_, {cost, cost});
    r.utility = utility;
    return r;
  }

  GridPtr grid_;
  UnlockPolicy policy_;
  RotationState state_;
};

TEST_F(SegmentationTest, EnumeratesSignatures) {
  // Cells 1..4 of the example map to 0..3 here.
  const std::vector<RequestRecord> requests = {
      Request(1, CellSet({{0, 2}}), 0.1), Request(2, CellSet({{1, 3}}), 0.1),
      Request(3, CellSet({{1, 4}}), 0.1)};
  const std::vector<Segment> segments =
      compute_segments(requests, state_, policy_);
  ASSERT_EQ(segments.size(), 4u);
  std::map<std::vector<int64_t>, CellSet> by_signature;
  for (const Segment& s : segments) by_signature[s.signature] = s.cells;
  EXPECT_EQ(by_signature[(std::vector<int64_t>{1})], CellSet({{0, 1}}));
  EXPECT_EQ(by_signature[(std::vector<int64_t>{1, 2, 3})], CellSet({{1, 2}}));
  EXPECT_EQ(by_signature[(std::vector<int64_t>{2, 3})], CellSet({{2, 3}}));
  EXPECT_EQ(by_signature[(std::vector<int64_t>{3})], CellSet({{3, 4}}));
}

TEST_F(SegmentationTest, SingleRequestIsOneSegment) {
  const std::vector<RequestRecord> requests = {
      Request(1, CellSet::Full(8), 0.1)};
  const std::vector<Segment> segments =
      compute_segments(requests, state_, policy_);
  ASSERT_EQ(segments.size(), 1u);
  EXPECT_EQ(segments[0].cells, CellSet::Full(8));
  EXPECT_EQ(segments[0].group_ids, state_.active_ids());
}

TEST_F(SegmentationTest, DisjointCellsWithOneSignatureMerge) {
  // Two blocks demanded by exactly the same requests form one segment.
  const std::vector<RequestRecord> requests = {
      Request(1, CellSet({{0, 2}}), 0.1), Request(2, CellSet({{1, 4}}), 0.1),
      Request(3, CellSet({{3, 4}, {6, 7}}), 0.1),
      Request(4, CellSet({{1, 2}, {3, 4}}), 0.1)};
  const std::vector<Segment> segments =
      compute_segments(requests, state_, policy_);
  for (const Segment& s : segments) {
    if (s.signature == std::vector<int64_t>{1, 2, 4}) {
      EXPECT_EQ(s.cells, CellSet({{1, 2}}));
    }
    if (s.signature == std::vector<int64_t>{2, 3, 4}) {
      EXPECT_EQ(s.cells, CellSet({{3, 4}}));
    }
  }
  const std::vector<RequestRecord> twins = {
      Request(1, CellSet({{0, 1}, {4, 5}}), 0.1),
      Request(2, CellSet({{0, 1}, {2, 3}, {4, 5}}), 0.1)};
  const std::vector<Segment> merged = compute_segments(twins, state_, policy_);
  ASSERT_EQ(merged.size(), 2u);
  for (const Segment& s : merged) {
    if (s.signature.size() == 2) {
      EXPECT_EQ(s.cells, CellSet({{0, 1}, {4, 5}}));
    }
  }
}

TEST_F(SegmentationTest, PartitionsDemandedCells) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int64_t> start(0, 63), length(1, 64);
  RotationState state = RotationState::Initial({2, 2}, {64});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RequestRecord> requests;
    const int n = 1 + int(rng() % 10);
    for (int i = 0; i < n; ++i) {
      requests.push_back(Request(
          i + 1, CellSet::CircularInterval(start(rng), length(rng), 64), 0.1));
    }
    const std::vector<Segment> segments =
        compute_segments(requests, state, policy_);
    std::set<int64_t> seen;
    std::set<std::vector<int64_t>> signatures;
    for (const Segment& s : segments) {
      EXPECT_TRUE(signatures.insert(s.signature).second);
      for (int64_t c : s.cells.ToCells()) {
        EXPECT_TRUE(seen.insert(c).second) << "cell in two segments";
        std::vector<int64_t> demanding;
        for (const RequestRecord& r : requests) {
          if (r.predicate.contains(c)) demanding.push_back(r.request_id);
        }
        EXPECT_EQ(demanding, s.signature);
      }
    }
    CellSet demanded;
    for (const RequestRecord& r : requests)
      demanded = demanded.Union(r.predicate);
    EXPECT_EQ(int64_t(seen.size()), demanded.size());
    EXPECT_LE(segments.size(), size_t(2 * n));
  }
}

TEST_F(SegmentationTest, RemainingIsTheMinimumOverCells) {
  Group& g = state_.group(1);
  g.ApplyCharges({{CellSet({{0, 1}}), Vec(grid_, {0.4, 0.1})},
                  {CellSet({{1, 2}}), Vec(grid_, {0.1, 0.3})}},
                 policy_);
  const std::vector<RequestRecord> requests = {
      Request(1, CellSet({{0, 2}}), 0.1)};
  const std::vector<Segment> segments =
      compute_segments(requests, state_, policy_);
  ASSERT_EQ(segments.size(), 1u);
  const RdpVector& remaining = segments[0].per_group_remaining[0];
  EXPECT_NEAR(remaining[0], 0.6, 1e-12);
  EXPECT_NEAR(remaining[1], 0.7, 1e-12);
  EXPECT_EQ(budget_classes(segments[0], 0).size(), 2u);
  EXPECT_EQ(budget_classes(segments[0], 1).size(), 1u);
  EXPECT_EQ(segments[0].per_group_remaining[1], policy_.total_budget);
}

TEST_F(SegmentationTest, ContestedClassification) {
  policy_.total_budget = Vec(grid_, {0.5, 0.5});
  const std::vector<RequestRecord> over = {Request(1, CellSet({{0, 1}}), 0.3),
                                           Request(2, CellSet({{0, 1}}), 0.3)};
  const auto seg_over = compute_segments(over, state_, policy_);
  EXPECT_EQ(classify_contested(seg_over, over).contested.size(), 1u);

  const std::vector<RequestRecord> exact = {
      Request(1, CellSet({{0, 1}}), 0.25), Request(2, CellSet({{0, 1}}), 0.25)};
  const auto seg_exact = compute_segments(exact, state_, policy_);
  EXPECT_TRUE(classify_contested(seg_exact, exact).contested.empty());

  const std::vector<RequestRecord> solo = {Request(1, CellSet({{0, 4}}), 0.4)};
  const auto seg_solo = compute_segments(solo, state_, policy_);
  EXPECT_TRUE(classify_contested(seg_solo, solo).contested.empty());
}

TEST_F(SegmentationTest, ContestedOnlyOnTheGroupsCharged) {
  policy_.total_budget = Vec(grid_, {0.5, 0.5});
  std::vector<RequestRecord> requests = {Request(1, CellSet({{0, 1}}), 0.3),
                                         Request(2, CellSet({{0, 1}}), 0.3)};
  requests[0].groups = {1};
  requests[1].groups = {2};
  const auto segments = compute_segments(requests, state_, policy_);
  EXPECT_TRUE(classify_contested(segments, requests).contested.empty());
}

TEST_F(SegmentationTest, PruneWithoutContentionAcceptsEverything) {
  const std::vector<RequestRecord> requests = {
      Request(1, CellSet({{0, 4}}), 0.1), Request(2, CellSet({{2, 8}}), 0.2)};
  const auto segments = compute_segments(requests, state_, policy_);
  const PruneResult p =
      prune(requests, segments, classify_contested(segments, requests));
  EXPECT_EQ(p.auto_accept, (std::vector<int64_t>{1, 2}));
  EXPECT_TRUE(p.auto_reject.empty());
  EXPECT_TRUE(p.residual_requests.empty());
  EXPECT_TRUE(p.residual_segments.empty());
}

TEST_F(SegmentationTest, PruneRejectsSoloViolations) {
  const std::vector<RequestRecord> requests = {
      Request(1, CellSet({{0, 4}}), 1.5), Request(2, CellSet({{2, 8}}), 0.6),
      Request(3, CellSet({{3, 5}}), 0.6), Request(4, CellSet({{7, 8}}), 0.1)};
  const auto segments = compute_segments(requests, state_, policy_);
  const ContestedSplit split = classify_contested(segments, requests);
  const PruneResult p = prune(requests, segments, split);
  EXPECT_EQ(p.auto_reject, (std::vector<int64_t>{1}));
  // Request 4 shares only an uncontested segment with request 2.
  EXPECT_EQ(p.auto_accept, (std::vector<int64_t>{4}));
  ASSERT_EQ(p.residual_requests.size(), 2u);
  for (const Segment& s : p.residual_segments) {
    EXPECT_EQ(std::count(s.signature.begin(), s.signature.end(), 1), 0);
  }
}

TEST_F(SegmentationTest, PerCellModeSplitsEveryCell) {
  const std::vector<RequestRecord> requests = {
      Request(1, CellSet({{0, 4}}), 0.1), Request(2, CellSet({{2, 8}}), 0.2)};
  const auto cells =
      compute_segments(requests, state_, policy_, SegmentMode::kPerCell);
  EXPECT_EQ(cells.size(), 8u);
  for (const Segment& s : cells) EXPECT_EQ(s.cells.size(), 1);
}

}  // namespace
}  // namespace privplan
