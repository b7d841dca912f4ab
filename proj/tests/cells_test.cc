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

#include "privplan/cells.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "privplan/errors.h"

namespace privplan {
namespace {

std::set<int64_t> AsSet(const CellSet& s) {
  const std::vector<int64_t> cells = s.ToCells();
  return {cells.begin(), cells.end()};
}

TEST(CellSetTest, NormalizesRanges) {
  const CellSet s({{5, 8}, {0, 2}, {2, 3}, {7, 10}, {4, 4}});
  const std::vector<CellRange> expected = {{0, 3}, {5, 10}};
  EXPECT_EQ(s.ranges(), expected);
  EXPECT_EQ(s.size(), 8);
  EXPECT_TRUE(s.contains(0));
  EXPECT_TRUE(s.contains(9));
  EXPECT_FALSE(s.contains(3));
  EXPECT_FALSE(s.contains(10));
  EXPECT_FALSE(s.contains(-1));
}

TEST(CellSetTest, CircularIntervalWraps) {
  const CellSet s = CellSet::CircularInterval(6, 4, 8);
  const std::vector<CellRange> expected = {{0, 2}, {6, 8}};
  EXPECT_EQ(s.ranges(), expected);
  EXPECT_EQ(CellSet::CircularInterval(0, 8, 8), CellSet::Full(8));
  EXPECT_EQ(CellSet::CircularInterval(7, 1, 8).ToCells(),
            std::vector<int64_t>{7});
}

TEST(CellSetTest, CircularIntervalRejectsBadArguments) {
  EXPECT_THROW(CellSet::CircularInterval(0, 0, 8), ParameterError);
  EXPECT_THROW(CellSet::CircularInterval(0, 9, 8), ParameterError);
  EXPECT_THROW(CellSet::CircularInterval(8, 1, 8), ParameterError);
  EXPECT_THROW(CellSet::CircularInterval(0, 1, 0), ParameterError);
}

TEST(CellSetTest, FromCellsMergesNeighbours) {
  const CellSet s = CellSet::FromCells({4, 2, 3, 9, 3});
  const std::vector<CellRange> expected = {{2, 5}, {9, 10}};
  EXPECT_EQ(s.ranges(), expected);
}

TEST(CellSetTest, SetOperationsMatchReference) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cell(0, 63);
  std::bernoulli_distribution keep(0.3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int64_t> a_cells, b_cells;
    for (int c = 0; c < 64; ++c) {
      if (keep(rng)) a_cells.push_back(c);
      if (keep(rng)) b_cells.push_back(c);
    }
    const CellSet a = CellSet::FromCells(a_cells);
    const CellSet b = CellSet::FromCells(b_cells);
    const std::set<int64_t> sa(a_cells.begin(), a_cells.end());
    const std::set<int64_t> sb(b_cells.begin(), b_cells.end());
    std::set<int64_t> inter, uni;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::inserter(inter, inter.end()));
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(),
                   std::inserter(uni, uni.end()));
    EXPECT_EQ(AsSet(a.Intersect(b)), inter);
    EXPECT_EQ(AsSet(a.Union(b)), uni);
    EXPECT_EQ(a.Intersect(b), b.Intersect(a));
    EXPECT_EQ(a.size(), int64_t(sa.size()));
    const int64_t probe = cell(rng);
    EXPECT_EQ(a.contains(probe), sa.count(probe) == 1);
  }
}

TEST(CellSetTest, EmptySet) {
  const CellSet empty;
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(empty.size(), 0);
  EXPECT_TRUE(CellSet::Full(4).Intersect(empty).empty());
  EXPECT_EQ(CellSet::Full(4).Union(empty), CellSet::Full(4));
}

}  // namespace
}  // namespace privplan
