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

#ifndef PRIVPLAN_CELLS_H_
#define PRIVPLAN_CELLS_H_

#include <cstdint>
#include <vector>

namespace privplan {

// Half-open range [begin, end) of flattened attribute cells.
struct CellRange {
  int64_t begin = 0;
  int64_t end = 0;

  int64_t size() const { return end - begin; }
  bool operator==(const CellRange&) const = default;
};

// A set of attribute cells stored as sorted, disjoint, non-adjacent ranges.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::vector<CellRange> ranges);

  // [start, start + length) modulo domain_size; wraps around the end.
  static CellSet CircularInterval(int64_t start, int64_t length,
                                  int64_t domain_size);
  static CellSet FromCells(std::vector<int64_t> cells);
  static CellSet Full(int64_t domain_size);

  const std::vector<CellRange>& ranges() const { return ranges_; }
  bool empty() const { return ranges_.empty(); }
  int64_t size() const;
  bool contains(int64_t cell) const;
  std::vector<int64_t> ToCells() const;

  CellSet Intersect(const CellSet& other) const;
  CellSet Union(const CellSet& other) const;

  bool operator==(const CellSet&) const = default;

 private:
  std::vector<CellRange> ranges_;
};

}  // namespace privplan

#endif  // PRIVPLAN_CELLS_H_
