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

#include <algorithm>

#include "privplan/errors.h"

namespace privplan {

CellSet::CellSet(std::vector<CellRange> ranges) {
  std::erase_if(ranges, [](const CellRange& r) { return r.end <= r.begin; });
  std::sort(
      ranges.begin(), ranges.end(),
      [](const CellRange& a, const CellRange& b) { return a.begin < b.begin; });
  for (const CellRange& r : ranges) {
    if (!ranges_.empty() && r.begin <= ranges_.back().end) {
      ranges_.back().end = std::max(ranges_.back().end, r.end);
    } else {
      ranges_.push_back(r);
    }
  }
}

CellSet CellSet::CircularInterval(int64_t start, int64_t length,
                                  int64_t domain_size) {
  if (domain_size < 1) throw ParameterError("domain size must be >= 1");
  if (start < 0 || start >= domain_size) {
    throw ParameterError("interval start outside the domain");
  }
  if (length < 1 || length > domain_size) {
    throw ParameterError("interval length must lie in [1, domain]");
  }
  const int64_t end = start + length;
  if (end <= domain_size) return CellSet({{start, end}});
  return CellSet({{start, domain_size}, {0, end - domain_size}});
}

CellSet CellSet::FromCells(std::vector<int64_t> cells) {
  std::vector<CellRange> ranges;
  ranges.reserve(cells.size());
  for (int64_t c : cells) ranges.push_back({c, c + 1});
  return CellSet(std::move(ranges));
}

CellSet CellSet::Full(int64_t domain_size) {
  return CellSet({{0, domain_size}});
}

int64_t CellSet::size() const {
  int64_t n = 0;
  for (const CellRange& r : ranges_) n += r.size();
  return n;
}

bool CellSet::contains(int64_t cell) const {
  auto it = std::upper_bound(
      ranges_.begin(), ranges_.end(), cell,
      [](int64_t c, const CellRange& r) { return c < r.begin; });
  if (it == ranges_.begin()) return false;
  --it;
  return cell < it->end;
}

std::vector<int64_t> CellSet::ToCells() const {
  std::vector<int64_t> out;
  out.reserve(size_t(size()));
  for (const CellRange& r : ranges_) {
    for (int64_t c = r.begin; c < r.end; ++c) out.push_back(c);
  }
  return out;
}

CellSet CellSet::Intersect(const CellSet& other) const {
  std::vector<CellRange> out;
  size_t i = 0, j = 0;
  while (i < ranges_.size() && j < other.ranges_.size()) {
    const CellRange& a = ranges_[i];
    const CellRange& b = other.ranges_[j];
    const int64_t lo = std::max(a.begin, b.begin);
    const int64_t hi = std::min(a.end, b.end);
    if (lo < hi) out.push_back({lo, hi});
    if (a.end < b.end) {
      ++i;
    } else {
      ++j;
    }
  }
  return CellSet(std::move(out));
}

CellSet CellSet::Union(const CellSet& other) const {
  std::vector<CellRange> all = ranges_;
  all.insert(all.end(), other.ranges_.begin(), other.ranges_.end());
  return CellSet(std::move(all));
}

}  // namespace privplan
