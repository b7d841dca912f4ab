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

#ifndef PRIVPLAN_REQUEST_H_
#define PRIVPLAN_REQUEST_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "privplan/accounting.h"
#include "privplan/cells.h"
#include "privplan/rdp_vector.h"

namespace privplan {

enum class Tier { kMouse = 0, kHare = 1, kElephant = 2 };
inline constexpr int kNumTiers = 3;

std::string_view TierName(Tier tier);
Tier ParseTier(std::string_view name);

// One DP request as seen by the planner: which cells it reads, at which
// sampling fraction, and the per-block charge it incurs when accepted.
struct RequestRecord {
  int64_t request_id = 0;
  std::string application_id;
  CellSet predicate;
  double sample_fraction = 1.0;
  RdpVector cost;
  // Objective weight when maximizing utility.
  double utility = 0.0;
  double arrival_time = 0.0;
  // Groups the request charges; empty means every active group.
  std::vector<int64_t> groups;
  // Groups that must be granted (D_i); 0 means all of the eligible groups.
  int required_groups = 0;
  Tier tier = Tier::kMouse;
  MechanismKind mechanism = MechanismKind::kGaussian;

  void Validate() const;
};

}  // namespace privplan

#endif  // PRIVPLAN_REQUEST_H_
