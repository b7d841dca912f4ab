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

// Export of a Problem as a 0/1 integer program in CPLEX LP text format, and
// import of a solver's variable assignment.
//
// Variables: y_i (request i accepted), x_i_g (request i granted group g),
// z_c_a (order a of constraint c switched off). Each constraint c needs
// sum_a z_c_a <= |A| - 1, so at least one order stays enforced.

#ifndef PRIVPLAN_LP_BRIDGE_H_
#define PRIVPLAN_LP_BRIDGE_H_

#include <istream>
#include <string>

#include "privplan/allocation.h"

namespace privplan {

std::string export_lp(const Problem& problem);

// Reads "name value" lines (comments start with '#'). Unlisted variables are
// zero. Requests with every eligible group required may omit their x
// variables.
Allocation import_solution(const Problem& problem, std::istream& solution);

}  // namespace privplan

#endif  // PRIVPLAN_LP_BRIDGE_H_
