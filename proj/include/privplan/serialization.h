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

// JSON documents exchanged by the command-line tools. Every document carries
// a "schema" tag; readers reject documents with an unexpected tag.

#ifndef PRIVPLAN_SERIALIZATION_H_
#define PRIVPLAN_SERIALIZATION_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "privplan/allocation.h"
#include "privplan/harness.h"
#include "privplan/population.h"
#include "privplan/request.h"

namespace privplan {

using Json = nlohmann::json;

inline constexpr char kConfigSchema[] = "privplan.config.v1";
inline constexpr char kRequestsSchema[] = "privplan.requests.v1";
inline constexpr char kLedgerSchema[] = "privplan.ledger.v1";
inline constexpr char kPoliciesSchema[] = "privplan.policies.v1";
inline constexpr char kMetricsSchema[] = "privplan.metrics.v1";

// Throws ConfigError unless doc["schema"] == expected.
void CheckSchema(const Json& doc, const char* expected);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const Json& doc);

// Marked orders are written as null.
Json RdpToJson(const RdpVector& v);
RdpVector RdpFromJson(const Json& j, GridPtr grid);

// [[begin, end), ...]
Json CellSetToJson(const CellSet& cells);
CellSet CellSetFromJson(const Json& j);

Json ConfigToJson(const SimulationConfig& config);
// Overlays the keys present in `doc` onto `config`; absent keys keep their
// current values.
void ApplyConfigJson(const Json& doc, SimulationConfig& config);

struct RequestBatch {
  int64_t round = 1;
  int64_t domain_size = 0;
  // Predicates removed (user-level baseline input).
  bool stripped = false;
  std::vector<RequestRecord> requests;
};

// With `stripped` the predicates are omitted and read back as the full
// domain.
Json RequestsToJson(const RequestBatch& batch);
RequestBatch RequestsFromJson(const Json& doc, GridPtr grid);

Json LedgerToJson(const RotationState& state);
RotationState LedgerFromJson(const Json& doc, GridPtr grid);

// Access policies of one or more rounds; an empty list still produces a
// document with its header.
Json PoliciesToJson(std::span<const PolicyRecord> policies);
std::vector<PolicyRecord> PoliciesFromJson(const Json& doc, GridPtr grid);

struct MetricsDocument {
  Json config;
  uint64_t seed = 0;
  std::vector<RoundMetrics> rounds;
  AuditResult audit;
};

Json MetricsToJson(const SimulationResult& result);
MetricsDocument MetricsFromJson(const Json& doc);
Json RoundMetricsToJson(const RoundMetrics& m);
RoundMetrics RoundMetricsFromJson(const Json& j);

}  // namespace privplan

#endif  // PRIVPLAN_SERIALIZATION_H_
