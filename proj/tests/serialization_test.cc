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

#include "privplan/serialization.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "privplan/errors.h"
#include "testing/instances.h"

namespace privplan {
namespace {

using testing::Vec;

SimulationResult SmallRun(uint64_t seed) {
  SimulationConfig c =
      profile_config(Profile::kDesk, WorkloadFamily::kW2, seed);
  c.workload.rounds = 3;
  return run_simulation(c);
}

TEST(RdpJsonTest, MarkedOrdersAreNull) {
  const GridPtr grid = AlphaGrid::Make({2, 8});
  const RdpVector v = Vec(grid, {kInfeasible, 0.5});
  const Json j = RdpToJson(v);
  EXPECT_TRUE(j[0].is_null());
  EXPECT_EQ(RdpFromJson(j, grid), v);
  EXPECT_THROW(RdpFromJson(Json::array({1.0}), grid), ConfigError);
}

TEST(CellSetJsonTest, RoundTrip) {
  const CellSet s({{0, 3}, {7, 9}});
  EXPECT_EQ(CellSetToJson(s).dump(), "[[0,3],[7,9]]");
  EXPECT_EQ(CellSetFromJson(CellSetToJson(s)), s);
}

TEST(SchemaTest, RejectsWrongTags) {
  EXPECT_THROW(CheckSchema(Json::object(), kLedgerSchema), ConfigError);
  EXPECT_THROW(CheckSchema(Json{{"schema", kMetricsSchema}}, kLedgerSchema),
               ConfigError);
  EXPECT_NO_THROW(CheckSchema(Json{{"schema", kLedgerSchema}}, kLedgerSchema));
  EXPECT_THROW(MetricsFromJson(Json{{"schema", kMetricsSchema}}), ReportError);
}

TEST(ConfigJsonTest, RoundTrip) {
  SimulationConfig c = profile_config(Profile::kDesk, WorkloadFamily::kW4, 11);
  c.algorithm = Algorithm::kDpf;
  c.accounting = Accounting::kUpc;
  c.objective = ObjectiveMode::kRequestCount;
  c.delta_slack = 0.8;
  c.workload.fraction_choices = {{0.05, 0.5}, {0.85, 0.5}};
  c.exact.time_limit_seconds = 5;
  const Json j = ConfigToJson(c);
  EXPECT_EQ(j.at("schema"), kConfigSchema);
  SimulationConfig back;
  ApplyConfigJson(j, back);
  EXPECT_EQ(ConfigToJson(back), j);
}

TEST(ConfigJsonTest, PartialDocumentsOverlay) {
  SimulationConfig c = profile_config(Profile::kDesk, WorkloadFamily::kW1, 2);
  const Json doc = Json::parse(R"({
    "schema": "privplan.config.v1",
    "workload": {"family": "W3", "requests_per_round": 20},
    "delta_slack": 0.0,
    "algorithm": "fcfs"
  })");
  ApplyConfigJson(doc, c);
  EXPECT_EQ(c.workload.name, "W3");
  EXPECT_EQ(c.workload.families.size(), 2u);
  EXPECT_DOUBLE_EQ(c.workload.expected_requests_per_round(), 20);
  EXPECT_EQ(c.workload.domain_size, 2048);
  EXPECT_EQ(c.delta_slack, 0.0);
  EXPECT_EQ(c.algorithm, Algorithm::kFcfs);
  EXPECT_EQ(c.workload.seed, 2u);
}

TEST(ConfigJsonTest, Errors) {
  SimulationConfig c;
  EXPECT_THROW(ApplyConfigJson(Json{{"schema", "privplan.config.v0"}}, c),
               ConfigError);
  EXPECT_THROW(ApplyConfigJson(
                   Json{{"schema", kConfigSchema}, {"algorithm", "best"}}, c),
               ConfigError);
  EXPECT_THROW(
      ApplyConfigJson(Json{{"schema", kConfigSchema}, {"delta_slack", "x"}}, c),
      ConfigError);
  EXPECT_THROW(ApplyConfigJson(
                   Json{{"schema", kConfigSchema}, {"alphas", {1.0, 2.0}}}, c),
               ConfigError);
}

TEST(RequestsJsonTest, RoundTrip) {
  const GridPtr grid = AlphaGrid::Make({2, 8});
  RequestBatch batch;
  batch.round = 4;
  batch.domain_size = 16;
  RequestRecord r;
  r.request_id = 9;
  r.application_id = "app-9";
  r.predicate = CellSet({{14, 16}, {0, 2}});
  r.sample_fraction = 0.25;
  r.cost = Vec(grid, {0.1, 0.4});
  r.utility = 0.3;
  r.arrival_time = 12.5;
  r.tier = Tier::kHare;
  r.mechanism = MechanismKind::kSparseVector;
  batch.requests = {r};
  const Json j = RequestsToJson(batch);
  const RequestBatch back = RequestsFromJson(j, grid);
  EXPECT_EQ(back.round, 4);
  ASSERT_EQ(back.requests.size(), 1u);
  const RequestRecord& q = back.requests[0];
  EXPECT_EQ(q.predicate, r.predicate);
  EXPECT_EQ(q.cost, r.cost);
  EXPECT_EQ(q.tier, Tier::kHare);
  EXPECT_EQ(q.mechanism, MechanismKind::kSparseVector);
  EXPECT_EQ(q.sample_fraction, 0.25);
  EXPECT_EQ(RequestsToJson(back), j);

  batch.stripped = true;
  const Json s = RequestsToJson(batch);
  EXPECT_FALSE(s["requests"][0].contains("predicate"));
  EXPECT_EQ(RequestsFromJson(s, grid).requests[0].predicate, CellSet::Full(16));

  EXPECT_THROW(RequestsFromJson(j, AlphaGrid::Make({2, 4})), ConfigError);
}

TEST(LedgerJsonTest, RoundTrip) {
  const SimulationResult r = SmallRun(3);
  const Json j = LedgerToJson(r.final_state);
  const RotationState back = LedgerFromJson(j, r.config.grid);
  EXPECT_EQ(LedgerToJson(back), j);
  EXPECT_EQ(back.active_ids(), r.final_state.active_ids());
  EXPECT_EQ(back.residual_pool.size(), 2u);
  // A restored state keeps planning where the original left off.
  const UnlockPolicy policy = r.config.unlock_policy();
  const CellSet all = CellSet::Full(r.final_state.domain_size);
  EXPECT_EQ(window_available(back, all, policy),
            window_available(r.final_state, all, policy));

  Json broken = j;
  broken["active"].erase(0);
  EXPECT_THROW(LedgerFromJson(broken, r.config.grid), ConfigError);
  broken = j;
  broken["active"][0]["runs"][0]["begin"] = 5;
  EXPECT_THROW(LedgerFromJson(broken, r.config.grid), ConfigError);
}

TEST(PoliciesJsonTest, RoundTripAndEmptyHeader) {
  const SimulationResult r = SmallRun(4);
  ASSERT_FALSE(r.policies.empty());
  const Json j = PoliciesToJson(r.policies);
  const std::vector<PolicyRecord> back = PoliciesFromJson(j, r.config.grid);
  EXPECT_EQ(PoliciesToJson(back), j);
  const Json& first = j["policies"][0];
  EXPECT_TRUE(first["subject"].contains("application_id"));
  EXPECT_TRUE(first["resource"].contains("groups"));
  EXPECT_TRUE(first["resource"].contains("predicate"));
  EXPECT_TRUE(first["action"].contains("sampling_fraction"));

  const Json empty = PoliciesToJson({});
  EXPECT_EQ(empty.at("schema"), kPoliciesSchema);
  EXPECT_TRUE(empty.at("policies").empty());
}

TEST(MetricsJsonTest, RoundTrip) {
  const SimulationResult r = SmallRun(5);
  const Json j = MetricsToJson(r);
  const MetricsDocument back = MetricsFromJson(j);
  EXPECT_EQ(back.seed, 5u);
  ASSERT_EQ(back.rounds.size(), r.rounds.size());
  for (size_t i = 0; i < back.rounds.size(); ++i) {
    EXPECT_EQ(RoundMetricsToJson(back.rounds[i]),
              RoundMetricsToJson(r.rounds[i]));
  }
  EXPECT_EQ(back.audit.passed, r.audit.passed);
  EXPECT_EQ(back.config, ConfigToJson(r.config));
}

TEST(FileTest, WriteCreatesDirectories) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "privplan_serialization_test";
  std::filesystem::remove_all(dir);
  const std::filesystem::path file = dir / "a" / "b.json";
  WriteJsonFile(file, Json{{"schema", kConfigSchema}});
  EXPECT_EQ(ReadJsonFile(file).at("schema"), kConfigSchema);
  EXPECT_THROW(ReadJsonFile(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace privplan
