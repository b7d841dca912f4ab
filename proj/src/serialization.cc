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

#include <cmath>
#include <fstream>
#include <limits>

#include "privplan/errors.h"

namespace privplan {
namespace {

// Reads a number that may be null (infinity).
double NumberOrInf(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity()
                     : j.get<double>();
}

Json InfOrNumber(double v) { return std::isinf(v) ? Json(nullptr) : Json(v); }

// Non-finite values are not representable in JSON.
Json FiniteOrNull(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

template <typename T>
void Overlay(const Json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

Json GroupToJson(const Group& g) {
  Json runs = Json::array();
  for (const Group::Run& run : g.runs()) {
    Json r = {{"begin", run.cells.begin}, {"end", run.cells.end}};
    if (run.ledger) {
      r["consumed"] = RdpToJson(run.ledger->consumed);
      Json history = Json::array();
      for (const RdpVector& h : run.ledger->history) {
        history.push_back(RdpToJson(h));
      }
      r["history"] = std::move(history);
    }
    runs.push_back(std::move(r));
  }
  return {{"id", g.id()},
          {"rounds_active", g.rounds_active()},
          {"population", g.population()},
          {"runs", std::move(runs)}};
}

Group GroupFromJson(const Json& j, int64_t domain_size, GridPtr grid) {
  Group g(j.at("id").get<int64_t>(), j.at("rounds_active").get<int>(),
          domain_size);
  g.set_population(j.value("population", int64_t{0}));
  std::vector<Group::Run> runs;
  for (const Json& r : j.at("runs")) {
    Group::Run run;
    run.cells = {r.at("begin").get<int64_t>(), r.at("end").get<int64_t>()};
    if (r.contains("consumed")) {
      BlockLedger ledger =
          BlockLedger::Fresh(g.id(), run.cells.begin, g.rounds_active(), grid);
      ledger.consumed = RdpFromJson(r.at("consumed"), grid);
      for (const Json& h : r.value("history", Json::array())) {
        ledger.history.push_back(RdpFromJson(h, grid));
      }
      run.ledger = std::move(ledger);
    }
    runs.push_back(std::move(run));
  }
  g.RestoreRuns(std::move(runs));
  return g;
}

}  // namespace

void CheckSchema(const Json& doc, const char* expected) {
  if (!doc.is_object() || !doc.contains("schema") ||
      doc.at("schema") != expected) {
    throw ConfigError(std::string("expected a document with schema ") +
                      expected);
  }
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const Json& doc) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

Json RdpToJson(const RdpVector& v) {
  Json out = Json::array();
  for (Eigen::Index a = 0; a < v.size(); ++a) out.push_back(InfOrNumber(v[a]));
  return out;
}

RdpVector RdpFromJson(const Json& j, GridPtr grid) {
  if (!j.is_array() || Eigen::Index(j.size()) != grid->size()) {
    throw ConfigError("RDP vector length does not match the alpha grid");
  }
  Eigen::ArrayXd eps(grid->size());
  for (Eigen::Index a = 0; a < grid->size(); ++a) {
    eps[a] = NumberOrInf(j[size_t(a)]);
  }
  return RdpVector(std::move(grid), std::move(eps));
}

Json CellSetToJson(const CellSet& cells) {
  Json out = Json::array();
  for (const CellRange& r : cells.ranges()) out.push_back({r.begin, r.end});
  return out;
}

CellSet CellSetFromJson(const Json& j) {
  std::vector<CellRange> ranges;
  for (const Json& r : j) {
    ranges.push_back({r.at(0).get<int64_t>(), r.at(1).get<int64_t>()});
  }
  return CellSet(std::move(ranges));
}

Json ConfigToJson(const SimulationConfig& c) {
  const WorkloadConfig& w = c.workload;
  Json families = Json::array();
  for (const RequestFamily& f : w.families) {
    families.push_back({{"mechanism", MechanismName(f.mechanism)},
                        {"probability", f.probability},
                        {"beta_a", f.beta_a},
                        {"beta_b", f.beta_b}});
  }
  Json fractions = Json::array();
  for (const FractionChoice& f : w.fraction_choices) {
    fractions.push_back(
        {{"fraction", f.fraction}, {"probability", f.probability}});
  }
  Json workload = {{"name", w.name},
                   {"rounds", w.rounds},
                   {"round_duration_minutes", w.round_duration_minutes},
                   {"request_interarrival_minutes",
                    InfOrNumber(w.request_interarrival_minutes)},
                   {"user_interarrival_seconds", w.user_interarrival_seconds},
                   {"domain_size", w.domain_size},
                   {"families", std::move(families)},
                   {"fraction_choices", std::move(fractions)},
                   {"tier_mix", w.tier_mix},
                   {"mechanism_delta", w.mechanism_delta},
                   {"repetitions", w.repetitions},
                   {"seed", w.seed},
                   {"utility",
                    {{"elasticity_budget", w.utility.elasticity_budget},
                     {"elasticity_data", w.utility.elasticity_data},
                     {"productivity_a", w.utility.productivity_a},
                     {"productivity_b", w.utility.productivity_b},
                     {"tier_cost", w.utility.tier_cost}}}};
  return {{"schema", kConfigSchema},
          {"workload", std::move(workload)},
          {"rotation",
           {{"window_k", c.rotation.window_k},
            {"horizon_t", c.rotation.horizon_t}}},
          {"delta_slack", c.delta_slack},
          {"alphas", c.grid->ToVector()},
          {"global_budget",
           {{"epsilon", c.global_budget.epsilon},
            {"delta", c.global_budget.delta}}},
          {"algorithm", AlgorithmName(c.algorithm)},
          {"accounting", AccountingName(c.accounting)},
          {"objective", ObjectiveName(c.objective)},
          {"prune", c.prune},
          {"exact",
           {{"time_limit_seconds", c.exact.time_limit_seconds},
            {"warm_start", c.exact.warm_start}}},
          {"seeds", c.seeds}};
}

void ApplyConfigJson(const Json& doc, SimulationConfig& c) {
  CheckSchema(doc, kConfigSchema);
  try {
    if (doc.contains("workload")) {
      const Json& w = doc.at("workload");
      WorkloadConfig& out = c.workload;
      if (w.contains("family")) {
        const WorkloadConfig preset = build_workload(
            ParseWorkload(w.at("family").get<std::string>()), out.seed);
        out.name = preset.name;
        out.families = preset.families;
      }
      Overlay(w, "name", out.name);
      Overlay(w, "rounds", out.rounds);
      Overlay(w, "round_duration_minutes", out.round_duration_minutes);
      if (w.contains("request_interarrival_minutes")) {
        out.request_interarrival_minutes =
            NumberOrInf(w.at("request_interarrival_minutes"));
      }
      if (w.contains("requests_per_round")) {
        out.request_interarrival_minutes =
            out.round_duration_minutes /
            w.at("requests_per_round").get<double>();
      }
      Overlay(w, "user_interarrival_seconds", out.user_interarrival_seconds);
      Overlay(w, "domain_size", out.domain_size);
      if (w.contains("families")) {
        out.families.clear();
        for (const Json& f : w.at("families")) {
          out.families.push_back(
              {ParseMechanism(f.at("mechanism").get<std::string>()),
               f.at("probability").get<double>(), f.at("beta_a").get<double>(),
               f.at("beta_b").get<double>()});
        }
      }
      if (w.contains("fraction_choices")) {
        out.fraction_choices.clear();
        for (const Json& f : w.at("fraction_choices")) {
          out.fraction_choices.push_back({f.at("fraction").get<double>(),
                                          f.at("probability").get<double>()});
        }
      }
      Overlay(w, "tier_mix", out.tier_mix);
      Overlay(w, "mechanism_delta", out.mechanism_delta);
      Overlay(w, "repetitions", out.repetitions);
      Overlay(w, "seed", out.seed);
      if (w.contains("utility")) {
        const Json& u = w.at("utility");
        Overlay(u, "elasticity_budget", out.utility.elasticity_budget);
        Overlay(u, "elasticity_data", out.utility.elasticity_data);
        Overlay(u, "productivity_a", out.utility.productivity_a);
        Overlay(u, "productivity_b", out.utility.productivity_b);
        Overlay(u, "tier_cost", out.utility.tier_cost);
      }
    }
    if (doc.contains("rotation")) {
      Overlay(doc.at("rotation"), "window_k", c.rotation.window_k);
      Overlay(doc.at("rotation"), "horizon_t", c.rotation.horizon_t);
    }
    Overlay(doc, "delta_slack", c.delta_slack);
    if (doc.contains("alphas")) {
      c.grid = AlphaGrid::Make(doc.at("alphas").get<std::vector<double>>());
    }
    if (doc.contains("global_budget")) {
      Overlay(doc.at("global_budget"), "epsilon", c.global_budget.epsilon);
      Overlay(doc.at("global_budget"), "delta", c.global_budget.delta);
    }
    if (doc.contains("algorithm")) {
      c.algorithm = ParseAlgorithm(doc.at("algorithm").get<std::string>());
    }
    if (doc.contains("accounting")) {
      c.accounting = ParseAccounting(doc.at("accounting").get<std::string>());
    }
    if (doc.contains("objective")) {
      c.objective = ParseObjective(doc.at("objective").get<std::string>());
    }
    Overlay(doc, "prune", c.prune);
    if (doc.contains("exact")) {
      Overlay(doc.at("exact"), "time_limit_seconds",
              c.exact.time_limit_seconds);
      Overlay(doc.at("exact"), "warm_start", c.exact.warm_start);
    }
    Overlay(doc, "seeds", c.seeds);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
}

Json RequestsToJson(const RequestBatch& batch) {
  Json requests = Json::array();
  for (const RequestRecord& r : batch.requests) {
    Json j = {{"id", r.request_id},
              {"application_id", r.application_id},
              {"arrival", r.arrival_time},
              {"fraction", r.sample_fraction},
              {"mechanism", MechanismName(r.mechanism)},
              {"tier", TierName(r.tier)},
              {"cost", RdpToJson(r.cost)},
              {"utility", r.utility},
              {"groups", r.groups},
              {"required_groups", r.required_groups}};
    if (!batch.stripped) j["predicate"] = CellSetToJson(r.predicate);
    requests.push_back(std::move(j));
  }
  const GridPtr grid =
      batch.requests.empty() ? nullptr : batch.requests.front().cost.grid_ptr();
  return {{"schema", kRequestsSchema},
          {"round", batch.round},
          {"domain_size", batch.domain_size},
          {"stripped", batch.stripped},
          {"alphas", grid ? Json(grid->ToVector()) : Json::array()},
          {"requests", std::move(requests)}};
}

RequestBatch RequestsFromJson(const Json& doc, GridPtr grid) {
  CheckSchema(doc, kRequestsSchema);
  RequestBatch batch;
  try {
    batch.round = doc.at("round").get<int64_t>();
    batch.domain_size = doc.at("domain_size").get<int64_t>();
    batch.stripped = doc.value("stripped", false);
    const auto alphas = doc.value("alphas", std::vector<double>{});
    if (!doc.at("requests").empty() && !(AlphaGrid(alphas) == *grid)) {
      throw ConfigError("request costs use a different alpha grid");
    }
    for (const Json& j : doc.at("requests")) {
      RequestRecord r;
      r.request_id = j.at("id").get<int64_t>();
      r.application_id = j.value("application_id", std::string());
      r.arrival_time = j.value("arrival", 0.0);
      r.sample_fraction = j.at("fraction").get<double>();
      r.mechanism = ParseMechanism(j.at("mechanism").get<std::string>());
      r.tier = ParseTier(j.at("tier").get<std::string>());
      r.cost = RdpFromJson(j.at("cost"), grid);
      r.utility = j.at("utility").get<double>();
      r.groups = j.value("groups", std::vector<int64_t>{});
      r.required_groups = j.value("required_groups", 0);
      r.predicate = j.contains("predicate") && !batch.stripped
                        ? CellSetFromJson(j.at("predicate"))
                        : CellSet::Full(batch.domain_size);
      r.Validate();
      batch.requests.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed request batch: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("malformed request batch: ") + e.what());
  }
  return batch;
}

Json LedgerToJson(const RotationState& state) {
  Json active = Json::array();
  for (const Group& g : state.active) active.push_back(GroupToJson(g));
  Json pool = Json::array();
  for (const Group& g : state.residual_pool) pool.push_back(GroupToJson(g));
  return {{"schema", kLedgerSchema},     {"round", state.round},
          {"window_k", state.window_k},  {"domain_size", state.domain_size},
          {"active", std::move(active)}, {"residual_pool", std::move(pool)}};
}

RotationState LedgerFromJson(const Json& doc, GridPtr grid) {
  CheckSchema(doc, kLedgerSchema);
  RotationState state;
  try {
    state.round = doc.at("round").get<int64_t>();
    state.window_k = doc.at("window_k").get<int>();
    state.domain_size = doc.at("domain_size").get<int64_t>();
    for (const Json& g : doc.at("active")) {
      state.active.push_back(GroupFromJson(g, state.domain_size, grid));
    }
    for (const Json& g : doc.at("residual_pool")) {
      state.residual_pool.push_back(GroupFromJson(g, state.domain_size, grid));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed ledger: ") + e.what());
  }
  if (int(state.active.size()) != state.window_k) {
    throw ConfigError("ledger window does not hold window_k groups");
  }
  return state;
}

Json PoliciesToJson(std::span<const PolicyRecord> policies) {
  Json list = Json::array();
  for (const PolicyRecord& p : policies) {
    list.push_back(
        {{"policy_id", p.policy_id},
         {"round", p.round},
         {"subject", {{"application_id", p.application_id}}},
         {"resource",
          {{"groups", p.groups}, {"predicate", CellSetToJson(p.predicate)}}},
         {"action",
          {{"request_id", p.request_id},
           {"granted", RdpToJson(p.granted)},
           {"delta", p.delta},
           {"sampling_fraction", p.sampling_fraction}}}});
  }
  Json alphas = policies.empty()
                    ? Json::array()
                    : Json(policies.front().granted.grid().ToVector());
  return {{"schema", kPoliciesSchema},
          {"alphas", std::move(alphas)},
          {"policies", std::move(list)}};
}

std::vector<PolicyRecord> PoliciesFromJson(const Json& doc, GridPtr grid) {
  CheckSchema(doc, kPoliciesSchema);
  std::vector<PolicyRecord> out;
  try {
    for (const Json& j : doc.at("policies")) {
      PolicyRecord p;
      p.policy_id = j.at("policy_id").get<int64_t>();
      p.round = j.at("round").get<int64_t>();
      p.application_id =
          j.at("subject").at("application_id").get<std::string>();
      p.groups = j.at("resource").at("groups").get<std::vector<int64_t>>();
      p.predicate = CellSetFromJson(j.at("resource").at("predicate"));
      const Json& a = j.at("action");
      p.request_id = a.at("request_id").get<int64_t>();
      p.granted = RdpFromJson(a.at("granted"), grid);
      p.delta = a.at("delta").get<double>();
      p.sampling_fraction = a.at("sampling_fraction").get<double>();
      out.push_back(std::move(p));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed policy file: ") + e.what());
  }
  return out;
}

Json RoundMetricsToJson(const RoundMetrics& m) {
  Json util = Json::array();
  for (double u : m.budget_utilization) util.push_back(FiniteOrNull(u));
  return {{"round", m.round},
          {"requests_offered", m.requests_offered},
          {"requests_accepted", m.requests_accepted},
          {"utility_offered", m.utility_offered},
          {"utility_accepted", m.utility_accepted},
          {"offered_by_tier", m.offered_by_tier},
          {"accepted_by_tier", m.accepted_by_tier},
          {"budget_utilization", std::move(util)},
          {"segments", m.segments},
          {"contested_segments", m.contested_segments},
          {"auto_accepted", m.auto_accepted},
          {"auto_rejected", m.auto_rejected},
          {"solver_timed_out", m.solver_timed_out},
          {"wall_ms", m.wall_ms}};
}

RoundMetrics RoundMetricsFromJson(const Json& j) {
  RoundMetrics m;
  m.round = j.at("round").get<int64_t>();
  m.requests_offered = j.at("requests_offered").get<int64_t>();
  m.requests_accepted = j.at("requests_accepted").get<int64_t>();
  m.utility_offered = j.at("utility_offered").get<double>();
  m.utility_accepted = j.at("utility_accepted").get<double>();
  j.at("offered_by_tier").get_to(m.offered_by_tier);
  j.at("accepted_by_tier").get_to(m.accepted_by_tier);
  for (const Json& u : j.at("budget_utilization")) {
    m.budget_utilization.push_back(
        u.is_null() ? std::numeric_limits<double>::quiet_NaN()
                    : u.get<double>());
  }
  m.segments = j.value("segments", int64_t{0});
  m.contested_segments = j.value("contested_segments", int64_t{0});
  m.auto_accepted = j.value("auto_accepted", int64_t{0});
  m.auto_rejected = j.value("auto_rejected", int64_t{0});
  m.solver_timed_out = j.value("solver_timed_out", false);
  m.wall_ms = j.value("wall_ms", 0.0);
  return m;
}

Json MetricsToJson(const SimulationResult& result) {
  Json rounds = Json::array();
  for (const RoundMetrics& m : result.rounds) {
    rounds.push_back(RoundMetricsToJson(m));
  }
  return {{"schema", kMetricsSchema},
          {"seed", result.config.workload.seed},
          {"config", ConfigToJson(result.config)},
          {"rounds", std::move(rounds)},
          {"audit",
           {{"passed", result.audit.passed},
            {"max_epsilon", result.audit.max_epsilon},
            {"ledgers_checked", result.audit.ledgers_checked}}}};
}

MetricsDocument MetricsFromJson(const Json& doc) {
  CheckSchema(doc, kMetricsSchema);
  MetricsDocument out;
  try {
    out.config = doc.at("config");
    out.seed = doc.at("seed").get<uint64_t>();
    for (const Json& r : doc.at("rounds")) {
      out.rounds.push_back(RoundMetricsFromJson(r));
    }
    const Json& a = doc.at("audit");
    out.audit.passed = a.at("passed").get<bool>();
    out.audit.max_epsilon = a.at("max_epsilon").get<double>();
    out.audit.ledgers_checked = a.at("ledgers_checked").get<int64_t>();
  } catch (const Json::exception& e) {
    throw ReportError(std::string("malformed metrics file: ") + e.what());
  }
  return out;
}

}  // namespace privplan
