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

// Command-line entry point: generate, plan, simulate and report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privplan/allocation.h"
#include "privplan/errors.h"
#include "privplan/harness.h"
#include "privplan/report.h"
#include "privplan/serialization.h"
#include "privplan/workload.h"

namespace fs = std::filesystem;

namespace privplan {
namespace {

std::string RoundFileName(int64_t round) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "round_%04lld.requests.json",
                static_cast<long long>(round));
  return buf;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

struct GenerateArgs {
  std::string workload = "W1";
  uint64_t seed = 0;
  std::string profile = "paper";
  std::string out;
};

int RunGenerate(const GenerateArgs& args) {
  const SimulationConfig config = profile_config(
      ParseProfile(args.profile), ParseWorkload(args.workload), args.seed);
  CostCache costs(config.grid);
  const Workload w = generate(config.workload, costs);
  const fs::path out(args.out);
  WriteJsonFile(out / "workload.json", ConfigToJson(config));
  const int64_t domain = config.workload.domain_size;
  for (size_t r = 0; r < w.batches.size(); ++r) {
    RequestBatch sub{int64_t(r) + 1, domain, false, {}};
    RequestBatch upc{int64_t(r) + 1, domain, true, {}};
    for (const WorkloadRequest& req : w.batches[r]) {
      sub.requests.push_back(to_request_record(req, domain, true, costs));
      upc.requests.push_back(to_request_record(req, domain, false, costs));
    }
    WriteJsonFile(out / RoundFileName(sub.round), RequestsToJson(sub));
    WriteJsonFile(out / "upc" / RoundFileName(upc.round), RequestsToJson(upc));
  }
  std::cout << "wrote " << w.batches.size() << " rounds to " << out.string()
            << '\n';
  return 0;
}

struct PlanArgs {
  std::string config;
  std::string round_in;
  std::string ledger;
  std::string policies_out;
};

int RunPlan(const PlanArgs& args) {
  SimulationConfig config;
  ApplyConfigJson(ReadJsonFile(args.config), config);
  const RequestBatch batch =
      RequestsFromJson(ReadJsonFile(args.round_in), config.grid);
  config.workload.domain_size = batch.domain_size;
  config.Validate();
  const UnlockPolicy policy = config.unlock_policy();

  RotationState state =
      fs::exists(args.ledger)
          ? LedgerFromJson(ReadJsonFile(args.ledger), config.grid)
          : RotationState::Initial(config.rotation,
                                   AttributeSchema{batch.domain_size});
  if (state.domain_size != batch.domain_size ||
      state.window_k != config.rotation.window_k) {
    throw ConfigError("ledger does not match the configuration");
  }
  if (batch.round < state.round) {
    throw ConfigError("request batch is older than the ledger");
  }
  while (state.round < batch.round) state = advance_round(state);

  const PlannerOptions options = config.planner_options();
  RoundPlan plan;
  if (config.accounting == Accounting::kUpc) {
    std::mt19937_64 rng(config.workload.seed ^ uint64_t(batch.round));
    plan = account_upc(batch.requests, state, policy, options, rng);
  } else {
    plan = plan_round(batch.requests, state, policy, options);
  }
  // Policy ids continue from the ledger round so they stay increasing.
  PolicyContext context{state.round, config.global_budget.delta,
                        state.round * 1000000 + 1};
  const std::vector<PolicyRecord> policies =
      apply_allocation(plan.allocation, plan.requests, state, policy, context);
  WriteJsonFile(args.ledger, LedgerToJson(state));
  const Json doc = PoliciesToJson(policies);
  if (args.policies_out.empty()) {
    std::cout << doc.dump(1) << '\n';
  } else {
    WriteJsonFile(args.policies_out, doc);
  }
  std::cerr << "round " << state.round << ": accepted "
            << plan.allocation.accepted.size() << " of "
            << batch.requests.size() << " requests\n";
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::string profile = "desk";
  std::string workload = "W1";
  std::string algorithm = "dpk";
  std::string accounting = "subsampled";
  std::string objective = "utility";
  uint64_t seed = 0;
  int seeds = 5;
  double delta_slack = 0.4;
  std::string out;
};

int RunSimulate(const SimulateArgs& args, const CLI::App& cmd) {
  SimulationConfig config = profile_config(
      ParseProfile(args.profile), ParseWorkload(args.workload), args.seed);
  if (!args.config.empty()) ApplyConfigJson(ReadJsonFile(args.config), config);
  if (cmd.count("--workload")) {
    const WorkloadConfig preset =
        build_workload(ParseWorkload(args.workload), 0);
    config.workload.name = preset.name;
    config.workload.families = preset.families;
  }
  if (args.config.empty() || cmd.count("--algorithm")) {
    config.algorithm = ParseAlgorithm(args.algorithm);
  }
  if (args.config.empty() || cmd.count("--accounting")) {
    config.accounting = ParseAccounting(args.accounting);
  }
  if (args.config.empty() || cmd.count("--objective")) {
    config.objective = ParseObjective(args.objective);
  }
  if (cmd.count("--seed")) config.workload.seed = args.seed;
  if (cmd.count("--seeds")) config.seeds = args.seeds;
  if (cmd.count("--delta-slack")) config.delta_slack = args.delta_slack;
  config.Validate();

  const fs::path out(args.out);
  WriteJsonFile(out / "config.json", ConfigToJson(config));
  const uint64_t first = config.workload.seed;
  bool audit_ok = true;
  for (int i = 0; i < config.seeds; ++i) {
    SimulationConfig run = config;
    run.workload.seed = first + uint64_t(i);
    const SimulationResult result = run_simulation(run);
    const std::string stem = "seed_" + std::to_string(run.workload.seed);
    WriteJsonFile(out / (stem + ".metrics.json"), MetricsToJson(result));
    WriteJsonFile(out / (stem + ".policies.json"),
                  PoliciesToJson(result.policies));
    WriteJsonFile(out / (stem + ".ledger.json"),
                  LedgerToJson(result.final_state));
    double utility = 0.0;
    int64_t accepted = 0, offered = 0;
    for (const RoundMetrics& m : result.rounds) {
      utility += m.utility_accepted;
      accepted += m.requests_accepted;
      offered += m.requests_offered;
    }
    std::cout << "seed " << run.workload.seed << ": accepted " << accepted
              << "/" << offered << " requests, utility " << utility
              << ", audit " << (result.audit.passed ? "passed" : "FAILED")
              << " (max eps " << result.audit.max_epsilon << ")\n";
    audit_ok = audit_ok && result.audit.passed;
  }
  return audit_ok ? 0 : 3;
}

struct ReportArgs {
  std::string in;
  std::string compare;
};

int RunReport(const ReportArgs& args) {
  const std::vector<MetricsDocument> base = load_metrics_dir(args.in);
  const Summary summary = summarize(base);
  const fs::path in(args.in);
  const std::string table = summary_table(summary);
  WriteText(in / "summary.txt", table);
  WriteText(in / "series.csv", series_csv(summary));
  std::cout << table;
  if (!args.compare.empty()) {
    const std::vector<MetricsDocument> other = load_metrics_dir(args.compare);
    const std::string cmp = comparison_table(compare(base, other));
    WriteText(in / "comparison.txt", cmp);
    std::cout << "\ncompared with " << args.compare << " (other / base)\n"
              << cmp;
  }
  return 0;
}

}  // namespace
}  // namespace privplan

int main(int argc, char** argv) {
  using namespace privplan;
  CLI::App app{"Privacy budget planner for partitioned, rotating populations"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* g = app.add_subcommand("generate", "Write per-round request files");
  g->add_option("--workload", gen.workload, "W1, W2, W3 or W4")->required();
  g->add_option("--seed", gen.seed, "Random seed")->required();
  g->add_option("--profile", gen.profile, "desk or paper")
      ->capture_default_str();
  g->add_option("--out", gen.out, "Output directory")->required();

  PlanArgs plan;
  CLI::App* p = app.add_subcommand("plan", "Plan and apply a single round");
  p->add_option("--config", plan.config, "Configuration file")->required();
  p->add_option("--round-in", plan.round_in, "Request batch file")->required();
  p->add_option("--ledger", plan.ledger,
                "Ledger file, created if missing and updated in place")
      ->required();
  p->add_option("--policies-out", plan.policies_out,
                "Policy file (default: standard output)");

  SimulateArgs sim;
  CLI::App* s = app.add_subcommand("simulate", "Run the round-loop simulation");
  s->add_option("--config", sim.config, "Configuration file");
  s->add_option("--profile", sim.profile, "desk or paper")
      ->capture_default_str();
  s->add_option("--workload", sim.workload, "W1, W2, W3 or W4");
  s->add_option("--algorithm", sim.algorithm, "fcfs, dpf, dpk or exact")
      ->capture_default_str();
  s->add_option("--accounting", sim.accounting, "subsampled or upc")
      ->capture_default_str();
  s->add_option("--objective", sim.objective, "utility or request_count")
      ->capture_default_str();
  s->add_option("--seed", sim.seed, "First seed");
  s->add_option("--seeds", sim.seeds, "Number of seeds");
  s->add_option("--delta-slack", sim.delta_slack, "Unlocking slack in [0, 1]");
  s->add_option("--out", sim.out, "Output directory")->required();

  ReportArgs rep;
  CLI::App* r = app.add_subcommand("report", "Summarize simulation metrics");
  r->add_option("--in", rep.in, "Directory of metrics files")->required();
  r->add_option("--compare", rep.compare, "Second directory to compare with");

  CLI11_PARSE(app, argc, argv);
  try {
    if (g->parsed()) return RunGenerate(gen);
    if (p->parsed()) return RunPlan(plan);
    if (s->parsed()) return RunSimulate(sim, *s);
    if (r->parsed()) return RunReport(rep);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
