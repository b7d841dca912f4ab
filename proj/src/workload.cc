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

#include "privplan/workload.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privplan/errors.h"

namespace privplan {
namespace {

constexpr uint64_t kUserStream = 0x9e3779b97f4a7c15ULL;

void CheckCategorical(const std::vector<double>& weights, const char* what) {
  if (weights.empty()) throw ConfigError(std::string(what) + " is empty");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw ConfigError(std::string(what) + " has a negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError(std::string(what) + " weights must sum to 1");
  }
}

RequestFamily Family(MechanismKind kind, double p) {
  switch (kind) {
    case MechanismKind::kGaussian:
    case MechanismKind::kLaplace:
      return {kind, p, 1.0, 10.0};
    case MechanismKind::kSparseVector:
    case MechanismKind::kRandomizedResponse:
      return {kind, p, 1.0, 0.5};
    case MechanismKind::kNoisySgd:
    case MechanismKind::kPate:
      return {kind, p, 2.0, 2.0};
  }
  throw ParameterError("unknown mechanism");
}

}  // namespace

std::string_view WorkloadName(WorkloadFamily f) {
  switch (f) {
    case WorkloadFamily::kW1:
      return "W1";
    case WorkloadFamily::kW2:
      return "W2";
    case WorkloadFamily::kW3:
      return "W3";
    case WorkloadFamily::kW4:
      return "W4";
  }
  throw ParameterError("unknown workload");
}

WorkloadFamily ParseWorkload(std::string_view name) {
  for (auto f : {WorkloadFamily::kW1, WorkloadFamily::kW2, WorkloadFamily::kW3,
                 WorkloadFamily::kW4}) {
    if (WorkloadName(f) == name) return f;
  }
  throw ParameterError("unknown workload: " + std::string(name));
}

double TierEpsilon(MechanismKind kind, Tier tier) {
  const auto& table =
      IsGaussianFamily(kind) ? kGaussianTierEpsilon : kPureTierEpsilon;
  return table[size_t(tier)];
}

void UtilityModel::Validate() const {
  if (!(elasticity_budget > 0.0) || !(elasticity_data > 0.0)) {
    throw ConfigError("utility elasticities must be > 0");
  }
  if (!(productivity_a > 0.0) || !(productivity_b > 0.0)) {
    throw ConfigError("productivity Beta parameters must be > 0");
  }
}

void WorkloadConfig::Validate() const {
  if (rounds < 0) throw ConfigError("rounds must be >= 0");
  if (!(round_duration_minutes > 0.0)) {
    throw ConfigError("round duration must be > 0");
  }
  if (!(request_interarrival_minutes > 0.0)) {
    throw ConfigError("request inter-arrival time must be > 0");
  }
  if (!(user_interarrival_seconds > 0.0)) {
    throw ConfigError("user inter-arrival time must be > 0");
  }
  if (domain_size < 1) throw ConfigError("domain size must be >= 1");
  std::vector<double> w;
  for (const RequestFamily& f : families) {
    if (!(f.beta_a > 0.0) || !(f.beta_b > 0.0)) {
      throw ConfigError("selection Beta parameters must be > 0");
    }
    w.push_back(f.probability);
  }
  CheckCategorical(w, "mechanism mix");
  w.clear();
  for (const FractionChoice& f : fraction_choices) {
    if (!(f.fraction > 0.0 && f.fraction <= 1.0)) {
      throw ConfigError("sampled fractions must lie in (0, 1]");
    }
    w.push_back(f.probability);
  }
  CheckCategorical(w, "fraction choices");
  CheckCategorical(std::vector<double>(tier_mix.begin(), tier_mix.end()),
                   "tier mix");
  if (!(mechanism_delta > 0.0 && mechanism_delta < 1.0)) {
    throw ConfigError("mechanism delta must lie in (0, 1)");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  utility.Validate();
}

double WorkloadConfig::expected_requests_per_round() const {
  return round_duration_minutes / request_interarrival_minutes;
}

const RdpVector& CostCache::Base(const MechanismSpec& spec) {
  return Amplified(spec, 1.0);
}

const RdpVector& CostCache::Amplified(const MechanismSpec& spec, double gamma) {
  const Key key{int(spec.kind), spec.target_epsilon, spec.target_delta,
                spec.repetitions, gamma};
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  RdpVector cost = gamma == 1.0 ? mechanism_rdp(spec, grid_)
                                : amplified_mechanism_rdp(spec, gamma, grid_);
  return cache_.emplace(key, std::move(cost)).first->second;
}

double sample_beta(double a, double b, std::mt19937_64& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  if (x + y == 0.0) return 0.5;
  return x / (x + y);
}

Selection sample_selection(double beta_a, double beta_b, int64_t domain_size,
                           std::mt19937_64& rng) {
  if (!(beta_a > 0.0) || !(beta_b > 0.0)) {
    throw ParameterError("Beta parameters must be > 0");
  }
  const double s = sample_beta(beta_a, beta_b, rng);
  int64_t length = std::llround(s * double(domain_size));
  length = std::clamp<int64_t>(length, 1, domain_size);
  std::uniform_int_distribution<int64_t> start(0, domain_size - 1);
  return {start(rng), length};
}

double cobb_douglas(double productivity, double privacy_cost,
                    double data_amount, const UtilityModel& model) {
  return productivity * std::pow(privacy_cost, model.elasticity_budget) *
         std::pow(data_amount, model.elasticity_data);
}

double assign_utility(Tier tier, double data_amount, const UtilityModel& model,
                      std::mt19937_64& rng) {
  const double a = sample_beta(model.productivity_a, model.productivity_b, rng);
  return cobb_douglas(a, model.tier_cost[size_t(tier)], data_amount, model);
}

WorkloadConfig build_workload(WorkloadFamily family, uint64_t seed) {
  using MK = MechanismKind;
  WorkloadConfig c;
  c.name = std::string(WorkloadName(family));
  c.seed = seed;
  switch (family) {
    case WorkloadFamily::kW1:
      c.families = {Family(MK::kGaussian, 1.0)};
      break;
    case WorkloadFamily::kW2:
      for (MK k : {MK::kGaussian, MK::kLaplace, MK::kSparseVector,
                   MK::kRandomizedResponse}) {
        c.families.push_back(Family(k, 0.25));
      }
      break;
    case WorkloadFamily::kW3:
      c.families = {Family(MK::kNoisySgd, 0.5), Family(MK::kPate, 0.5)};
      break;
    case WorkloadFamily::kW4:
      for (MK k : {MK::kGaussian, MK::kLaplace, MK::kSparseVector,
                   MK::kRandomizedResponse, MK::kNoisySgd, MK::kPate}) {
        c.families.push_back(Family(k, 1.0 / 6));
      }
      break;
  }
  return c;
}

Workload generate(const WorkloadConfig& config, CostCache& costs) {
  config.Validate();
  Workload w;
  w.config = config;
  w.batches.resize(size_t(config.rounds));
  w.user_arrivals.assign(size_t(config.rounds), 0);

  std::mt19937_64 rng(config.seed);
  std::vector<double> family_w, fraction_w;
  for (const RequestFamily& f : config.families)
    family_w.push_back(f.probability);
  for (const FractionChoice& f : config.fraction_choices) {
    fraction_w.push_back(f.probability);
  }
  std::discrete_distribution<int> pick_family(family_w.begin(), family_w.end());
  std::discrete_distribution<int> pick_fraction(fraction_w.begin(),
                                                fraction_w.end());
  std::discrete_distribution<int> pick_tier(config.tier_mix.begin(),
                                            config.tier_mix.end());

  const double horizon = config.rounds * config.round_duration_minutes;
  if (std::isfinite(config.request_interarrival_minutes)) {
    std::exponential_distribution<double> gap(
        1.0 / config.request_interarrival_minutes);
    int64_t next_id = 1;
    double t = 0.0;
    while (true) {
      t += gap(rng);
      if (t >= horizon) break;
      WorkloadRequest r;
      r.request_id = next_id++;
      r.arrival_minutes = t;
      r.round = std::min(config.rounds - 1,
                         int(std::floor(t / config.round_duration_minutes)));
      r.family = pick_family(rng);
      const RequestFamily& fam = config.families[size_t(r.family)];
      const Selection sel =
          sample_selection(fam.beta_a, fam.beta_b, config.domain_size, rng);
      r.start = sel.start;
      r.length = sel.length;
      r.fraction = config.fraction_choices[size_t(pick_fraction(rng))].fraction;
      r.tier = Tier(pick_tier(rng));
      r.mechanism.kind = fam.mechanism;
      r.mechanism.target_epsilon = TierEpsilon(fam.mechanism, r.tier);
      r.mechanism.target_delta = config.mechanism_delta;
      r.mechanism.repetitions = (fam.mechanism == MechanismKind::kNoisySgd ||
                                 fam.mechanism == MechanismKind::kPate)
                                    ? config.repetitions
                                    : 1;
      r.data_amount =
          double(r.length) / double(config.domain_size) * r.fraction;
      r.utility = assign_utility(r.tier, r.data_amount, config.utility, rng);
      r.cost = costs.Base(r.mechanism);
      w.batches[size_t(r.round)].push_back(std::move(r));
    }
  }

  double total = 0.0;
  for (const auto& batch : w.batches) {
    for (const WorkloadRequest& r : batch) total += r.utility;
  }
  if (total > 0.0) {
    for (auto& batch : w.batches) {
      for (WorkloadRequest& r : batch) r.utility /= total;
    }
  }

  std::mt19937_64 users(config.seed ^ kUserStream);
  std::poisson_distribution<int64_t> arrivals(
      config.round_duration_minutes * 60.0 / config.user_interarrival_seconds);
  for (int64_t& n : w.user_arrivals) n = arrivals(users);
  return w;
}

RequestRecord to_request_record(const WorkloadRequest& request,
                                int64_t domain_size, bool amplify,
                                CostCache& costs) {
  RequestRecord r;
  r.request_id = request.request_id;
  r.application_id = "app-" + std::to_string(request.request_id);
  r.predicate = request.predicate(domain_size);
  r.sample_fraction = request.fraction;
  r.cost = amplify ? costs.Amplified(request.mechanism, request.fraction)
                   : costs.Base(request.mechanism);
  r.utility = request.utility;
  r.arrival_time = request.arrival_minutes;
  r.tier = request.tier;
  r.mechanism = request.mechanism.kind;
  return r;
}

}  // namespace privplan
