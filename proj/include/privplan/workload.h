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

// Synthetic mixed-mechanism request streams.
//
// Requests arrive as a Poisson process and are cut into fixed-length rounds.
// Each request draws a mechanism family, a circular attribute range whose
// relative length follows the family's Beta(a, b), a sampled fraction of the
// selected population, a cost tier, and a Cobb-Douglas utility.

#ifndef PRIVPLAN_WORKLOAD_H_
#define PRIVPLAN_WORKLOAD_H_

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "privplan/accounting.h"
#include "privplan/cells.h"
#include "privplan/request.h"

namespace privplan {

enum class WorkloadFamily { kW1, kW2, kW3, kW4 };

std::string_view WorkloadName(WorkloadFamily f);
WorkloadFamily ParseWorkload(std::string_view name);

struct RequestFamily {
  MechanismKind mechanism = MechanismKind::kGaussian;
  double probability = 1.0;
  double beta_a = 1.0;
  double beta_b = 10.0;
};

struct FractionChoice {
  double fraction = 1.0;
  double probability = 1.0;
};

struct UtilityModel {
  double elasticity_budget = 2.0;  // exponent of the privacy cost
  double elasticity_data = 1.0;    // exponent of the data amount
  double productivity_a = 0.25;    // A ~ Beta(a, b)
  double productivity_b = 0.25;
  // Privacy cost used for utility, shared by every mechanism of a tier.
  std::array<double, kNumTiers> tier_cost = {0.05, 0.2, 0.75};

  void Validate() const;
};

// Per-tier target epsilon of calibrated (Gaussian-family) and pure-DP
// mechanisms.
inline constexpr std::array<double, kNumTiers> kGaussianTierEpsilon = {
    0.05, 0.2, 0.75};
inline constexpr std::array<double, kNumTiers> kPureTierEpsilon = {0.01, 0.1,
                                                                   0.25};

double TierEpsilon(MechanismKind kind, Tier tier);

struct WorkloadConfig {
  std::string name = "W1";
  int rounds = 40;
  double round_duration_minutes = 10080;
  // Infinity means no request arrivals.
  double request_interarrival_minutes = 20;
  double user_interarrival_seconds = 10;
  int64_t domain_size = 204800;
  std::vector<RequestFamily> families;
  std::vector<FractionChoice> fraction_choices = {{0.25, 0.5}, {1.0, 0.5}};
  std::array<double, kNumTiers> tier_mix = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  double mechanism_delta = 1e-9;
  int repetitions = 1;  // NSGD / PATE composition count
  UtilityModel utility;
  uint64_t seed = 0;

  void Validate() const;
  double expected_requests_per_round() const;
};

struct WorkloadRequest {
  int64_t request_id = 0;
  int round = 0;  // 0-based
  double arrival_minutes = 0.0;
  int64_t start = 0;
  int64_t length = 1;
  double fraction = 1.0;
  int family = 0;
  MechanismSpec mechanism;
  Tier tier = Tier::kMouse;
  double data_amount = 0.0;
  double utility = 0.0;
  RdpVector cost;  // unamplified

  CellSet predicate(int64_t domain_size) const {
    return CellSet::CircularInterval(start, length, domain_size);
  }
};

struct Workload {
  WorkloadConfig config;
  std::vector<std::vector<WorkloadRequest>> batches;
  std::vector<int64_t> user_arrivals;  // per round
};

// Memoized mechanism costs keyed by (mechanism, gamma).
class CostCache {
 public:
  explicit CostCache(GridPtr grid) : grid_(std::move(grid)) {}
  const RdpVector& Base(const MechanismSpec& spec);
  const RdpVector& Amplified(const MechanismSpec& spec, double gamma);
  const GridPtr& grid() const { return grid_; }

 private:
  using Key = std::tuple<int, double, double, int, double>;
  GridPtr grid_;
  std::map<Key, RdpVector> cache_;
};

double sample_beta(double a, double b, std::mt19937_64& rng);

struct Selection {
  int64_t start = 0;
  int64_t length = 1;
};

// Relative length s ~ Beta(a, b); length = max(1, round(s * domain)),
// uniform start, wrapping at the end of the domain.
Selection sample_selection(double beta_a, double beta_b, int64_t domain_size,
                           std::mt19937_64& rng);

// Y = A * L^beta * K^alpha.
double cobb_douglas(double productivity, double privacy_cost,
                    double data_amount, const UtilityModel& model);

// Draws A and evaluates the production function for the tier's cost.
double assign_utility(Tier tier, double data_amount, const UtilityModel& model,
                      std::mt19937_64& rng);

WorkloadConfig build_workload(WorkloadFamily family, uint64_t seed);

// Utilities are normalized to sum to one over the whole workload.
Workload generate(const WorkloadConfig& config, CostCache& costs);

// Converts a generated request to a planner record. With `amplify` the cost
// is the Poisson-subsampled one at gamma = fraction.
RequestRecord to_request_record(const WorkloadRequest& request,
                                int64_t domain_size, bool amplify,
                                CostCache& costs);

}  // namespace privplan

#endif  // PRIVPLAN_WORKLOAD_H_
