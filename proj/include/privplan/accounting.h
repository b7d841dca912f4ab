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

// RDP cost curves of the supported mechanisms, conversions between DP
// notions, and Poisson-subsampling amplification bounds.

#ifndef PRIVPLAN_ACCOUNTING_H_
#define PRIVPLAN_ACCOUNTING_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "privplan/rdp_vector.h"

namespace privplan {

// Global approximate-DP target.
struct AdpBudget {
  double epsilon = 3.0;
  double delta = 1e-7;

  void Validate() const;
};

enum class MechanismKind {
  kGaussian,
  kLaplace,
  kSparseVector,
  kRandomizedResponse,
  kNoisySgd,
  kPate,
};

std::string_view MechanismName(MechanismKind kind);
MechanismKind ParseMechanism(std::string_view name);
// Gaussian-family mechanisms are calibrated, the others are costed as pure DP.
bool IsGaussianFamily(MechanismKind kind);

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kGaussian;
  double target_epsilon = 1.0;
  double target_delta = 1e-9;
  int repetitions = 1;

  void Validate() const;
  bool operator==(const MechanismSpec&) const = default;
};

struct AmplificationParams {
  enum class BaseKind { kGaussian, kGeneric };

  double gamma = 1.0;
  BaseKind base_kind = BaseKind::kGeneric;
  // Pure-DP bound of the base mechanism; nullopt means unbounded.
  std::optional<double> eps_inf;

  void Validate() const;
};

// Rényi epsilon as a function of the order.
using RdpCurve = std::function<double(double alpha)>;

RdpVector gaussian_rdp(double sigma, double sensitivity, GridPtr grid);
RdpVector pure_dp_to_rdp(double eps, GridPtr grid);
RdpVector zcdp_to_rdp(double rho, GridPtr grid);

// Classic (eps, delta) calibration: sigma^2 = 2 sens^2 ln(1.25/delta) / eps^2.
double classic_gaussian_sigma(double eps, double delta, double sensitivity);

// Smallest sigma (unit sensitivity) such that `repetitions` composed Gaussian
// releases convert back to at most (eps, delta) over the grid. The result is
// within relative 1e-6 of the exact threshold and never under-delivers.
double calibrate_gaussian_sigma(double eps, double delta, int repetitions,
                                const AlphaGrid& grid);

RdpVector mechanism_rdp(const MechanismSpec& spec, GridPtr grid);

// Per-block budget implied by a global (eps, delta) target:
// eps_a = eps - ln(1/delta)/(alpha_a - 1); negative entries are marked.
RdpVector total_budget_rdp(const AdpBudget& budget, GridPtr grid);

// Orders above this are not expanded by the binomial sums; the unamplified
// value is used there instead.
inline constexpr double kMaxExpandedOrder = 1024;

// Sampled Gaussian mechanism with unit sensitivity under Poisson sampling
// with inclusion probability gamma.
RdpVector amplify_poisson_gaussian(double sigma, double gamma, GridPtr grid);

// Generic integer-order upper bound for an arbitrary base mechanism. Never
// exceeds the base curve.
RdpVector amplify_poisson_generic(const RdpCurve& base,
                                  std::optional<double> eps_inf, double gamma,
                                  GridPtr grid);
// Same bound with the base given on a grid; that grid must contain every
// integer order 2..ceil(max alpha) used by the expansion.
RdpVector amplify_poisson_generic(const RdpVector& base,
                                  std::optional<double> eps_inf, double gamma,
                                  GridPtr grid);

// Cost of running `spec` on a Poisson sample with inclusion probability gamma.
RdpVector amplified_mechanism_rdp(const MechanismSpec& spec, double gamma,
                                  GridPtr grid);

}  // namespace privplan

#endif  // PRIVPLAN_ACCOUNTING_H_
