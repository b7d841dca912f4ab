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

#include "privplan/accounting.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace privplan {
namespace {

double LogBinomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double LogSumExp(const std::vector<double>& terms) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : terms) hi = std::max(hi, t);
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - hi);
  return hi + std::log(sum);
}

void CheckGamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ParameterError("sampling probability gamma must lie in [0, 1]");
  }
}

// ln of sum_{k=0}^{m} binom(m,k) (1-g)^{m-k} g^k exp((k^2-k)/(2 sigma^2)).
double SampledGaussianLogMoment(double sigma, double gamma, int m) {
  const double log_g = std::log(gamma);
  const double log_1mg = std::log1p(-gamma);
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> terms;
  terms.reserve(size_t(m) + 1);
  for (int k = 0; k <= m; ++k) {
    const double kd = k;
    terms.push_back(LogBinomial(m, kd) + (m - kd) * log_1mg + kd * log_g +
                    (kd * kd - kd) * inv_two_var);
  }
  return LogSumExp(terms);
}

// ln of the generic subsampling series at integer order m >= 2.
double GenericLogSeries(const RdpCurve& base, std::optional<double> eps_inf,
                        double gamma, int m) {
  // log min(2, (e^{eps_inf} - 1)^j)
  const double log_em1 = eps_inf ? std::log(std::expm1(*eps_inf))
                                 : std::numeric_limits<double>::infinity();
  auto log_cap = [&](int j) { return std::min(std::log(2.0), j * log_em1); };

  const double log_g = std::log(gamma);
  std::vector<double> terms;
  terms.reserve(size_t(m));
  terms.push_back(0.0);

  const double b2 = base(2.0);
  const double log_first = std::log(4.0) + std::log(std::expm1(b2));
  const double log_second = b2 + log_cap(2);
  terms.push_back(2.0 * log_g + LogBinomial(m, 2) +
                  std::min(log_first, log_second));
  for (int j = 3; j <= m; ++j) {
    terms.push_back(j * log_g + LogBinomial(m, j) + (j - 1) * base(double(j)) +
                    log_cap(j));
  }
  return LogSumExp(terms);
}

int ExpansionOrder(double alpha) { return std::max(2, int(std::ceil(alpha))); }

}  // namespace

void AdpBudget::Validate() const {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in [0, 1)");
  }
}

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kGaussian:
      return "GM";
    case MechanismKind::kLaplace:
      return "LM";
    case MechanismKind::kSparseVector:
      return "SVT";
    case MechanismKind::kRandomizedResponse:
      return "RR";
    case MechanismKind::kNoisySgd:
      return "NSGD";
    case MechanismKind::kPate:
      return "PATE";
  }
  throw ParameterError("unknown mechanism kind");
}

MechanismKind ParseMechanism(std::string_view name) {
  for (auto kind :
       {MechanismKind::kGaussian, MechanismKind::kLaplace,
        MechanismKind::kSparseVector, MechanismKind::kRandomizedResponse,
        MechanismKind::kNoisySgd, MechanismKind::kPate}) {
    if (MechanismName(kind) == name) return kind;
  }
  throw ParameterError("unknown mechanism kind: " + std::string(name));
}

bool IsGaussianFamily(MechanismKind kind) {
  return kind == MechanismKind::kGaussian || kind == MechanismKind::kNoisySgd ||
         kind == MechanismKind::kPate;
}

void MechanismSpec::Validate() const {
  if (!(target_epsilon > 0.0)) {
    throw ParameterError("mechanism target epsilon must be > 0");
  }
  if (!(target_delta >= 0.0 && target_delta < 1.0)) {
    throw ParameterError("mechanism target delta must lie in [0, 1)");
  }
  if (repetitions < 1) throw ParameterError("repetitions must be >= 1");
  if (repetitions != 1 && kind != MechanismKind::kNoisySgd &&
      kind != MechanismKind::kPate) {
    throw ParameterError("only NSGD and PATE compose repetitions");
  }
}

void AmplificationParams::Validate() const {
  CheckGamma(gamma);
  if (eps_inf && !(*eps_inf >= 0.0)) {
    throw ParameterError("eps_inf must be >= 0");
  }
}

RdpVector gaussian_rdp(double sigma, double sensitivity, GridPtr grid) {
  if (!(sigma > 0.0) || !(sensitivity > 0.0)) {
    throw ParameterError("gaussian_rdp: sigma and sensitivity must be > 0");
  }
  const double scale = sensitivity * sensitivity / (2.0 * sigma * sigma);
  Eigen::ArrayXd eps = grid->orders() * scale;
  return RdpVector(std::move(grid), std::move(eps));
}

RdpVector pure_dp_to_rdp(double eps, GridPtr grid) {
  if (!(eps > 0.0)) throw ParameterError("pure_dp_to_rdp: eps must be > 0");
  Eigen::ArrayXd out = (grid->orders() * (eps * eps / 2.0)).min(eps);
  return RdpVector(std::move(grid), std::move(out));
}

RdpVector zcdp_to_rdp(double rho, GridPtr grid) {
  if (!(rho > 0.0)) throw ParameterError("zcdp_to_rdp: rho must be > 0");
  Eigen::ArrayXd out = grid->orders() * rho;
  return RdpVector(std::move(grid), std::move(out));
}

double classic_gaussian_sigma(double eps, double delta, double sensitivity) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || !(sensitivity > 0.0)) {
    throw ParameterError("classic_gaussian_sigma: invalid parameters");
  }
  return std::sqrt(2.0 * sensitivity * sensitivity * std::log(1.25 / delta)) /
         eps;
}

double calibrate_gaussian_sigma(double eps, double delta, int repetitions,
                                const AlphaGrid& grid) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || repetitions < 1) {
    throw ParameterError("calibrate_gaussian_sigma: invalid parameters");
  }
  const double log_inv_delta = -std::log(delta);
  auto adp = [&](double sigma) {
    const double scale = repetitions / (2.0 * sigma * sigma);
    double best = kInfeasible;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      best = std::min(best, grid[i] * scale + log_inv_delta / (grid[i] - 1.0));
    }
    return best;
  };
  double floor_eps = adp(std::numeric_limits<double>::max());
  if (!(floor_eps < eps)) {
    throw ParameterError("target epsilon unattainable on this alpha grid");
  }
  double lo = 1.0, hi = 1.0;
  while (adp(hi) > eps) hi *= 2.0;
  while (adp(lo) <= eps && lo > 1e-300) lo /= 2.0;
  while (hi / lo > 1.0 + 1e-10) {
    const double mid = std::sqrt(lo * hi);
    if (adp(mid) > eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

RdpVector mechanism_rdp(const MechanismSpec& spec, GridPtr grid) {
  spec.Validate();
  if (IsGaussianFamily(spec.kind)) {
    const double sigma = calibrate_gaussian_sigma(
        spec.target_epsilon, spec.target_delta, spec.repetitions, *grid);
    return double(spec.repetitions) * gaussian_rdp(sigma, 1.0, grid);
  }
  return pure_dp_to_rdp(spec.target_epsilon, std::move(grid));
}

RdpVector total_budget_rdp(const AdpBudget& budget, GridPtr grid) {
  budget.Validate();
  if (!(budget.delta > 0.0)) {
    throw ParameterError("RDP budgets require delta > 0");
  }
  const double log_inv_delta = -std::log(budget.delta);
  Eigen::ArrayXd out(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double cap = budget.epsilon - log_inv_delta / ((*grid)[i] - 1.0);
    out[i] = cap < 0.0 ? kInfeasible : cap;
  }
  return RdpVector(std::move(grid), std::move(out));
}

RdpVector amplify_poisson_gaussian(double sigma, double gamma, GridPtr grid) {
  if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
  CheckGamma(gamma);
  RdpVector base = gaussian_rdp(sigma, 1.0, grid);
  if (gamma == 0.0) return RdpVector::Zero(std::move(grid));
  if (gamma == 1.0) return base;
  Eigen::ArrayXd out(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double alpha = (*grid)[i];
    if (alpha > kMaxExpandedOrder) {
      out[i] = base[i];
      continue;
    }
    const int m = ExpansionOrder(alpha);
    const double bound = SampledGaussianLogMoment(sigma, gamma, m) / (m - 1);
    out[i] = std::clamp(bound, 0.0, base[i]);
  }
  return RdpVector(std::move(grid), std::move(out));
}

RdpVector amplify_poisson_generic(const RdpCurve& base,
                                  std::optional<double> eps_inf, double gamma,
                                  GridPtr grid) {
  AmplificationParams{gamma, AmplificationParams::BaseKind::kGeneric, eps_inf}
      .Validate();
  Eigen::ArrayXd out(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double alpha = (*grid)[i];
    const double base_value = base(alpha);
    if (gamma == 0.0) {
      out[i] = 0.0;
      continue;
    }
    if (gamma == 1.0 || alpha > kMaxExpandedOrder) {
      out[i] = base_value;
      continue;
    }
    const int m = ExpansionOrder(alpha);
    const double bound = GenericLogSeries(base, eps_inf, gamma, m) / (m - 1);
    out[i] = std::clamp(bound, 0.0, base_value);
  }
  return RdpVector(std::move(grid), std::move(out));
}

RdpVector amplify_poisson_generic(const RdpVector& base,
                                  std::optional<double> eps_inf, double gamma,
                                  GridPtr grid) {
  const AlphaGrid& base_grid = base.grid();
  auto lookup = [&](double alpha) -> std::optional<double> {
    for (Eigen::Index i = 0; i < base_grid.size(); ++i) {
      if (base_grid[i] == alpha) return base[i];
    }
    return std::nullopt;
  };
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double alpha = (*grid)[i];
    if (!lookup(alpha)) {
      throw ParameterError("base vector lacks order " + std::to_string(alpha));
    }
    if (alpha > kMaxExpandedOrder || gamma == 0.0) continue;
    for (int j = 2; j <= ExpansionOrder(alpha); ++j) {
      if (!lookup(j)) {
        throw ParameterError("base vector lacks integer order " +
                             std::to_string(j));
      }
    }
  }
  return amplify_poisson_generic([&](double a) { return *lookup(a); }, eps_inf,
                                 gamma, std::move(grid));
}

RdpVector amplified_mechanism_rdp(const MechanismSpec& spec, double gamma,
                                  GridPtr grid) {
  spec.Validate();
  CheckGamma(gamma);
  if (IsGaussianFamily(spec.kind)) {
    const double sigma = calibrate_gaussian_sigma(
        spec.target_epsilon, spec.target_delta, spec.repetitions, *grid);
    return double(spec.repetitions) *
           amplify_poisson_gaussian(sigma, gamma, std::move(grid));
  }
  const double eps = spec.target_epsilon;
  RdpCurve curve = [eps](double alpha) {
    return std::min(eps, alpha * eps * eps / 2.0);
  };
  return amplify_poisson_generic(curve, eps, gamma, std::move(grid));
}

}  // namespace privplan
