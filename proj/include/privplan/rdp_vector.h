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

// Rényi-DP cost and budget vectors.
//
// An RdpVector stores one epsilon per Rényi order of an AlphaGrid. The
// infeasible marker is +infinity: arithmetic propagates it, and the privacy
// filter never admits at a marked order.

#ifndef PRIVPLAN_RDP_VECTOR_H_
#define PRIVPLAN_RDP_VECTOR_H_

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "privplan/errors.h"

namespace privplan {

// Strictly increasing, non-empty list of Rényi orders, each > 1.
class AlphaGrid {
 public:
  explicit AlphaGrid(std::vector<double> orders);

  static std::shared_ptr<const AlphaGrid> Make(std::vector<double> orders);
  // {1.5, 1.75, 2, 2.5, 3, 4, 5, 6, 8, 16, 32, 64, 1e6, 1e10}
  static std::shared_ptr<const AlphaGrid> Default();

  Eigen::Index size() const { return orders_.size(); }
  double operator[](Eigen::Index i) const { return orders_[i]; }
  const Eigen::ArrayXd& orders() const { return orders_; }
  std::vector<double> ToVector() const;

  bool operator==(const AlphaGrid& other) const;

 private:
  Eigen::ArrayXd orders_;
};

using GridPtr = std::shared_ptr<const AlphaGrid>;

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

// Absolute slack granted by the filter comparison, scaled by max(1, |budget|).
inline constexpr double kFilterTolerance = 1e-12;

inline bool IsMarked(double v) { return std::isinf(v) && v > 0; }

template <typename Scalar>
class BasicRdpVector {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  // Unset vector without a grid; any arithmetic on it throws GridError.
  BasicRdpVector() = default;
  BasicRdpVector(GridPtr grid, Array eps)
      : grid_(std::move(grid)), eps_(std::move(eps)) {
    if (!grid_) throw GridError("RdpVector requires a grid");
    if (eps_.size() != grid_->size()) {
      throw GridError("RdpVector length does not match its alpha grid");
    }
  }

  static BasicRdpVector Zero(GridPtr grid) {
    const Eigen::Index n = grid->size();
    return BasicRdpVector(std::move(grid), Array::Zero(n));
  }
  static BasicRdpVector Constant(GridPtr grid, Scalar value) {
    const Eigen::Index n = grid->size();
    return BasicRdpVector(std::move(grid), Array::Constant(n, value));
  }

  const AlphaGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Array& eps() const { return eps_; }
  Array& mutable_eps() { return eps_; }
  Eigen::Index size() const { return eps_.size(); }
  Scalar operator[](Eigen::Index i) const { return eps_[i]; }

  bool is_marked(Eigen::Index i) const { return IsMarked(double(eps_[i])); }
  bool all_marked() const {
    for (Eigen::Index i = 0; i < size(); ++i) {
      if (!is_marked(i)) return false;
    }
    return true;
  }
  // Cost vectors must be non-negative at every finite order.
  bool is_non_negative() const {
    for (Eigen::Index i = 0; i < size(); ++i) {
      if (!is_marked(i) && !(eps_[i] >= Scalar(0))) return false;
    }
    return true;
  }

  bool has_grid() const { return grid_ != nullptr; }

  bool operator==(const BasicRdpVector& other) const {
    if (!grid_ || !other.grid_) return grid_ == other.grid_;
    return SameGrid(*this, other) && (eps_ == other.eps_).all();
  }

  template <typename A, typename B>
  friend bool SameGrid(const BasicRdpVector<A>& a, const BasicRdpVector<B>& b);

 private:
  GridPtr grid_;
  Array eps_;
};

using RdpVector = BasicRdpVector<double>;

template <typename A, typename B>
bool SameGrid(const BasicRdpVector<A>& a, const BasicRdpVector<B>& b) {
  if (!a.grid_ || !b.grid_) return false;
  return a.grid_ == b.grid_ || *a.grid_ == *b.grid_;
}

template <typename Scalar>
void CheckSameGrid(const BasicRdpVector<Scalar>& a,
                   const BasicRdpVector<Scalar>& b) {
  if (!SameGrid(a, b)) throw GridError("RdpVectors use different alpha grids");
}

// Element-wise sum. Sequential composition of two releases.
template <typename Scalar>
BasicRdpVector<Scalar> compose(const BasicRdpVector<Scalar>& a,
                               const BasicRdpVector<Scalar>& b) {
  CheckSameGrid(a, b);
  return BasicRdpVector<Scalar>(a.grid_ptr(), a.eps() + b.eps());
}

template <typename Scalar>
BasicRdpVector<Scalar> operator+(const BasicRdpVector<Scalar>& a,
                                 const BasicRdpVector<Scalar>& b) {
  return compose(a, b);
}

// Marked orders of `a` stay marked.
template <typename Scalar>
BasicRdpVector<Scalar> operator-(const BasicRdpVector<Scalar>& a,
                                 const BasicRdpVector<Scalar>& b) {
  CheckSameGrid(a, b);
  typename BasicRdpVector<Scalar>::Array out = a.eps() - b.eps();
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (a.is_marked(i) || b.is_marked(i)) out[i] = kInfeasible;
  }
  return BasicRdpVector<Scalar>(a.grid_ptr(), std::move(out));
}

template <typename Scalar>
BasicRdpVector<Scalar> operator*(Scalar k, const BasicRdpVector<Scalar>& v) {
  return BasicRdpVector<Scalar>(v.grid_ptr(), k * v.eps());
}

template <typename Scalar>
BasicRdpVector<Scalar> cwiseMin(const BasicRdpVector<Scalar>& a,
                                const BasicRdpVector<Scalar>& b) {
  CheckSameGrid(a, b);
  return BasicRdpVector<Scalar>(a.grid_ptr(), a.eps().min(b.eps()));
}

// True when consumed + candidate <= budget at order i (no marker involved).
template <typename Scalar>
bool AdmitsAtOrder(Scalar consumed, Scalar candidate, Scalar budget) {
  if (IsMarked(double(consumed)) || IsMarked(double(candidate)) ||
      IsMarked(double(budget))) {
    return false;
  }
  using std::abs;
  using std::max;
  const Scalar slack = Scalar(kFilterTolerance) * max(Scalar(1), abs(budget));
  return consumed + candidate <= budget + slack;
}

// First order at which the charge fits, if any.
template <typename Scalar>
std::optional<Eigen::Index> admitting_order(
    const BasicRdpVector<Scalar>& consumed,
    const BasicRdpVector<Scalar>& candidate,
    const BasicRdpVector<Scalar>& budget) {
  CheckSameGrid(consumed, candidate);
  CheckSameGrid(consumed, budget);
  for (Eigen::Index i = 0; i < budget.size(); ++i) {
    if (AdmitsAtOrder(consumed[i], candidate[i], budget[i])) return i;
  }
  return std::nullopt;
}

// Rényi privacy filter: admit iff some order stays within budget.
template <typename Scalar>
bool filter_admits(const BasicRdpVector<Scalar>& consumed,
                   const BasicRdpVector<Scalar>& candidate,
                   const BasicRdpVector<Scalar>& budget) {
  return admitting_order(consumed, candidate, budget).has_value();
}

// Smallest (eps, delta)-DP epsilon implied by the vector over its grid:
// min_a  v[a] + ln(1/delta) / (alpha_a - 1).
template <typename Scalar>
Scalar rdp_to_adp(const BasicRdpVector<Scalar>& v, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("rdp_to_adp: delta must lie in (0, 1)");
  }
  using std::log;
  const Scalar log_inv_delta = -log(Scalar(delta));
  Scalar best = Scalar(kInfeasible);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v.is_marked(i)) continue;
    const Scalar eps = v[i] + log_inv_delta / (Scalar(v.grid()[i]) - Scalar(1));
    if (eps < best) best = eps;
  }
  return best;
}

}  // namespace privplan

#endif  // PRIVPLAN_RDP_VECTOR_H_
