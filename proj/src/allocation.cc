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

#include "privplan/allocation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "privplan/errors.h"

namespace privplan {

std::string_view AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kFcfs:
      return "fcfs";
    case Algorithm::kDpf:
      return "dpf";
    case Algorithm::kDpk:
      return "dpk";
    case Algorithm::kExact:
      return "exact";
  }
  throw ParameterError("unknown algorithm");
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kFcfs, Algorithm::kDpf, Algorithm::kDpk,
                      Algorithm::kExact}) {
    if (AlgorithmName(a) == name) return a;
  }
  throw ParameterError("unknown algorithm: " + std::string(name));
}

std::string_view ObjectiveName(ObjectiveMode m) {
  return m == ObjectiveMode::kUtility ? "utility" : "request_count";
}

ObjectiveMode ParseObjective(std::string_view name) {
  if (name == "utility") return ObjectiveMode::kUtility;
  if (name == "request_count") return ObjectiveMode::kRequestCount;
  throw ParameterError("unknown objective: " + std::string(name));
}

std::vector<std::vector<std::vector<int>>> Problem::ConstraintsByRequestGroup()
    const {
  std::vector<std::vector<std::vector<int>>> out(
      requests.size(), std::vector<std::vector<int>>(groups.size()));
  for (size_t c = 0; c < constraints.size(); ++c) {
    for (int i : constraints[c].members) {
      out[size_t(i)][size_t(constraints[c].group)].push_back(int(c));
    }
  }
  return out;
}

Problem build_problem(std::span<const RequestRecord> requests,
                      std::span<const Segment> segments,
                      const std::vector<int64_t>& groups, ObjectiveMode mode) {
  Problem p;
  p.groups = groups;
  p.mode = mode;
  std::unordered_map<int64_t, int> group_index;
  for (size_t g = 0; g < groups.size(); ++g) group_index[groups[g]] = int(g);
  std::unordered_map<int64_t, int> request_index;
  for (const RequestRecord& r : requests) {
    r.Validate();
    if (!p.grid) p.grid = r.cost.grid_ptr();
    ProblemRequest pr;
    pr.id = r.request_id;
    pr.cost = r.cost;
    pr.weight = mode == ObjectiveMode::kUtility ? r.utility : 1.0;
    pr.arrival_time = r.arrival_time;
    if (r.groups.empty()) {
      pr.eligible.resize(groups.size());
      std::iota(pr.eligible.begin(), pr.eligible.end(), 0);
    } else {
      for (int64_t g : r.groups) {
        auto it = group_index.find(g);
        if (it == group_index.end()) {
          throw ParameterError("request names an inactive group");
        }
        pr.eligible.push_back(it->second);
      }
      std::sort(pr.eligible.begin(), pr.eligible.end());
    }
    pr.required =
        r.required_groups > 0 ? r.required_groups : int(pr.eligible.size());
    request_index[r.request_id] = int(p.requests.size());
    p.requests.push_back(std::move(pr));
  }
  for (size_t k = 0; k < segments.size(); ++k) {
    const Segment& s = segments[k];
    for (size_t sg = 0; sg < s.group_ids.size(); ++sg) {
      auto git = group_index.find(s.group_ids[sg]);
      if (git == group_index.end()) continue;
      std::vector<int> members;
      for (int64_t id : s.signature) {
        auto rit = request_index.find(id);
        if (rit == request_index.end()) {
          throw ParameterError(
              "segment references a request outside the "
              "problem");
        }
        const ProblemRequest& pr = p.requests[size_t(rit->second)];
        if (std::binary_search(pr.eligible.begin(), pr.eligible.end(),
                               git->second)) {
          members.push_back(rit->second);
        }
      }
      if (members.empty()) continue;
      for (const RdpVector& budget : budget_classes(s, sg)) {
        Constraint c;
        c.segment = k;
        c.group = git->second;
        c.members = members;
        c.budget = budget;
        p.constraints.push_back(std::move(c));
      }
    }
  }
  return p;
}

namespace {

// d / B with the conventions: zero demand on a non-negative budget is free,
// unusable budgets make the share infinite.
double Share(double demand, double budget) {
  if (IsMarked(budget) || IsMarked(demand)) return kInfeasible;
  if (demand == 0.0 && budget >= 0.0) return 0.0;
  if (budget <= 0.0) return kInfeasible;
  return demand / budget;
}

// Running per-constraint sums for greedy and branch-and-bound search.
class Workspace {
 public:
  explicit Workspace(const Problem& p)
      : p_(p), by_rg_(p.ConstraintsByRequestGroup()) {
    sums_.reserve(p.constraints.size());
    for (size_t c = 0; c < p.constraints.size(); ++c) {
      sums_.push_back(Eigen::ArrayXd::Zero(p.grid ? p.grid->size() : 0));
    }
  }

  bool Fits(int c, const RdpVector& cost) const {
    const RdpVector& budget = p_.constraints[size_t(c)].budget;
    const Eigen::ArrayXd& sum = sums_[size_t(c)];
    for (Eigen::Index a = 0; a < budget.size(); ++a) {
      if (AdmitsAtOrder(sum[a], cost[a], budget[a])) return true;
    }
    return false;
  }

  bool GroupFits(size_t i, int g) const {
    const RdpVector& cost = p_.requests[i].cost;
    for (int c : by_rg_[i][size_t(g)]) {
      if (!Fits(c, cost)) return false;
    }
    return true;
  }

  // Groups that currently fit, in eligible order.
  std::vector<int> FittingGroups(size_t i) const {
    std::vector<int> out;
    for (int g : p_.requests[i].eligible) {
      if (GroupFits(i, g)) out.push_back(g);
    }
    return out;
  }

  // First feasible grant for request i, if any.
  std::optional<std::vector<int>> Choose(size_t i) const {
    const ProblemRequest& r = p_.requests[i];
    std::vector<int> fit = FittingGroups(i);
    if (int(fit.size()) < r.required) return std::nullopt;
    fit.resize(size_t(r.required));
    return fit;
  }

  void Add(size_t i, const std::vector<int>& grant) {
    for (int g : grant) {
      for (int c : by_rg_[i][size_t(g)]) {
        sums_[size_t(c)] += p_.requests[i].cost.eps();
      }
    }
  }

  const std::vector<int>& ConstraintsOf(size_t i, int g) const {
    return by_rg_[i][size_t(g)];
  }
  Eigen::ArrayXd& sum(int c) { return sums_[size_t(c)]; }
  const Eigen::ArrayXd& sum(int c) const { return sums_[size_t(c)]; }

 private:
  const Problem& p_;
  std::vector<std::vector<std::vector<int>>> by_rg_;
  std::vector<Eigen::ArrayXd> sums_;
};

void FinishAllocation(
    const Problem& p,
    const std::vector<std::pair<size_t, std::vector<int>>>& selection,
    Allocation& out) {
  out.accepted.clear();
  out.granted_groups.clear();
  out.objective_value = 0.0;
  std::vector<Eigen::ArrayXd> sums(
      p.constraints.size(), Eigen::ArrayXd::Zero(p.grid ? p.grid->size() : 0));
  const auto by_rg = p.ConstraintsByRequestGroup();
  for (const auto& [i, grant] : selection) {
    const ProblemRequest& r = p.requests[i];
    out.accepted.push_back(r.id);
    out.objective_value += r.weight;
    std::vector<int64_t>& ids = out.granted_groups[r.id];
    for (int g : grant) {
      ids.push_back(p.groups[size_t(g)]);
      for (int c : by_rg[i][size_t(g)]) sums[size_t(c)] += r.cost.eps();
    }
  }
  std::sort(out.accepted.begin(), out.accepted.end());
  out.admitting_order.assign(p.constraints.size(), std::nullopt);
  for (size_t c = 0; c < p.constraints.size(); ++c) {
    const RdpVector& budget = p.constraints[c].budget;
    for (Eigen::Index a = 0; a < budget.size(); ++a) {
      if (AdmitsAtOrder(sums[c][a], 0.0, budget[a])) {
        out.admitting_order[c] = a;
        break;
      }
    }
  }
}

Allocation Greedy(const Problem& p, const std::vector<size_t>& order) {
  Workspace ws(p);
  std::vector<std::pair<size_t, std::vector<int>>> selection;
  for (size_t i : order) {
    if (auto grant = ws.Choose(i)) {
      ws.Add(i, *grant);
      selection.emplace_back(i, std::move(*grant));
    }
  }
  Allocation out;
  FinishAllocation(p, selection, out);
  return out;
}

// Sort request indices by key, then (arrival_time, id), ascending.
std::vector<size_t> OrderBy(const Problem& p, const std::vector<double>& key) {
  std::vector<size_t> order(p.requests.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const ProblemRequest& ra = p.requests[a];
    const ProblemRequest& rb = p.requests[b];
    if (key[a] != key[b]) return key[a] < key[b];
    if (ra.arrival_time != rb.arrival_time) {
      return ra.arrival_time < rb.arrival_time;
    }
    return ra.id < rb.id;
  });
  return order;
}

}  // namespace

Allocation allocation_from_selection(
    const Problem& problem,
    const std::vector<std::pair<size_t, std::vector<int>>>& selection) {
  Allocation out;
  FinishAllocation(problem, selection, out);
  return out;
}

double dominant_share(const Problem& problem, size_t request) {
  const ProblemRequest& r = problem.requests.at(request);
  std::vector<int> mine;
  for (size_t c = 0; c < problem.constraints.size(); ++c) {
    const auto& m = problem.constraints[c].members;
    if (std::find(m.begin(), m.end(), int(request)) != m.end()) {
      mine.push_back(int(c));
    }
  }
  if (mine.empty()) return 0.0;
  double best = kInfeasible;
  for (Eigen::Index a = 0; a < r.cost.size(); ++a) {
    double worst = 0.0;
    for (int c : mine) {
      worst = std::max(
          worst, Share(r.cost[a], problem.constraints[size_t(c)].budget[a]));
    }
    best = std::min(best, worst);
  }
  return best;
}

double dpk_efficiency(const Problem& problem, size_t request) {
  const ProblemRequest& r = problem.requests.at(request);
  double normalized = 0.0;
  for (const Constraint& c : problem.constraints) {
    if (std::find(c.members.begin(), c.members.end(), int(request)) ==
        c.members.end()) {
      continue;
    }
    double best = kInfeasible;
    for (Eigen::Index a = 0; a < r.cost.size(); ++a) {
      best = std::min(best, Share(r.cost[a], c.budget[a]));
    }
    normalized += best;
  }
  if (normalized == 0.0) return kInfeasible;
  return r.weight / normalized;
}

Allocation allocate_fcfs(const Problem& problem) {
  return Greedy(problem,
                OrderBy(problem, std::vector<double>(problem.requests.size())));
}

Allocation allocate_dpf(const Problem& problem) {
  std::vector<double> key(problem.requests.size());
  for (size_t i = 0; i < key.size(); ++i) {
    const double w = problem.requests[i].weight;
    const double share = dominant_share(problem, i);
    key[i] = w > 0.0 ? share / w : kInfeasible;
  }
  return Greedy(problem, OrderBy(problem, key));
}

Allocation allocate_dpk(const Problem& problem) {
  std::vector<double> efficiency(problem.requests.size());
  std::vector<double> weight(problem.requests.size());
  for (size_t i = 0; i < efficiency.size(); ++i) {
    efficiency[i] = -dpk_efficiency(problem, i);
    weight[i] = -problem.requests[i].weight;
  }
  // Density order alone starves a heavy request that spans many segments;
  // the weight order covers that case.
  Allocation by_efficiency = Greedy(problem, OrderBy(problem, efficiency));
  Allocation by_weight = Greedy(problem, OrderBy(problem, weight));
  return by_weight.objective_value > by_efficiency.objective_value
             ? by_weight
             : by_efficiency;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const Problem& p, const ExactOptions& options)
      : p_(p),
        ws_(p),
        deadline_(
            std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(options.time_limit_seconds))) {
    order_.resize(p.requests.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](size_t a, size_t b) {
      return p.requests[a].weight > p.requests[b].weight;
    });
    const size_t num_orders = p.grid ? size_t(p.grid->size()) : 0;
    ratio_order_.resize(p.constraints.size());
    for (size_t c = 0; c < p.constraints.size(); ++c) {
      ratio_order_[c].resize(num_orders);
      for (size_t a = 0; a < num_orders; ++a) {
        std::vector<int>& members = ratio_order_[c][a];
        for (int i : p.constraints[c].members) {
          if (p.requests[size_t(i)].collapsed()) members.push_back(i);
        }
        auto ratio = [&](int i) {
          const ProblemRequest& r = p.requests[size_t(i)];
          const double cost = r.cost[Eigen::Index(a)];
          if (cost <= 0.0) return kInfeasible;
          return r.weight / cost;
        };
        std::stable_sort(members.begin(), members.end(),
                         [&](int x, int y) { return ratio(x) > ratio(y); });
      }
    }
    remaining_.assign(p.requests.size(), 0);
    fits_.assign(p.requests.size(), 0);
  }

  void SetIncumbent(const Allocation& a) {
    std::unordered_map<int64_t, size_t> index;
    for (size_t i = 0; i < p_.requests.size(); ++i)
      index[p_.requests[i].id] = i;
    std::unordered_map<int64_t, int> gindex;
    for (size_t g = 0; g < p_.groups.size(); ++g) gindex[p_.groups[g]] = int(g);
    best_.clear();
    best_value_ = 0.0;
    for (int64_t id : a.accepted) {
      const size_t i = index.at(id);
      std::vector<int> grant;
      for (int64_t g : a.granted_groups.at(id)) grant.push_back(gindex.at(g));
      best_.emplace_back(i, std::move(grant));
      best_value_ += p_.requests[i].weight;
    }
  }

  void Run() { Search(0, 0.0); }

  bool timed_out() const { return timed_out_; }
  const std::vector<std::pair<size_t, std::vector<int>>>& best() const {
    return best_;
  }

 private:
  bool OutOfTime() {
    if (timed_out_) return true;
    if ((nodes_++ & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() > deadline_) {
      timed_out_ = true;
    }
    return timed_out_;
  }

  // Upper bound on the weight still obtainable from order_[pos..].
  double Bound(size_t pos) {
    double total = 0.0;
    for (size_t k = pos; k < order_.size(); ++k) {
      const size_t i = order_[k];
      remaining_[i] = 1;
      const ProblemRequest& r = p_.requests[i];
      fits_[i] = int(ws_.FittingGroups(i).size()) >= r.required;
      if (fits_[i]) total += r.weight;
    }
    double bound = total;
    for (size_t c = 0; c < p_.constraints.size(); ++c) {
      const Constraint& con = p_.constraints[c];
      double member_weight = 0.0;
      for (int i : con.members) {
        const ProblemRequest& r = p_.requests[size_t(i)];
        if (remaining_[size_t(i)] && fits_[size_t(i)] && r.collapsed()) {
          member_weight += r.weight;
        }
      }
      if (member_weight == 0.0) continue;
      const Eigen::ArrayXd& sum = ws_.sum(int(c));
      double best_fraction = 0.0;
      for (Eigen::Index a = 0; a < con.budget.size(); ++a) {
        if (IsMarked(con.budget[a])) continue;
        double cap = con.budget[a] - sum[a] +
                     kFilterTolerance * std::max(1.0, std::abs(con.budget[a]));
        if (cap < 0.0) continue;
        double value = 0.0;
        for (int i : ratio_order_[c][size_t(a)]) {
          if (!remaining_[size_t(i)] || !fits_[size_t(i)]) continue;
          const ProblemRequest& r = p_.requests[size_t(i)];
          const double cost = r.cost[a];
          if (cost <= cap) {
            value += r.weight;
            cap -= cost;
          } else {
            value += r.weight * cap / cost;
            break;
          }
        }
        best_fraction = std::max(best_fraction, value);
        if (best_fraction >= member_weight) break;
      }
      bound = std::min(bound, total - member_weight + best_fraction);
    }
    for (size_t k = pos; k < order_.size(); ++k) remaining_[order_[k]] = 0;
    return bound;
  }

  void Search(size_t pos, double value) {
    if (OutOfTime()) return;
    if (pos == order_.size()) {
      if (value > best_value_) {
        best_value_ = value;
        best_ = current_;
      }
      return;
    }
    const double slack = 1e-12 * std::max(1.0, std::abs(best_value_));
    if (value + Bound(pos) <= best_value_ + slack) return;

    const size_t i = order_[pos];
    const ProblemRequest& r = p_.requests[i];
    if (r.weight > 0.0) {
      const std::vector<int> fit = ws_.FittingGroups(i);
      if (int(fit.size()) >= r.required) {
        ForEachGrant(
            fit, size_t(r.required), [&](const std::vector<int>& grant) {
              std::vector<std::pair<int, Eigen::ArrayXd>> saved;
              for (int g : grant) {
                for (int c : ws_.ConstraintsOf(i, g))
                  saved.emplace_back(c, ws_.sum(c));
              }
              ws_.Add(i, grant);
              current_.emplace_back(i, grant);
              Search(pos + 1, value + r.weight);
              current_.pop_back();
              for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
                ws_.sum(it->first) = it->second;
              }
            });
      }
    }
    Search(pos + 1, value);
  }

  // Enumerates size-k subsets of `pool` in lexicographic order.
  template <typename F>
  void ForEachGrant(const std::vector<int>& pool, size_t k, F&& visit) {
    std::vector<int> pick;
    std::vector<size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      if (timed_out_) return;
      pick.clear();
      for (size_t j : idx) pick.push_back(pool[j]);
      // Constraints are per group, so any subset of fitting groups fits.
      visit(pick);
      if (k == 0) return;
      size_t j = k;
      while (j > 0 && idx[j - 1] == pool.size() - k + (j - 1)) --j;
      if (j == 0) return;
      ++idx[j - 1];
      for (size_t t = j; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
  }

  const Problem& p_;
  Workspace ws_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<size_t> order_;
  std::vector<std::vector<std::vector<int>>> ratio_order_;
  std::vector<char> remaining_;
  std::vector<char> fits_;
  std::vector<std::pair<size_t, std::vector<int>>> current_;
  std::vector<std::pair<size_t, std::vector<int>>> best_;
  double best_value_ = -1.0;
  uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace

Allocation solve_exact(const Problem& problem, const ExactOptions& options) {
  BranchAndBound bb(problem, options);
  if (options.warm_start) bb.SetIncumbent(allocate_dpk(problem));
  bb.Run();
  Allocation out;
  FinishAllocation(problem, bb.best(), out);
  out.timed_out = bb.timed_out();
  out.optimal = !bb.timed_out();
  return out;
}

Allocation allocate(const Problem& problem, Algorithm algorithm,
                    const ExactOptions& options) {
  switch (algorithm) {
    case Algorithm::kFcfs:
      return allocate_fcfs(problem);
    case Algorithm::kDpf:
      return allocate_dpf(problem);
    case Algorithm::kDpk:
      return allocate_dpk(problem);
    case Algorithm::kExact:
      return solve_exact(problem, options);
  }
  throw ParameterError("unknown algorithm");
}

bool verify_allocation(const Problem& problem, const Allocation& allocation) {
  if (allocation.admitting_order.size() != problem.constraints.size()) {
    return false;
  }
  std::unordered_map<int64_t, size_t> index;
  for (size_t i = 0; i < problem.requests.size(); ++i) {
    index[problem.requests[i].id] = i;
  }
  std::unordered_set<int64_t> accepted(allocation.accepted.begin(),
                                       allocation.accepted.end());
  for (size_t c = 0; c < problem.constraints.size(); ++c) {
    const Constraint& con = problem.constraints[c];
    const int64_t group_id = problem.groups[size_t(con.group)];
    Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(con.budget.size());
    bool charged = false;
    for (int i : con.members) {
      const ProblemRequest& r = problem.requests[size_t(i)];
      if (!accepted.contains(r.id)) continue;
      auto it = allocation.granted_groups.find(r.id);
      if (it == allocation.granted_groups.end()) return false;
      if (std::find(it->second.begin(), it->second.end(), group_id) ==
          it->second.end()) {
        continue;
      }
      sum += r.cost.eps();
      charged = true;
    }
    // Nobody granted on this group: the constraint is vacuous.
    if (!charged) continue;
    const auto& witness = allocation.admitting_order[c];
    if (!witness) return false;
    if (!AdmitsAtOrder(sum[*witness], 0.0, con.budget[*witness])) return false;
  }
  for (int64_t id : allocation.accepted) {
    auto it = index.find(id);
    if (it == index.end()) continue;  // accepted outside the problem
    auto git = allocation.granted_groups.find(id);
    if (git == allocation.granted_groups.end() ||
        int(git->second.size()) < problem.requests[it->second].required) {
      return false;
    }
  }
  return true;
}

void attach_block_charges(Allocation& allocation,
                          std::span<const RequestRecord> requests) {
  std::unordered_map<int64_t, const RequestRecord*> index;
  for (const RequestRecord& r : requests) index[r.request_id] = &r;
  allocation.per_block_charges.clear();
  for (int64_t id : allocation.accepted) {
    const RequestRecord& r = *index.at(id);
    for (int64_t g : allocation.granted_groups.at(id)) {
      allocation.per_block_charges.push_back({g, r.predicate, r.cost});
    }
  }
}

std::vector<PolicyRecord> apply_allocation(
    const Allocation& allocation, std::span<const RequestRecord> requests,
    RotationState& state, const UnlockPolicy& policy, PolicyContext& context) {
  Allocation charged = allocation;
  if (charged.per_block_charges.empty() && !charged.accepted.empty()) {
    attach_block_charges(charged, requests);
  }
  std::map<int64_t, std::vector<std::pair<CellSet, RdpVector>>> by_group;
  for (const BlockCharge& bc : charged.per_block_charges) {
    by_group[bc.group_id].emplace_back(bc.cells, bc.charge);
  }
  const std::vector<int64_t> active = state.active_ids();
  for (const auto& [g, charges] : by_group) {
    if (std::find(active.begin(), active.end(), g) == active.end()) {
      throw ConflictError("allocation charges inactive group " +
                          std::to_string(g));
    }
    if (!state.group(g).Admits(charges, policy)) {
      throw ConflictError("allocation no longer fits group " +
                          std::to_string(g));
    }
  }
  for (const auto& [g, charges] : by_group) {
    state.group(g).ApplyCharges(charges, policy);
  }

  std::unordered_map<int64_t, const RequestRecord*> index;
  for (const RequestRecord& r : requests) index[r.request_id] = &r;
  std::vector<PolicyRecord> policies;
  for (int64_t id : charged.accepted) {
    const RequestRecord& r = *index.at(id);
    PolicyRecord rec;
    rec.policy_id = context.next_policy_id++;
    rec.round = context.round;
    rec.application_id = r.application_id;
    rec.request_id = id;
    rec.groups = charged.granted_groups.at(id);
    rec.predicate = r.predicate;
    rec.granted = r.cost;
    rec.delta = context.delta;
    rec.sampling_fraction = r.sample_fraction;
    policies.push_back(std::move(rec));
  }
  return policies;
}

int upc_group_count(double fraction, int window_k) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ParameterError("fraction must lie in (0, 1]");
  }
  const int n = int(std::floor(fraction * window_k + 0.5));
  return std::clamp(n, 1, window_k);
}

RequestRecord to_upc_request(const RequestRecord& request,
                             const std::vector<int64_t>& active_groups,
                             int64_t domain_size, std::mt19937_64& rng) {
  RequestRecord out = request;
  out.predicate = CellSet::Full(domain_size);
  std::vector<int64_t> pool = active_groups;
  const size_t n =
      size_t(upc_group_count(request.sample_fraction, int(pool.size())));
  for (size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  out.groups = std::move(pool);
  out.required_groups = 0;
  return out;
}

RoundPlan plan_round(std::span<const RequestRecord> requests,
                     const RotationState& state, const UnlockPolicy& policy,
                     const PlannerOptions& options) {
  RoundPlan plan;
  plan.requests.assign(requests.begin(), requests.end());
  if (requests.empty()) return plan;
  plan.segments =
      compute_segments(requests, state, policy, options.segment_mode);
  const ContestedSplit split = classify_contested(plan.segments, requests);
  plan.contested = split.contested.size();

  PruneResult pruned;
  if (options.prune) {
    pruned = prune(requests, plan.segments, split);
  } else {
    pruned.residual_requests.assign(requests.begin(), requests.end());
    pruned.residual_segments = plan.segments;
  }
  plan.auto_accepted = pruned.auto_accept;
  plan.auto_rejected = pruned.auto_reject;
  plan.problem =
      build_problem(pruned.residual_requests, pruned.residual_segments,
                    state.active_ids(), options.objective);
  plan.residual = allocate(plan.problem, options.algorithm, options.exact);

  Allocation& final = plan.allocation;
  final = plan.residual;
  const std::vector<int64_t> active = state.active_ids();
  for (int64_t id : pruned.auto_accept) {
    const RequestRecord& r = *std::find_if(
        requests.begin(), requests.end(),
        [&](const RequestRecord& x) { return x.request_id == id; });
    std::vector<int64_t> grant = r.groups.empty() ? active : r.groups;
    if (r.required_groups > 0) grant.resize(size_t(r.required_groups));
    final.granted_groups[id] = std::move(grant);
    final.accepted.push_back(id);
    final.objective_value +=
        options.objective == ObjectiveMode::kUtility ? r.utility : 1.0;
  }
  std::sort(final.accepted.begin(), final.accepted.end());
  attach_block_charges(final, requests);
  return plan;
}

RoundPlan account_upc(std::span<const RequestRecord> requests,
                      const RotationState& state, const UnlockPolicy& policy,
                      const PlannerOptions& options, std::mt19937_64& rng) {
  std::vector<RequestRecord> upc;
  upc.reserve(requests.size());
  const std::vector<int64_t> active = state.active_ids();
  for (const RequestRecord& r : requests) {
    upc.push_back(to_upc_request(r, active, state.domain_size, rng));
  }
  return plan_round(upc, state, policy, options);
}

}  // namespace privplan
