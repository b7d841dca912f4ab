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

#include "privplan/lp_bridge.h"

#include <cstdio>
#include <map>
#include <sstream>

#include "privplan/errors.h"

namespace privplan {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Y(size_t i) { return "y_" + std::to_string(i); }
std::string X(size_t i, int g) {
  return "x_" + std::to_string(i) + "_" + std::to_string(g);
}
std::string Z(size_t c, Eigen::Index a) {
  return "z_" + std::to_string(c) + "_" + std::to_string(a);
}

}  // namespace

std::string export_lp(const Problem& problem) {
  std::ostringstream out;
  out << "\\ privplan.lp.v1\n";
  out << "Maximize\n obj:";
  bool any = false;
  for (size_t i = 0; i < problem.requests.size(); ++i) {
    out << (any ? " + " : " ") << Num(problem.requests[i].weight) << " "
        << Y(i);
    any = true;
  }
  if (!any) out << " 0";
  out << "\nSubject To\n";
  for (size_t i = 0; i < problem.requests.size(); ++i) {
    const ProblemRequest& r = problem.requests[i];
    out << " data_" << i << ":";
    for (int g : r.eligible) out << " + " << X(i, g);
    out << " - " << r.required << " " << Y(i) << " >= 0\n";
  }
  std::vector<std::string> forced_off;
  for (size_t c = 0; c < problem.constraints.size(); ++c) {
    const Constraint& con = problem.constraints[c];
    for (Eigen::Index a = 0; a < con.budget.size(); ++a) {
      if (IsMarked(con.budget[a])) {
        forced_off.push_back(Z(c, a));
        continue;
      }
      double total = 0.0;
      out << " budget_" << c << "_" << a << ":";
      for (int i : con.members) {
        const double cost = problem.requests[size_t(i)].cost[a];
        if (IsMarked(cost)) {
          throw ParameterError("cannot export infinite costs");
        }
        total += cost;
        out << " + " << Num(cost) << " " << X(size_t(i), con.group);
      }
      // Switching the order off waives the row entirely.
      const double big_m = total + std::max(0.0, -con.budget[a]);
      out << " - " << Num(big_m) << " " << Z(c, a)
          << " <= " << Num(con.budget[a]) << "\n";
    }
    out << " any_order_" << c << ":";
    for (Eigen::Index a = 0; a < con.budget.size(); ++a)
      out << " + " << Z(c, a);
    out << " <= " << con.budget.size() - 1 << "\n";
  }
  out << "Bounds\n";
  for (const std::string& z : forced_off) out << " " << z << " = 1\n";
  out << "Binaries\n";
  for (size_t i = 0; i < problem.requests.size(); ++i) {
    out << " " << Y(i) << "\n";
    for (int g : problem.requests[i].eligible) out << " " << X(i, g) << "\n";
  }
  for (size_t c = 0; c < problem.constraints.size(); ++c) {
    for (Eigen::Index a = 0; a < problem.constraints[c].budget.size(); ++a) {
      out << " " << Z(c, a) << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

Allocation import_solution(const Problem& problem, std::istream& solution) {
  std::map<std::string, double> values;
  std::string line;
  while (std::getline(solution, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string name;
    double value = 0.0;
    if (!(fields >> name)) continue;
    if (!(fields >> value)) {
      throw ConfigError("malformed solution line: " + line);
    }
    values[name] = value;
  }
  auto on = [&](const std::string& name) {
    auto it = values.find(name);
    return it != values.end() && it->second > 0.5;
  };
  std::vector<std::pair<size_t, std::vector<int>>> selection;
  for (size_t i = 0; i < problem.requests.size(); ++i) {
    if (!on(Y(i))) continue;
    const ProblemRequest& r = problem.requests[i];
    std::vector<int> grant;
    for (int g : r.eligible) {
      if (on(X(i, g))) grant.push_back(g);
    }
    if (grant.empty() && r.collapsed()) grant = r.eligible;
    selection.emplace_back(i, std::move(grant));
  }
  return allocation_from_selection(problem, selection);
}

}  // namespace privplan
