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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "privplan/errors.h"
#include "testing/instances.h"
#include "testing/oracles.h"

namespace privplan {
namespace {

// Minimal reader for the rows export_lp writes: "name: +/- coef var ... op
// rhs", with a bare variable meaning coefficient 1.
struct Row {
  std::vector<std::pair<double, std::string>> terms;
  std::string op;
  double rhs = 0;
};

struct Lp {
  std::map<std::string, Row> rows;
  std::map<std::string, double> fixed;
  std::vector<std::string> binaries;
};

Lp Parse(const std::string& text) {
  Lp lp;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line[0] != ' ') {
      section = line;
      continue;
    }
    std::istringstream f(line);
    if (section == "Subject To") {
      std::string name;
      f >> name;
      name.pop_back();
      Row row;
      std::string tok;
      double sign = 1;
      while (f >> tok) {
        if (tok == "+" || tok == "-") {
          sign = tok == "-" ? -1 : 1;
          std::string next;
          f >> next;
          char* end = nullptr;
          const double coef = std::strtod(next.c_str(), &end);
          if (*end == '\0') {
            std::string var;
            f >> var;
            row.terms.emplace_back(sign * coef, var);
          } else {
            row.terms.emplace_back(sign, next);
          }
        } else if (tok == "<=" || tok == ">=" || tok == "=") {
          row.op = tok;
          f >> row.rhs;
        }
      }
      lp.rows[name] = row;
    } else if (section == "Bounds") {
      std::string var, eq;
      double v;
      f >> var >> eq >> v;
      lp.fixed[var] = v;
    } else if (section == "Binaries") {
      std::string var;
      f >> var;
      lp.binaries.push_back(var);
    }
  }
  return lp;
}

bool Holds(const Row& row, const std::map<std::string, double>& values) {
  double lhs = 0;
  for (const auto& [coef, var] : row.terms) {
    auto it = values.find(var);
    lhs += coef * (it == values.end() ? 0.0 : it->second);
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(row.rhs));
  if (row.op == "<=") return lhs <= row.rhs + slack;
  if (row.op == ">=") return lhs >= row.rhs - slack;
  return std::abs(lhs - row.rhs) <= slack;
}

// True when some order selection makes every row hold.
bool LpFeasible(const Lp& lp, const Problem& p, const testing::Grants& grants) {
  std::map<std::string, double> v;
  for (size_t i = 0; i < p.requests.size(); ++i) {
    v["y_" + std::to_string(i)] = grants[i].empty() ? 0 : 1;
    for (int g : grants[i]) {
      v["x_" + std::to_string(i) + "_" + std::to_string(g)] = 1;
    }
  }
  for (const auto& [name, row] : lp.rows) {
    if (name.rfind("data_", 0) == 0 && !Holds(row, v)) return false;
  }
  // Orders are chosen per constraint independently.
  for (size_t c = 0; c < p.constraints.size(); ++c) {
    bool ok = false;
    const Eigen::Index orders = p.constraints[c].budget.size();
    for (Eigen::Index keep = 0; keep < orders && !ok; ++keep) {
      std::map<std::string, double> w = v;
      for (Eigen::Index a = 0; a < orders; ++a) {
        const std::string z =
            "z_" + std::to_string(c) + "_" + std::to_string(a);
        w[z] = a == keep ? 0 : 1;
        if (lp.fixed.contains(z) && lp.fixed.at(z) != w[z]) w[z] = -1;
      }
      bool all = true;
      for (Eigen::Index a = 0; a < orders && all; ++a) {
        const std::string z =
            "z_" + std::to_string(c) + "_" + std::to_string(a);
        if (w[z] < 0) all = false;
        const std::string row =
            "budget_" + std::to_string(c) + "_" + std::to_string(a);
        if (all && lp.rows.contains(row)) all = Holds(lp.rows.at(row), w);
      }
      if (all) all = Holds(lp.rows.at("any_order_" + std::to_string(c)), w);
      ok = all;
    }
    if (!ok) {
      // A constraint nobody is charged on is vacuous, even with every
      // order unusable.
      bool charged = false;
      for (int i : p.constraints[c].members) {
        for (int g : grants[size_t(i)]) charged |= g == p.constraints[c].group;
      }
      if (charged) return false;
    }
  }
  return true;
}

TEST(LpBridgeTest, HeaderAndSections) {
  std::mt19937_64 rng(1);
  const Problem p = testing::RandomProblem(rng);
  const std::string lp = export_lp(p);
  EXPECT_EQ(lp.rfind("\\ privplan.lp.v1\n", 0), 0u);
  for (const char* section :
       {"Maximize", "Subject To", "Bounds", "Binaries", "End"}) {
    EXPECT_NE(lp.find(std::string("\n") + section), std::string::npos)
        << section;
  }
}

TEST(LpBridgeTest, RowsAgreeWithTheFeasibilityOracle) {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.5);
  testing::ProblemShape shape;
  shape.max_groups = 2;
  shape.max_requests = 8;
  int feasible = 0, infeasible = 0;
  for (int d = 0; d < 200; ++d) {
    const Problem p = testing::RandomProblem(rng, shape);
    const Lp lp = Parse(export_lp(p));
    testing::Grants grants(p.requests.size());
    for (size_t i = 0; i < p.requests.size(); ++i) {
      if (coin(rng)) grants[i] = p.requests[i].eligible;
    }
    const bool expected = testing::GrantsFeasible(p, grants);
    EXPECT_EQ(LpFeasible(lp, p, grants), expected) << "draw " << d;
    (expected ? feasible : infeasible)++;
  }
  EXPECT_GT(feasible, 20);
  EXPECT_GT(infeasible, 20);
}

TEST(LpBridgeTest, SolutionRoundTrip) {
  std::mt19937_64 rng(3);
  for (int d = 0; d < 50; ++d) {
    const Problem p = testing::RandomProblem(rng);
    const Allocation exact = solve_exact(p);
    std::ostringstream sol;
    sol << "# objective " << exact.objective_value << "\n";
    for (size_t i = 0; i < p.requests.size(); ++i) {
      const bool on = exact.granted_groups.contains(p.requests[i].id);
      sol << "y_" << i << " " << (on ? 1 : 0) << "\n";
      for (int g : p.requests[i].eligible) {
        sol << "x_" << i << "_" << g << " " << (on ? 1 : 0) << "\n";
      }
    }
    std::istringstream in(sol.str());
    const Allocation back = import_solution(p, in);
    EXPECT_EQ(back.accepted, exact.accepted);
    EXPECT_EQ(back.objective_value, exact.objective_value);
    EXPECT_TRUE(verify_allocation(p, back));
  }
}

TEST(LpBridgeTest, MalformedSolution) {
  std::mt19937_64 rng(4);
  const Problem p = testing::RandomProblem(rng);
  std::istringstream in("y_0\n");
  EXPECT_THROW(import_solution(p, in), ConfigError);
}

}  // namespace
}  // namespace privplan
