// Copyright 2026 The repday Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "repday/milp.hpp"

using namespace repday;

TEST_CASE("knapsack matches exhaustive enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8;
    std::vector<double> value(n), weight(n);
    for (int i = 0; i < n; ++i) {
      value[i] = static_cast<double>(1 + rng() % 40);
      weight[i] = static_cast<double>(1 + rng() % 25);
    }
    const double capacity = static_cast<double>(20 + rng() % 60);
    MilpProblem p;
    std::vector<Term> terms;
    for (int i = 0; i < n; ++i) {
      p.add_variable("y" + std::to_string(i), 0, 1, VarType::Binary, -value[i]);
      terms.push_back({i, weight[i]});
    }
    p.add_row("cap", terms, RowSense::LessEqual, capacity);

    double best = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double w = 0.0, v = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) {
          w += weight[i];
          v += value[i];
        }
      if (w <= capacity) best = std::max(best, v);
    }
    const MilpSolution s = solve_milp(p);
    CAPTURE(trial);
    REQUIRE(s.status == MilpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-best).epsilon(1e-9));
    for (size_t k = 1; k < s.incumbent_trace.size(); ++k)
      CHECK(s.incumbent_trace[k].objective < s.incumbent_trace[k - 1].objective);
    CHECK(s.best_bound <= s.objective + 1e-9);
  }
}

TEST_CASE("pure LP goes through a single relaxation") {
  MilpProblem p;
  const int x = p.add_variable("x", 0, 10, VarType::Continuous, 1.0);
  p.add_row("lo", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
  const MilpSolution s = solve_milp(p);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.nodes == 1);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(solve_lp(p).objective));
}

TEST_CASE("integer infeasibility and general integers") {
  MilpProblem p;
  const int x = p.add_variable("x", 0, 10, VarType::Integer, 1.0);
  p.add_row("a", {{x, 2.0}}, RowSense::Equal, 3.0);
  CHECK(solve_milp(p).status == MilpStatus::Infeasible);

  MilpProblem q;
  const int a = q.add_variable("a", 0, 10, VarType::Integer, -3.0);
  const int b = q.add_variable("b", 0, 10, VarType::Integer, -2.0);
  q.add_row("c1", {{a, 2.0}, {b, 2.0}}, RowSense::LessEqual, 9.0);
  q.add_row("c2", {{a, 3.0}, {b, -1.0}}, RowSense::LessEqual, 4.5);
  // Enumerate the 11 x 11 grid directly.
  double best = kInfinity;
  for (int i = 0; i <= 10; ++i)
    for (int k = 0; k <= 10; ++k)
      if (2 * i + 2 * k <= 9 && 3 * i - k <= 4.5) best = std::min(best, -3.0 * i - 2.0 * k);
  const MilpSolution s = solve_milp(q);
  REQUIRE(s.status == MilpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(best));
}

TEST_CASE("node limit reports the incumbent and gap") {
  MilpProblem p;
  std::vector<Term> terms;
  for (int i = 0; i < 12; ++i) {
    p.add_variable("z" + std::to_string(i), 0, 1, VarType::Binary, -(10.0 + i));
    terms.push_back({i, 7.0 + (i % 5)});
  }
  p.add_row("cap", terms, RowSense::LessEqual, 41.5);
  SolverConfig cfg;
  cfg.node_limit = 2;
  const MilpSolution s = solve_milp(p, cfg);
  CHECK(s.status == MilpStatus::NodeLimit);
  CHECK(s.nodes == 2);
}
