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

#ifndef REPDAY_MILP_HPP
#define REPDAY_MILP_HPP

// LP-based branch-and-bound over the integer variables of a MilpProblem.

#include <cstdint>
#include <vector>

#include "repday/problem.hpp"
#include "repday/simplex.hpp"

namespace repday {

enum class MilpStatus { Optimal, Infeasible, Unbounded, NodeLimit, TimeLimit, NumericalFailure };
const char* status_name(MilpStatus status);

enum class BranchingRule { MostFractional, LowestIndex };

struct SolverConfig {
  double integrality_tolerance = kIntegralityTol;
  double relative_gap = 1e-6;
  std::int64_t node_limit = 1000000;
  double time_limit = 0.0;  // seconds, 0 means none
  BranchingRule branching = BranchingRule::MostFractional;
  // Recorded for reproducibility. Node order is fully determined by bounds
  // and node ids, so the seed does not alter the search.
  std::uint64_t seed = 0;
  SimplexOptions lp;
};

struct IncumbentUpdate {
  std::int64_t node = 0;
  double objective = 0.0;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = 0.0;
  double best_bound = 0.0;
  double relative_gap = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_seconds = 0.0;
  std::vector<IncumbentUpdate> incumbent_trace;
};

MilpSolution solve_milp(const MilpProblem& problem, const SolverConfig& config = {});

double relative_gap(double incumbent, double bound);

}  // namespace repday

#endif  // REPDAY_MILP_HPP
