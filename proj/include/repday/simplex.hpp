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

#ifndef REPDAY_SIMPLEX_HPP
#define REPDAY_SIMPLEX_HPP

// Two-phase bounded primal revised simplex. The basis is held as a sparse LU
// factorization plus product-form eta updates and is refactorized at a
// fixed interval. Rows and columns are equilibrated before solving and the
// solution is unscaled on extraction.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "repday/problem.hpp"

namespace repday {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
const char* status_name(LpStatus status);

struct SimplexOptions {
  int max_iterations = 0;          // 0 picks a limit from the problem size
  double primal_tolerance = 1e-9;  // scaled units
  double dual_tolerance = 1e-9;    // scaled units
  double pivot_tolerance = 1e-9;
  int refactor_interval = 100;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_limit = 50;
  bool scaling = true;
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> values;
  double objective = 0.0;
  double max_primal_residual = 0.0;  // worst row violation, original units
  double max_bound_violation = 0.0;
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  double dual_bound = 0.0;           // bound implied by the final duals
  int iterations = 0;
  int phase_one_iterations = 0;
  bool used_bland = false;
};

class SimplexSolver {
 public:
  explicit SimplexSolver(const MilpProblem& problem, SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  // Integrality marks are ignored.
  LpSolution solve() const;
  // Same matrix and costs with replacement variable bounds.
  LpSolution solve(std::span<const double> lower, std::span<const double> upper) const;

 private:
  struct Data;
  std::unique_ptr<Data> data_;
};

LpSolution solve_lp(const MilpProblem& problem, const SimplexOptions& options = {});

}  // namespace repday

#endif  // REPDAY_SIMPLEX_HPP
