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

#include "repday/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace repday {

const char* status_name(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal:
      return "optimal";
    case MilpStatus::Infeasible:
      return "infeasible";
    case MilpStatus::Unbounded:
      return "unbounded";
    case MilpStatus::NodeLimit:
      return "node-limit";
    case MilpStatus::TimeLimit:
      return "time-limit";
    case MilpStatus::NumericalFailure:
      return "numerical-failure";
  }
  return "?";
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent) || !std::isfinite(bound)) return kInfinity;
  return std::max(0.0, incumbent - bound) / std::max(1e-10, std::abs(incumbent));
}

namespace {

struct Node {
  std::int64_t id = 0;
  double bound = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

using Clock = std::chrono::steady_clock;

class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& problem, const SolverConfig& config)
      : p_(problem), config_(config), lp_(problem, config.lp) {
    for (int j = 0; j < static_cast<int>(p_.num_variables()); ++j)
      if (p_.variable(j).is_integral()) integers_.push_back(j);
  }

  MilpSolution run() {
    const auto start = Clock::now();
    MilpSolution out;
    std::vector<double> lower(p_.num_variables()), upper(p_.num_variables());
    for (int j = 0; j < static_cast<int>(p_.num_variables()); ++j) {
      lower[j] = p_.variable(j).lower;
      upper[j] = p_.variable(j).upper;
    }
    // Integer bounds are tightened to integers up front.
    for (int j : integers_) {
      lower[j] = std::ceil(lower[j] - config_.integrality_tolerance);
      upper[j] = std::floor(upper[j] + config_.integrality_tolerance);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{0, -kInfinity, std::move(lower), std::move(upper)});
    std::int64_t next_id = 1;
    bool numerical_trouble = false;
    bool unbounded = false;
    MilpStatus stop = MilpStatus::Optimal;

    while (!open.empty()) {
      if (out.nodes >= config_.node_limit) {
        stop = MilpStatus::NodeLimit;
        break;
      }
      if (config_.time_limit > 0.0 &&
          std::chrono::duration<double>(Clock::now() - start).count() > config_.time_limit) {
        stop = MilpStatus::TimeLimit;
        break;
      }
      if (out.has_incumbent &&
          relative_gap(out.objective, open.top().bound) <= config_.relative_gap)
        break;

      Node node = open.top();
      open.pop();
      ++out.nodes;
      if (out.has_incumbent && node.bound >= out.objective) continue;

      LpSolution lp = solve_node(node.lower, node.upper, out);
      if (lp.status == LpStatus::Infeasible) continue;
      if (lp.status == LpStatus::Unbounded) {
        unbounded = true;
        break;
      }
      if (lp.status != LpStatus::Optimal) {
        numerical_trouble = true;
        continue;
      }
      const double bound = std::max(node.bound, lp.objective);
      if (out.has_incumbent && bound >= out.objective - prune_margin(out.objective)) continue;

      const int branch = pick_branching_variable(lp.values);
      if (branch < 0) {
        try_incumbent(node, lp, out);
        continue;
      }
      const double v = lp.values[branch];
      Node down{next_id++, bound, node.lower, node.upper};
      down.upper[branch] = std::floor(v);
      Node up{next_id++, bound, std::move(node.lower), std::move(node.upper)};
      up.lower[branch] = std::ceil(v);
      open.push(std::move(down));
      open.push(std::move(up));
    }

    double best_open = kInfinity;
    if (!open.empty()) best_open = open.top().bound;
    out.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();

    if (unbounded) {
      out.status = MilpStatus::Unbounded;
      out.has_incumbent = false;
      out.values.clear();
      return out;
    }
    if (!out.has_incumbent) {
      out.status = stop != MilpStatus::Optimal ? stop
                   : numerical_trouble         ? MilpStatus::NumericalFailure
                                               : MilpStatus::Infeasible;
      out.best_bound = best_open;
      out.relative_gap = kInfinity;
      return out;
    }
    out.best_bound = std::min(best_open, out.objective);
    out.relative_gap = relative_gap(out.objective, out.best_bound);
    if (stop != MilpStatus::Optimal) out.status = stop;
    else if (numerical_trouble) out.status = MilpStatus::NumericalFailure;
    else out.status = MilpStatus::Optimal;
    return out;
  }

 private:
  double prune_margin(double incumbent) const {
    return config_.relative_gap * std::max(1e-10, std::abs(incumbent));
  }

  LpSolution solve_node(const std::vector<double>& lower, const std::vector<double>& upper,
                        MilpSolution& out) {
    LpSolution lp = lp_.solve(lower, upper);
    out.lp_iterations += lp.iterations;
    if (lp.status == LpStatus::IterationLimit ||
        (lp.status == LpStatus::Optimal && !accurate(lp))) {
      // One retry with frequent refactorization before giving up on the node.
      SimplexOptions retry = config_.lp;
      retry.refactor_interval = 20;
      retry.max_iterations = config_.lp.max_iterations > 0 ? 4 * config_.lp.max_iterations : 0;
      lp = SimplexSolver(p_, retry).solve(lower, upper);
      out.lp_iterations += lp.iterations;
      if (lp.status == LpStatus::Optimal && !accurate(lp)) lp.status = LpStatus::IterationLimit;
    }
    return lp;
  }

  bool accurate(const LpSolution& lp) const {
    double scale = 1.0;
    for (const Row& r : p_.rows()) scale = std::max(scale, std::abs(r.rhs));
    return lp.max_primal_residual <= 1e-7 * scale && lp.max_bound_violation <= 1e-7 * scale;
  }

  int pick_branching_variable(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = 0.0;
    for (int j : integers_) {
      const double f = x[j] - std::floor(x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= config_.integrality_tolerance) continue;
      if (config_.branching == BranchingRule::LowestIndex) return j;
      if (dist > best_frac) {
        best_frac = dist;
        best = j;
      }
    }
    return best;
  }

  // Integral relaxation point: re-solve with every integer fixed to its
  // rounded value so the continuous part is computed without big-M noise.
  void try_incumbent(const Node& node, const LpSolution& lp, MilpSolution& out) {
    std::vector<double> lower = node.lower, upper = node.upper;
    for (int j : integers_) lower[j] = upper[j] = std::round(lp.values[j]);
    LpSolution polished = solve_node(lower, upper, out);
    const LpSolution* pick = &lp;
    if (polished.status == LpStatus::Optimal) pick = &polished;
    std::vector<double> x = pick->values;
    for (int j : integers_) x[j] = std::round(x[j]);
    if (!find_violations(p_, x, true).empty()) return;
    const double obj = p_.objective_value(x);
    if (out.has_incumbent && obj >= out.objective) return;
    out.has_incumbent = true;
    out.objective = obj;
    out.values = std::move(x);
    out.incumbent_trace.push_back({out.nodes, obj});
  }

  const MilpProblem& p_;
  const SolverConfig& config_;
  SimplexSolver lp_;
  std::vector<int> integers_;
};

}  // namespace

MilpSolution solve_milp(const MilpProblem& problem, const SolverConfig& config) {
  return BranchAndBound(problem, config).run();
}

}  // namespace repday
