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

#ifndef REPDAY_EVALUATION_HPP
#define REPDAY_EVALUATION_HPP

// Representative-day experiment: exact chronological solve, clustered
// solves over a grid of K and seeds, plan re-evaluation on the full history
// and percent-error reporting.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "repday/clustering.hpp"
#include "repday/milp.hpp"
#include "repday/model.hpp"
#include "repday/system.hpp"
#include "repday/timeseries.hpp"

namespace repday {

struct PipelineConfig {
  SolverConfig solver;
  ModelOptions model;
};

struct ExactResult {
  double total_cost = 0.0;      // CT^E, $
  ExpansionPlan plan;
  CostBreakdown costs;
  MilpStatus status = MilpStatus::Infeasible;
  bool certified = false;       // solved to the configured gap
  double relative_gap = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_seconds = 0.0;
};

ExactResult exact_solution(const SystemData& system, const HourlyRecordSet& history,
                           const PipelineConfig& config = {});

struct ClusterSpec {
  ClusterMethod method = ClusterMethod::Tkm;
  int k = 1;        // TKM cluster count, or K1 * K2 for MKM
  int k1 = 0;       // MKM only
  int k2 = 0;       // MKM only
  std::uint64_t seed = 0;
};

// TKM for k; MKM with factors (k1, k2). Throws PreconditionError when K
// exceeds the number of days or an MKM sub-cluster is too small.
RepresentativeDaySet cluster_history(const HourlyRecordSet& history, const ClusterSpec& spec);

// MKM factorization used for a grid value K: K2 = preferred_k2 when it
// divides K, otherwise K2 = 1.
ClusterSpec mkm_spec(int k, int preferred_k2, std::uint64_t seed);

struct EvaluationRow {
  ClusterMethod method = ClusterMethod::Tkm;
  int k = 0;
  int k1 = 0;
  int k2 = 0;
  std::uint64_t seed = 0;
  double representative_cost = 0.0;  // Step-1 objective, $
  double total_cost = 0.0;           // CT^K, $
  double error_percent = 0.0;
  double step1_seconds = 0.0;
  std::int64_t step1_work = 0;       // simplex iterations of the Step-1 solve
  MilpStatus step1_status = MilpStatus::Infeasible;
  bool certified = false;
  ExpansionPlan plan;
  // Non-empty when clustering preconditions failed; no cost fields are set.
  std::string failure;
};

// Step 2: the plan fixed in the chronological model, solved as an LP.
// Returns CT^K. Throws SolveError when the LP is not solved to optimality.
double evaluate_plan(const SystemData& system, const HourlyRecordSet& history,
                     const ExpansionPlan& plan, const PipelineConfig& config = {});

EvaluationRow run_pipeline(const SystemData& system, const HourlyRecordSet& history,
                           const ClusterSpec& spec, const ExactResult& exact,
                           const PipelineConfig& config = {});

// 100 |CT^K - CT^E| / CT^E; ParameterError when CT^E <= 0.
double percent_error(double ct_k, double ct_e);

struct GridConfig {
  std::vector<int> k_values{2, 4, 8};
  std::vector<ClusterMethod> methods{ClusterMethod::Tkm, ClusterMethod::Mkm};
  int n_seeds = 5;
  std::uint64_t seed = 1;  // seed i of every row is derive_seed(seed, i)
  int preferred_k2 = 2;
  int jobs = 1;
  bool exact_only = false;
};

struct GridResult {
  ExactResult exact;
  std::vector<EvaluationRow> rows;  // ordered by method, K, seed index
};

// A PreconditionError from clustering marks that row as failed; any other
// error aborts the grid.

GridResult run_grid(const SystemData& system, const HourlyRecordSet& history,
                    const GridConfig& grid, const PipelineConfig& config = {});

enum class TimingMode { Work, Wall };

struct MethodSummary {
  double median_cost = 0.0;
  double median_error = 0.0;
  double min_error = 0.0;
  double max_error = 0.0;
  double median_time = 0.0;
  int runs = 0;    // successful rows
  int failed = 0;  // rows rejected by clustering preconditions
};

// Median and spread of the successful rows of one (method, K) cell; nullopt
// when none succeeded.
std::optional<MethodSummary> summarize(const std::vector<EvaluationRow>& rows,
                                       ClusterMethod method, int k, TimingMode timing);

// K, CT_TKM, CT_MKM, eps_TKM, eps_MKM, time_TKM, time_MKM; one line per K
// using seed medians.
std::string format_table_csv(const std::vector<EvaluationRow>& rows, TimingMode timing);
std::string format_runs_csv(const std::vector<EvaluationRow>& rows, TimingMode timing);

// table.csv, runs.csv, exact.csv, cost_vs_k.csv, error_vs_k.csv and
// time_vs_k.csv. Throws ParameterError on an empty row list.
void report(const std::vector<EvaluationRow>& rows, const ExactResult& exact,
            const std::filesystem::path& out_dir, TimingMode timing = TimingMode::Work);
void write_exact_csv(const ExactResult& exact, const std::filesystem::path& out_dir);

}  // namespace repday

#endif  // REPDAY_EVALUATION_HPP
