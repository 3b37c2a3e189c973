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

#include "repday/evaluation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "file_util.hpp"
#include "repday/error.hpp"
#include "repday/random.hpp"

namespace repday {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double solve_fixed(const ExpansionModel& model, const SystemData& system,
                   const ExpansionPlan& plan, const PipelineConfig& config) {
  const MilpProblem fixed = fix_investments(model, system, plan);
  if (fixed.free_integer_count() != 0) throw BuildError("Step-2 problem is not a pure LP");
  const MilpSolution s = solve_milp(fixed, config.solver);
  if (s.status != MilpStatus::Optimal || !s.has_incumbent)
    throw SolveError(fmt::format("Step-2 solve ended with status {}", status_name(s.status)));
  return s.objective;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ExactResult exact_solution(const SystemData& system, const HourlyRecordSet& history,
                           const PipelineConfig& config) {
  const auto start = Clock::now();
  const ExpansionModel model = build_chronological_model(system, history, config.model);
  const MilpSolution s = solve_milp(model.problem, config.solver);
  ExactResult out;
  out.status = s.status;
  out.nodes = s.nodes;
  out.lp_iterations = s.lp_iterations;
  out.relative_gap = s.relative_gap;
  if (!s.has_incumbent)
    throw SolveError(fmt::format("exact solve ended with status {}", status_name(s.status)));
  const ModelSolution sol = extract_solution(model, system, s.values);
  out.total_cost = s.objective;
  out.plan = sol.plan;
  out.costs = sol.costs;
  out.certified = s.status == MilpStatus::Optimal;
  out.wall_seconds = seconds_since(start);
  return out;
}

RepresentativeDaySet cluster_history(const HourlyRecordSet& history, const ClusterSpec& spec) {
  const ObservationSet obs = build_day_observations(history);
  const std::vector<Point> points = observation_points(obs);
  ClusteringResult result;
  RepresentativeDaySet set;
  switch (spec.method) {
    case ClusterMethod::Tkm:
      result = tkm(points, spec.k, spec.seed);
      set = to_representative_days(result, obs.scaling, obs.layout);
      set.k = spec.k;
      break;
    case ClusterMethod::Mkm:
      if (spec.k1 < 1 || spec.k2 < 1) throw ParameterError("MKM needs K1 >= 1 and K2 >= 1");
      result = mkm(points, spec.k1, spec.k2, spec.seed);
      set = to_representative_days(result, obs.scaling, obs.layout);
      set.k = spec.k1 * spec.k2;
      set.k1 = spec.k1;
      set.k2 = spec.k2;
      break;
    case ClusterMethod::History:
      return history_days(history);
  }
  set.method = spec.method;
  return set;
}

ClusterSpec mkm_spec(int k, int preferred_k2, std::uint64_t seed) {
  if (k < 1) throw ParameterError("K must be positive");
  ClusterSpec spec;
  spec.method = ClusterMethod::Mkm;
  spec.k = k;
  spec.k2 = preferred_k2 >= 1 && k % preferred_k2 == 0 ? preferred_k2 : 1;
  spec.k1 = k / spec.k2;
  spec.seed = seed;
  return spec;
}

double evaluate_plan(const SystemData& system, const HourlyRecordSet& history,
                     const ExpansionPlan& plan, const PipelineConfig& config) {
  const ExpansionModel model = build_chronological_model(system, history, config.model);
  return solve_fixed(model, system, plan, config);
}

double percent_error(double ct_k, double ct_e) {
  if (!(ct_e > 0.0)) throw ParameterError("percent error needs a positive exact cost");
  return 100.0 * std::abs(ct_k - ct_e) / ct_e;
}

namespace {

struct StepTwoCache {
  std::mutex mutex;
  std::map<std::string, double> values;
};

EvaluationRow pipeline(const SystemData& system, const HourlyRecordSet& history,
                       const ExpansionModel& chronological, const ClusterSpec& spec,
                       const ExactResult& exact, const PipelineConfig& config,
                       StepTwoCache* cache) {
  EvaluationRow row;
  row.method = spec.method;
  row.k = spec.k;
  row.k1 = spec.k1;
  row.k2 = spec.k2;
  row.seed = spec.seed;

  // Step 1: cluster and solve the representative model.
  const auto start = Clock::now();
  const RepresentativeDaySet days = cluster_history(history, spec);
  const ExpansionModel model = build_representative_model(system, days, config.model);
  const MilpSolution s = solve_milp(model.problem, config.solver);
  row.step1_seconds = seconds_since(start);
  row.step1_work = s.lp_iterations;
  row.step1_status = s.status;
  if (!s.has_incumbent)
    throw SolveError(fmt::format("Step-1 solve for {} K={} ended with status {}",
                                 method_name(spec.method), spec.k, status_name(s.status)));
  row.representative_cost = s.objective;
  row.plan = plan_from_values(model, system, s.values);

  // Step 2: fix the plan and re-solve over the full history.
  const std::string key = format_plan_csv(row.plan);
  std::optional<double> cached;
  if (cache) {
    std::lock_guard lock(cache->mutex);
    auto it = cache->values.find(key);
    if (it != cache->values.end()) cached = it->second;
  }
  row.total_cost = cached ? *cached : solve_fixed(chronological, system, row.plan, config);
  if (cache && !cached) {
    std::lock_guard lock(cache->mutex);
    cache->values.emplace(key, row.total_cost);
  }

  // Step 3.
  row.error_percent = percent_error(row.total_cost, exact.total_cost);
  row.certified = exact.certified && s.status == MilpStatus::Optimal;
  return row;
}

}  // namespace

EvaluationRow run_pipeline(const SystemData& system, const HourlyRecordSet& history,
                           const ClusterSpec& spec, const ExactResult& exact,
                           const PipelineConfig& config) {
  const ExpansionModel chronological = build_chronological_model(system, history, config.model);
  return pipeline(system, history, chronological, spec, exact, config, nullptr);
}

GridResult run_grid(const SystemData& system, const HourlyRecordSet& history,
                    const GridConfig& grid, const PipelineConfig& config) {
  const int n_days = static_cast<int>(history.n_days());
  for (int k : grid.k_values)
    if (k < 1 || k > n_days)
      throw ParameterError(fmt::format("K = {} is outside [1, {}]", k, n_days));
  if (grid.n_seeds < 1) throw ParameterError("at least one seed is required");

  GridResult out;
  out.exact = exact_solution(system, history, config);
  if (grid.exact_only) return out;

  std::vector<ClusterSpec> specs;
  for (ClusterMethod method : grid.methods)
    for (int k : grid.k_values)
      for (int i = 0; i < grid.n_seeds; ++i) {
        const std::uint64_t seed = derive_seed(grid.seed, static_cast<std::uint64_t>(i));
        if (method == ClusterMethod::Mkm) {
          specs.push_back(mkm_spec(k, grid.preferred_k2, seed));
        } else if (method == ClusterMethod::Tkm) {
          specs.push_back(ClusterSpec{ClusterMethod::Tkm, k, 0, 0, seed});
        } else {
          throw ParameterError("grid methods must be tkm or mkm");
        }
      }

  const ExpansionModel chronological = build_chronological_model(system, history, config.model);
  StepTwoCache cache;
  out.rows.resize(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < specs.size(); i = next++) {
      try {
        out.rows[i] = pipeline(system, history, chronological, specs[i], out.exact, config, &cache);
      } catch (const PreconditionError& e) {
        EvaluationRow& row = out.rows[i];
        row.method = specs[i].method;
        row.k = specs[i].k;
        row.k1 = specs[i].k1;
        row.k2 = specs[i].k2;
        row.seed = specs[i].seed;
        row.failure = e.what();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(grid.jobs, 1, static_cast<int>(specs.size()));
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::optional<MethodSummary> summarize(const std::vector<EvaluationRow>& rows,
                                       ClusterMethod method, int k, TimingMode timing) {
  std::vector<double> cost, err, time;
  int failed = 0;
  for (const auto& r : rows) {
    if (r.method != method || r.k != k) continue;
    if (!r.failure.empty()) {
      ++failed;
      continue;
    }
    cost.push_back(r.total_cost);
    err.push_back(r.error_percent);
    time.push_back(timing == TimingMode::Work ? static_cast<double>(r.step1_work) : r.step1_seconds);
  }
  if (cost.empty()) return std::nullopt;
  MethodSummary s;
  s.runs = static_cast<int>(cost.size());
  s.failed = failed;
  s.median_cost = median(cost);
  s.median_error = median(err);
  s.min_error = *std::min_element(err.begin(), err.end());
  s.max_error = *std::max_element(err.begin(), err.end());
  s.median_time = median(time);
  return s;
}

namespace {

std::vector<int> k_values_of(const std::vector<EvaluationRow>& rows) {
  std::vector<int> ks;
  for (const auto& r : rows) ks.push_back(r.k);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::string cell(const std::optional<MethodSummary>& s, double MethodSummary::*field,
                 const char* format) {
  if (!s) return "";
  return fmt::format(fmt::runtime(format), (*s).*field);
}

const char* time_format(TimingMode timing) { return timing == TimingMode::Work ? "{:.0f}" : "{:.3f}"; }

}  // namespace

std::string format_table_csv(const std::vector<EvaluationRow>& rows, TimingMode timing) {
  std::string out = "K,CT_TKM,CT_MKM,eps_TKM,eps_MKM,time_TKM,time_MKM\n";
  for (int k : k_values_of(rows)) {
    const auto t = summarize(rows, ClusterMethod::Tkm, k, timing);
    const auto m = summarize(rows, ClusterMethod::Mkm, k, timing);
    out += fmt::format("{},{},{},{},{},{},{}\n", k, cell(t, &MethodSummary::median_cost, "{:.2f}"),
                       cell(m, &MethodSummary::median_cost, "{:.2f}"),
                       cell(t, &MethodSummary::median_error, "{:.6f}"),
                       cell(m, &MethodSummary::median_error, "{:.6f}"),
                       cell(t, &MethodSummary::median_time, time_format(timing)),
                       cell(m, &MethodSummary::median_time, time_format(timing)));
  }
  return out;
}

std::string format_runs_csv(const std::vector<EvaluationRow>& rows, TimingMode timing) {
  std::string out = fmt::format(
      "method,K,K1,K2,seed,CT_representative,CT_K,eps,{},step1_status,certified,plan,failure\n",
      timing == TimingMode::Work ? "step1_work" : "step1_seconds");
  for (const auto& r : rows) {
    if (!r.failure.empty()) {
      std::string quoted = r.failure;
      for (size_t at = quoted.find('"'); at != std::string::npos; at = quoted.find('"', at + 2))
        quoted.insert(at, 1, '"');
      out += fmt::format("{},{},{},{},{},,,,,,,,\"{}\"\n", method_name(r.method), r.k, r.k1, r.k2,
                         r.seed, quoted);
      continue;
    }
    std::string plan;
    for (size_t i = 0; i < r.plan.generator_ids.size(); ++i)
      plan += fmt::format("{}{}={:.4f}", plan.empty() ? "" : " ", r.plan.generator_ids[i], r.plan.generator_mw[i]);
    for (size_t i = 0; i < r.plan.line_ids.size(); ++i)
      plan += fmt::format("{}{}={}", plan.empty() ? "" : " ", r.plan.line_ids[i], r.plan.line_built[i]);
    for (size_t i = 0; i < r.plan.storage_ids.size(); ++i)
      plan += fmt::format("{}{}={}", plan.empty() ? "" : " ", r.plan.storage_ids[i], r.plan.storage_units[i]);
    for (size_t i = 0; i < r.plan.wind_ids.size(); ++i)
      plan += fmt::format("{}{}={:.4f}", plan.empty() ? "" : " ", r.plan.wind_ids[i], r.plan.wind_mw[i]);
    const std::string time = timing == TimingMode::Work ? std::to_string(r.step1_work)
                                                        : fmt::format("{:.3f}", r.step1_seconds);
    out += fmt::format("{},{},{},{},{},{:.2f},{:.2f},{:.6f},{},{},{},{},\n", method_name(r.method),
                       r.k, r.k1, r.k2, r.seed, r.representative_cost, r.total_cost,
                       r.error_percent, time, status_name(r.step1_status), r.certified ? 1 : 0,
                       plan);
  }
  return out;
}

void write_exact_csv(const ExactResult& exact, const std::filesystem::path& out_dir) {
  std::string out = "item,value\n";
  out += fmt::format("CT_E,{:.2f}\n", exact.total_cost);
  out += fmt::format("status,{}\n", status_name(exact.status));
  out += fmt::format("certified,{}\n", exact.certified ? 1 : 0);
  out += fmt::format("relative_gap,{:.3g}\n", exact.relative_gap);
  out += fmt::format("operation_cost,{:.2f}\n", exact.costs.operation);
  out += fmt::format("investment_cost,{:.2f}\n", exact.costs.investment);
  out += fmt::format("shed_fraction,{:.6f}\n", exact.costs.shed_fraction());
  out += fmt::format("nodes,{}\n", exact.nodes);
  out += fmt::format("lp_iterations,{}\n", exact.lp_iterations);
  detail::write_text_file(out_dir / "exact.csv", out);
  detail::write_text_file(out_dir / "exact_plan.csv", format_plan_csv(exact.plan));
}

void report(const std::vector<EvaluationRow>& rows, const ExactResult& exact,
            const std::filesystem::path& out_dir, TimingMode timing) {
  if (rows.empty()) throw ParameterError("no evaluation rows to report");
  detail::write_text_file(out_dir / "table.csv", format_table_csv(rows, timing));
  detail::write_text_file(out_dir / "runs.csv", format_runs_csv(rows, timing));
  write_exact_csv(exact, out_dir);

  std::string cost = "K,method,median_CT,CT_E\n";
  std::string error = "K,method,median_eps,min_eps,max_eps\n";
  std::string time = fmt::format("K,method,median_{}\n", timing == TimingMode::Work ? "work" : "seconds");
  for (int k : k_values_of(rows))
    for (ClusterMethod method : {ClusterMethod::Tkm, ClusterMethod::Mkm}) {
      const auto s = summarize(rows, method, k, timing);
      if (!s) continue;
      cost += fmt::format("{},{},{:.2f},{:.2f}\n", k, method_name(method), s->median_cost, exact.total_cost);
      error += fmt::format("{},{},{:.6f},{:.6f},{:.6f}\n", k, method_name(method), s->median_error,
                           s->min_error, s->max_error);
      time += fmt::format("{},{},{}\n", k, method_name(method),
                          fmt::format(fmt::runtime(time_format(timing)), s->median_time));
    }
  detail::write_text_file(out_dir / "cost_vs_k.csv", cost);
  detail::write_text_file(out_dir / "error_vs_k.csv", error);
  detail::write_text_file(out_dir / "time_vs_k.csv", time);
}

}  // namespace repday
