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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "repday/error.hpp"
#include "repday/evaluation.hpp"
#include "repday/system.hpp"
#include "repday/timeseries.hpp"

using namespace repday;

namespace {

const std::filesystem::path kData = REPDAY_DATA_DIR;

// The first `days` days of the desk history keep these solves quick.
HourlyRecordSet short_history(size_t days) {
  auto h = load_hourly_csv(kData / "desk_history_14.csv");
  h.day_labels.resize(days);
  h.load.resize(days * kHoursPerDay * h.load_zones.size());
  h.wind.resize(days * kHoursPerDay * h.wind_zones.size());
  return h;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t line_count(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

EvaluationRow fake_row(ClusterMethod method, int k, double error) {
  EvaluationRow r;
  r.method = method;
  r.k = k;
  r.total_cost = 1000.0 * (1.0 + error / 100.0);
  r.error_percent = error;
  r.step1_work = 10 * k;
  return r;
}

}  // namespace

TEST_CASE("percent error") {
  CHECK(percent_error(5.0, 5.0) == 0.0);
  CHECK(percent_error(10.0, 5.0) == 100.0);
  CHECK(percent_error(0.0, 5.0) == 100.0);
  // Unrounded costs behind a published 0.66% table entry.
  CHECK(percent_error(3.14e9, 3.124e9) == doctest::Approx(0.512).epsilon(1e-3));
  CHECK_THROWS_AS(percent_error(1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(percent_error(1.0, -2.0), ParameterError);
}

TEST_CASE("MKM factorization for a grid value") {
  auto eight = mkm_spec(8, 2, 1);
  CHECK(eight.k1 == 4);
  CHECK(eight.k2 == 2);
  auto seven = mkm_spec(7, 2, 1);
  CHECK(seven.k1 == 7);
  CHECK(seven.k2 == 1);
  CHECK_THROWS_AS(mkm_spec(0, 2, 1), ParameterError);
}

TEST_CASE("report layout") {
  const auto dir = std::filesystem::temp_directory_path() / "repday_report_test";
  std::filesystem::remove_all(dir);
  ExactResult exact;
  exact.total_cost = 1000.0;

  report({fake_row(ClusterMethod::Tkm, 3, 1.5)}, exact, dir);
  const std::string one = slurp(dir / "table.csv");
  CHECK(one == "K,CT_TKM,CT_MKM,eps_TKM,eps_MKM,time_TKM,time_MKM\n3,1015.00,,1.500000,,30,\n");
  for (const char* f : {"runs.csv", "exact.csv", "exact_plan.csv", "cost_vs_k.csv", "error_vs_k.csv", "time_vs_k.csv"})
    CHECK(std::filesystem::exists(dir / f));

  std::vector<EvaluationRow> rows;
  for (int k : {2, 4, 6, 8, 10, 12, 14, 16})
    for (auto m : {ClusterMethod::Tkm, ClusterMethod::Mkm})
      for (double e : {1.0, 3.0, 2.0}) rows.push_back(fake_row(m, k, e * k));
  report(rows, exact, dir);
  const std::string table = slurp(dir / "table.csv");
  CHECK(line_count(table) == 9);
  CHECK(table.find("\n4,1080.00,1080.00,8.000000,8.000000,40,40\n") != std::string::npos);
  CHECK(line_count(slurp(dir / "runs.csv")) == rows.size() + 1);
  CHECK(line_count(slurp(dir / "error_vs_k.csv")) == 17);

  CHECK_THROWS_AS(report({}, exact, dir), ParameterError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("summaries use medians and spreads") {
  std::vector<EvaluationRow> rows{fake_row(ClusterMethod::Mkm, 4, 5.0), fake_row(ClusterMethod::Mkm, 4, 1.0),
                                  fake_row(ClusterMethod::Mkm, 4, 2.0), fake_row(ClusterMethod::Mkm, 4, 9.0)};
  auto s = summarize(rows, ClusterMethod::Mkm, 4, TimingMode::Work);
  REQUIRE(s);
  CHECK(s->runs == 4);
  CHECK(s->median_error == 3.5);
  CHECK(s->min_error == 1.0);
  CHECK(s->max_error == 9.0);
  CHECK(!summarize(rows, ClusterMethod::Tkm, 4, TimingMode::Work));

  EvaluationRow rejected;
  rejected.method = ClusterMethod::Mkm;
  rejected.k = 4;
  rejected.k1 = 2;
  rejected.k2 = 2;
  rejected.failure = "cluster 1 has 1 member(s), fewer than K2 = 2";
  rows.push_back(rejected);
  s = summarize(rows, ClusterMethod::Mkm, 4, TimingMode::Work);
  CHECK(s->runs == 4);
  CHECK(s->failed == 1);
  CHECK(s->median_error == 3.5);
  const std::string runs = format_runs_csv({rejected}, TimingMode::Work);
  CHECK(runs.substr(runs.find('\n') + 1) == "mkm,4,2,2,0,,,,,,,,\"cluster 1 has 1 member(s), fewer than K2 = 2\"\n");
}

TEST_CASE("pipeline on a short desk history") {
  const auto system = load_system(kData / "desk3.toml");
  const auto history = short_history(4);
  const auto exact = exact_solution(system, history);
  CHECK(exact.certified);
  CHECK(exact.total_cost > 0.0);

  SUBCASE("the exact plan re-evaluates to zero error") {
    const double ct = evaluate_plan(system, history, exact.plan);
    CHECK(percent_error(ct, exact.total_cost) <= 1e-9);
  }

  SUBCASE("any other plan costs at least the exact optimum") {
    const double ct = evaluate_plan(system, history, empty_plan(system));
    CHECK(ct >= exact.total_cost * (1.0 - 1e-9));
  }

  SUBCASE("rows for both methods, including K = n_days") {
    for (int k : {2, 4}) {
      auto tkm_row = run_pipeline(system, history, ClusterSpec{ClusterMethod::Tkm, k, 0, 0, 3}, exact);
      auto mkm_row = run_pipeline(system, history, mkm_spec(k, 2, 3), exact);
      CHECK(tkm_row.error_percent >= 0.0);
      CHECK(mkm_row.error_percent >= 0.0);
      CHECK(tkm_row.total_cost >= exact.total_cost * (1.0 - 1e-9));
      CHECK(mkm_row.total_cost >= exact.total_cost * (1.0 - 1e-9));
    }
  }

  SUBCASE("forbidding storage never lowers the exact cost") {
    PipelineConfig none;
    none.model.storage_enabled = false;
    CHECK(exact_solution(system, history, none).total_cost >= exact.total_cost * (1.0 - 1e-9));
  }
}

TEST_CASE("grid runs are deterministic and independent of the job count") {
  const auto system = load_system(kData / "desk3.toml");
  const auto history = short_history(3);
  GridConfig grid;
  grid.k_values = {1, 2};
  grid.n_seeds = 2;
  auto a = run_grid(system, history, grid);
  grid.jobs = 3;
  auto b = run_grid(system, history, grid);
  REQUIRE(a.rows.size() == 8);
  REQUIRE(b.rows.size() == 8);
  CHECK(a.exact.total_cost == b.exact.total_cost);
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].method == b.rows[i].method);
    CHECK(a.rows[i].k == b.rows[i].k);
    CHECK(a.rows[i].seed == b.rows[i].seed);
    CHECK(a.rows[i].total_cost == b.rows[i].total_cost);
    CHECK(a.rows[i].plan == b.rows[i].plan);
    CHECK(a.rows[i].error_percent >= 0.0);
  }
  CHECK(format_runs_csv(a.rows, TimingMode::Work) == format_runs_csv(b.rows, TimingMode::Work));

  grid.k_values = {4};
  CHECK_THROWS_AS(run_grid(system, history, grid), ParameterError);

  grid.k_values = {2};
  grid.exact_only = true;
  CHECK(run_grid(system, history, grid).rows.empty());
}
