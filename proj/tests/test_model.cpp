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
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "repday/clustering.hpp"
#include "repday/error.hpp"
#include "repday/evaluation.hpp"
#include "repday/milp.hpp"
#include "repday/model.hpp"
#include "repday/system.hpp"
#include "repday/timeseries.hpp"

using namespace repday;

namespace {

const std::filesystem::path kData = REPDAY_DATA_DIR;

RepresentativeDay flat_day(int weight, double beta, double alpha, int n_wind = 0) {
  RepresentativeDay d;
  d.weight = weight;
  d.beta.assign(1, std::vector<double>(kHoursPerDay, beta));
  d.alpha.assign(n_wind, std::vector<double>(kHoursPerDay, alpha));
  return d;
}

// One bus, one existing generator, one demand in zone "z".
SystemData single_bus() {
  SystemData s;
  s.name = "one";
  s.buses.push_back({"n", true});
  Generator g;
  g.id = "g";
  g.bus = "n";
  g.capacity = 100;
  g.cost = 10;
  s.generators.push_back(g);
  Demand d;
  d.id = "d";
  d.bus = "n";
  d.zone = "z";
  d.peak = 50;
  d.shed_cost = 1000;
  s.demands.push_back(d);
  s.budgets.mode = BudgetMode::PerCategory;
  return s;
}

RepresentativeDaySet one_zone_days(std::vector<RepresentativeDay> days) {
  RepresentativeDaySet set;
  set.days = std::move(days);
  set.load_zones = {"z"};
  return set;
}

double solve_objective(const MilpProblem& problem) {
  auto sol = solve_milp(problem);
  REQUIRE(sol.status == MilpStatus::Optimal);
  return sol.objective;
}

HourlyRecordSet desk_history() { return load_hourly_csv(kData / "desk_history_14.csv"); }

RepresentativeDaySet desk_days(int k) {
  ClusterSpec spec;
  spec.k = k;
  spec.seed = 7;
  return cluster_history(desk_history(), spec);
}

}  // namespace

TEST_CASE("single bus: generation equals load for a full year") {
  auto s = single_bus();
  auto model = build_representative_model(s, one_zone_days({flat_day(365, 1.0, 0.0)}));
  auto sol = solve_milp(model.problem);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(4380000.0).epsilon(1e-9));
  auto detail = extract_solution(model, s, sol.values);
  CHECK(detail.costs.operation == doctest::Approx(10.0 * 50 * 24 * 365).epsilon(1e-9));
  CHECK(detail.costs.load_shedding == 0.0);
  CHECK(detail.costs.investment == 0.0);
  CHECK(detail.costs.total == doctest::Approx(detail.costs.operation + detail.costs.investment));
}

TEST_CASE("single bus: shortage is shed at the shedding cost") {
  auto s = single_bus();
  s.demands[0].peak = 120;
  auto model = build_representative_model(s, one_zone_days({flat_day(2, 1.0, 0.0)}));
  auto sol = solve_milp(model.problem);
  REQUIRE(sol.status == MilpStatus::Optimal);
  const double expected = 2 * 24 * (100 * 10.0 + 20 * 1000.0);
  CHECK(sol.objective == doctest::Approx(expected).epsilon(1e-9));
  auto detail = extract_solution(model, s, sol.values);
  CHECK(detail.costs.shed_mwh == doctest::Approx(2 * 24 * 20.0).epsilon(1e-9));
  CHECK(detail.costs.shed_fraction() == doctest::Approx(20.0 / 120.0).epsilon(1e-9));
}

TEST_CASE("storage recursion arithmetic") {
  auto s = single_bus();
  Storage st;
  st.id = "s";
  st.bus = "n";
  st.energy_capacity = 100;
  st.power_capacity = 20;
  s.storages.push_back(st);
  auto model = build_representative_model(s, one_zone_days({flat_day(1, 0.5, 0.0)}));
  const double base = s.base_power;

  // Pin the storage schedule: charge 10 MW in hour 1, idle in hour 2,
  // discharge 4.5 MW in hour 3, nothing afterwards.
  MilpProblem pinned = model.problem;
  for (int h = 0; h < kHoursPerDay; ++h) {
    const auto& blk = model.block(0, h);
    const double charge = h == 0 ? 10.0 : 0.0;
    const double discharge = h == 2 ? 4.5 : 0.0;
    pinned.variable(blk.charge[0]).lower = pinned.variable(blk.charge[0]).upper = charge / base;
    pinned.variable(blk.discharge[0]).lower = pinned.variable(blk.discharge[0]).upper = discharge / base;
  }
  // The end-of-day minimum (zero initial energy) does not bind here.
  auto sol = solve_milp(pinned);
  REQUIRE(sol.status == MilpStatus::Optimal);
  auto energy = [&](int h) { return sol.values[model.block(0, h).energy[0]] * base; };
  CHECK(energy(0) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(energy(1) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(energy(2) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(energy(23) == doctest::Approx(4.0).epsilon(1e-12));

  const auto& row = model.problem.row(model.problem.find_row("soc_s_d1_h1"));
  CHECK(row.rhs == 0.0);
  CHECK(row.terms.size() == 3);
}

TEST_CASE("chronological model carries storage energy overnight") {
  auto s = single_bus();
  Storage st;
  st.id = "s";
  st.bus = "n";
  st.energy_capacity = 100;
  st.power_capacity = 20;
  s.storages.push_back(st);
  auto days = one_zone_days({flat_day(1, 0.5, 0.0), flat_day(1, 0.5, 0.0)});
  auto model = build_chronological_model(s, days);
  CHECK(model.problem.find_row("eod_s_d1") < 0);

  const auto& link = model.problem.row(model.problem.find_row("soc_s_d2_h1"));
  const int previous = model.block(0, 23).energy[0];
  CHECK(std::any_of(link.terms.begin(), link.terms.end(),
                    [&](const Term& t) { return t.var == previous && t.coef == -1.0; }));

  MilpProblem pinned = model.problem;
  for (int d = 0; d < 2; ++d)
    for (int h = 0; h < kHoursPerDay; ++h) {
      const auto& blk = model.block(d, h);
      const double charge = (d == 0 && h == 23) ? 0.1 : 0.0;
      pinned.variable(blk.charge[0]).lower = pinned.variable(blk.charge[0]).upper = charge;
      pinned.variable(blk.discharge[0]).lower = pinned.variable(blk.discharge[0]).upper = 0.0;
    }
  auto sol = solve_milp(pinned);
  REQUIRE(sol.status == MilpStatus::Optimal);
  CHECK(sol.values[model.block(1, 0).energy[0]] * s.base_power == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("one-day chronological model is the representative model without end-of-day rows") {
  auto s = load_system(kData / "desk3.toml");
  auto history = desk_history();
  auto one = history_days(history);
  one.days.resize(1);
  auto rep = build_representative_model(s, one);
  auto chrono = build_chronological_model(s, one);
  CHECK(rep.problem.num_variables() == chrono.problem.num_variables());
  CHECK(rep.problem.num_rows() == chrono.problem.num_rows() + s.storages.size());
  for (const auto& st : s.storages) CHECK(rep.problem.find_row("eod_" + st.id + "_d1") >= 0);
  CHECK(solve_objective(chrono.problem) <= solve_objective(rep.problem) + 1e-6);
}

TEST_CASE("variable and row census on the desk system") {
  auto s = load_system(kData / "desk3.toml");
  auto days = desk_days(2);
  auto model = build_representative_model(s, days);

  // Independent count from the constraint formulas.
  const size_t G = s.generators.size(), D = s.demands.size(), N = s.buses.size();
  const size_t L = s.lines.size(), S = s.storages.size(), W = s.wind_units.size();
  const size_t Gc = s.candidate_generators().size(), Lc = s.candidate_lines().size();
  const size_t Sc = s.candidate_storages().size(), Wc = s.candidate_wind().size();
  const size_t hours = 2 * kHoursPerDay;
  const size_t vars = hours * (G + D + N + L + 3 * S + W) + Gc + Lc + Sc + Wc;
  const size_t rows = hours * (N + (L - Lc) + 4 * Lc + Gc + 3 * Sc + S + Wc) + 2 * S + 1;
  CHECK(model.problem.num_variables() == vars);
  CHECK(model.problem.num_rows() == rows);
  CHECK(vars == 1013);
  CHECK(rows == 1013);

  size_t integers = 0;
  for (const auto& v : model.problem.variables()) integers += v.is_integral();
  CHECK(integers == Lc + Sc);
}

TEST_CASE("substituting line decisions matches the big-M model with x fixed") {
  auto s = load_system(kData / "desk3.toml");
  auto days = desk_days(1);
  auto big_m = build_representative_model(s, days);
  for (int code = 0; code < 4; ++code) {
    std::vector<int> x{code & 1, (code >> 1) & 1};
    MilpProblem fixed = big_m.problem;
    for (size_t i = 0; i < x.size(); ++i) {
      auto& v = fixed.variable(big_m.line_build[s.candidate_lines()[i]]);
      v.lower = v.upper = x[i];
    }
    ModelOptions options;
    options.substituted_lines = x;
    auto direct = build_representative_model(s, days, options);
    const double a = solve_objective(fixed);
    const double b = solve_objective(direct.problem);
    CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
  }
}

TEST_CASE("fix_investments reproduces the optimum of the plan it came from") {
  auto s = load_system(kData / "desk3.toml");
  auto days = desk_days(2);
  auto model = build_representative_model(s, days);
  auto sol = solve_milp(model.problem);
  REQUIRE(sol.status == MilpStatus::Optimal);
  auto plan = plan_from_values(model, s, sol.values);
  auto fixed = fix_investments(model, s, plan);
  CHECK(fixed.free_integer_count() == 0);
  auto again = solve_milp(fixed);
  REQUIRE(again.status == MilpStatus::Optimal);
  CHECK(again.objective == doctest::Approx(sol.objective).epsilon(1e-7));

  // Any other plan costs at least as much.
  auto empty = fix_investments(model, s, empty_plan(s));
  CHECK(solve_objective(empty) >= sol.objective - 1e-6 * sol.objective);
}

TEST_CASE("forbidding storage never lowers the cost") {
  auto s = load_system(kData / "desk3.toml");
  auto days = desk_days(2);
  ModelOptions none;
  none.storage_enabled = false;
  const double with = solve_objective(build_representative_model(s, days).problem);
  const double without = solve_objective(build_representative_model(s, days, none).problem);
  CHECK(without >= with - 1e-6 * with);
}

TEST_CASE("budget rows follow the budget mode") {
  auto s = load_system(kData / "desk3.toml");
  auto days = desk_days(1);
  auto total = build_representative_model(s, days);
  CHECK(total.problem.find_row("budget_total") >= 0);
  CHECK(total.problem.find_row("budget_generation") < 0);

  s.budgets.mode = BudgetMode::PerCategory;
  s.budgets.generation = 5e6;
  auto per = build_representative_model(s, days);
  CHECK(per.problem.find_row("budget_total") < 0);
  const auto& row = per.problem.row(per.problem.find_row("budget_generation"));
  CHECK(row.rhs == 5e6);
  REQUIRE(row.terms.size() == 1);
  CHECK(row.terms[0].coef == s.generators[s.candidate_generators()[0]].investment_cost);

  // A generation budget of zero forbids the candidate generator.
  s.budgets.generation = 0.0;
  auto sol = solve_milp(build_representative_model(s, days).problem);
  REQUIRE(sol.status == MilpStatus::Optimal);
  auto m = build_representative_model(s, days);
  CHECK(std::abs(sol.values[m.generator_capacity[s.candidate_generators()[0]]]) <= 1e-9);
}

TEST_CASE("build errors") {
  auto s = single_bus();
  auto days = one_zone_days({flat_day(1, 1.0, 0.0)});
  days.load_zones = {"other"};
  CHECK_THROWS_AS(build_representative_model(s, days), BuildError);
  CHECK_THROWS_AS(build_representative_model(s, one_zone_days({})), ParameterError);

  auto desk = load_system(kData / "desk3.toml");
  desk.big_m = 0.01;
  auto model = build_representative_model(desk, desk_days(1));
  CHECK(model.warnings.size() == 1);
}

TEST_CASE("solution CSV formats") {
  auto s = single_bus();
  auto model = build_representative_model(s, one_zone_days({flat_day(3, 0.5, 0.0)}));
  auto sol = solve_milp(model.problem);
  auto detail = extract_solution(model, s, sol.values);
  const std::string costs = format_costs_csv(detail.costs);
  CHECK(costs.rfind("item,value\n", 0) == 0);
  CHECK(costs.find("total_cost,") != std::string::npos);
  const std::string schedule = format_schedule_csv(detail.schedule);
  CHECK(schedule.find("1,1,generation_mw,g,25\n") != std::string::npos);

  std::vector<double> bad = sol.values;
  bad[model.block(0, 0).generation[0]] += 1.0;
  CHECK_THROWS_AS(extract_solution(model, s, bad), SolveError);
}
