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

#ifndef REPDAY_MODEL_HPP
#define REPDAY_MODEL_HPP

// Generation, transmission and storage expansion planning model. Network
// quantities are assembled in per unit of the system base power; investment
// decisions stay in MW, units and 0/1; the objective is in $.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repday/clustering.hpp"
#include "repday/problem.hpp"
#include "repday/system.hpp"
#include "repday/timeseries.hpp"

namespace repday {

struct ModelOptions {
  // false removes every storage unit, existing and candidate.
  bool storage_enabled = true;
  // When set (one 0/1 per candidate line, in candidate order), the build
  // decisions are substituted into the flow equations instead of going
  // through the big-M pair: a built line gets the plain DC equality, an
  // unbuilt one carries zero flow. The decision variables remain, fixed.
  std::optional<std::vector<int>> substituted_lines;
};

// Variable indices of one day-hour block, laid out per entity.
struct HourBlock {
  std::vector<int> generation;   // p^G per generator
  std::vector<int> shed;         // p^LS per demand
  std::vector<int> flow;         // p^L per line
  std::vector<int> angle;        // theta per bus
  std::vector<int> charge;       // p^SC per storage
  std::vector<int> discharge;    // p^SD per storage
  std::vector<int> energy;       // e^S per storage
  std::vector<int> wind;         // p^W per wind unit
  std::vector<int> balance_rows; // nodal balance row per bus
};

struct ExpansionModel {
  MilpProblem problem;
  bool chronological = false;
  int n_days = 0;
  std::vector<int> weights;      // sigma per day
  double base_power = 100.0;
  double delta_tau = 1.0;
  bool storage_enabled = true;
  // Investment variables, one entry per system entity (-1 for existing).
  std::vector<int> generator_capacity;
  std::vector<int> line_build;
  std::vector<int> storage_units;
  std::vector<int> wind_capacity;
  std::vector<HourBlock> hours;  // [day * 24 + hour]
  std::vector<double> demand_mw; // [(day * 24 + hour) * n_demands + d]
  std::vector<std::string> warnings;

  const HourBlock& block(int day, int hour) const { return hours[day * kHoursPerDay + hour]; }
};

ExpansionModel build_representative_model(const SystemData& system,
                                          const RepresentativeDaySet& days,
                                          const ModelOptions& options = {});

// Days are taken in the given order with weight 1 and storage energy carried
// from each day's last hour into the next day's first hour.
ExpansionModel build_chronological_model(const SystemData& system,
                                         const RepresentativeDaySet& days_in_order,
                                         const ModelOptions& options = {});
ExpansionModel build_chronological_model(const SystemData& system,
                                         const HourlyRecordSet& history,
                                         const ModelOptions& options = {});

struct ExpansionPlan {
  std::vector<std::string> generator_ids;
  std::vector<double> generator_mw;
  std::vector<std::string> line_ids;
  std::vector<int> line_built;
  std::vector<std::string> storage_ids;
  std::vector<int> storage_units;
  std::vector<std::string> wind_ids;
  std::vector<double> wind_mw;

  bool operator==(const ExpansionPlan&) const = default;
};

// All candidates at zero.
ExpansionPlan empty_plan(const SystemData& system);

// Copy of the model's problem with every investment variable pinned to the
// plan; the result has no free integer variables. Throws ParameterError
// when the plan names unknown candidates or leaves the variable bounds.
MilpProblem fix_investments(const ExpansionModel& model, const SystemData& system,
                            const ExpansionPlan& plan);

struct CostBreakdown {
  double generation = 0.0;            // $ weighted by sigma
  double load_shedding = 0.0;         // $ weighted by sigma
  double operation = 0.0;
  double investment_generation = 0.0; // annualized $
  double investment_transmission = 0.0;
  double investment_storage = 0.0;
  double investment_wind = 0.0;
  double investment = 0.0;
  double total = 0.0;
  double demand_mwh = 0.0;            // weighted by sigma
  double shed_mwh = 0.0;
  double shed_fraction() const { return demand_mwh > 0.0 ? shed_mwh / demand_mwh : 0.0; }
};

// Hourly operation in MW / MWh, one table per quantity, rows [day*24+hour].
struct OperationSchedule {
  struct Table {
    std::string quantity;
    std::vector<std::string> entities;
    std::vector<double> values;  // [(day * 24 + hour) * entities + k]
  };
  int n_days = 0;
  std::vector<Table> tables;     // generation, shed, flow, angle, charge, discharge, energy, wind
};

struct ModelSolution {
  ExpansionPlan plan;
  OperationSchedule schedule;
  CostBreakdown costs;
};

ExpansionPlan plan_from_values(const ExpansionModel& model, const SystemData& system,
                               std::span<const double> values);

// Checks the point against all rows, bounds and integrality marks first and
// throws SolveError listing the worst violations when it fails.
ModelSolution extract_solution(const ExpansionModel& model, const SystemData& system,
                               std::span<const double> values);

std::string format_plan_csv(const ExpansionPlan& plan);
std::string format_costs_csv(const CostBreakdown& costs);
std::string format_schedule_csv(const OperationSchedule& schedule);
void write_model_solution(const std::filesystem::path& dir, const ModelSolution& solution);

}  // namespace repday

#endif  // REPDAY_MODEL_HPP
