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

#ifndef REPDAY_SYSTEM_HPP
#define REPDAY_SYSTEM_HPP

// Physical and economic data of the power system: network, generation,
// storage, wind, demand and investment budgets. Monetary values in $,
// powers in MW, energies in MWh, reactances in pu on the system base.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "repday/keytree.hpp"

namespace repday {

struct Bus {
  std::string id;
  bool is_reference = false;
};

struct Generator {
  std::string id;
  std::string bus;
  double capacity = 0.0;          // MW; for candidates the buildable maximum
  double cost = 0.0;              // $/MWh
  bool candidate = false;
  double investment_cost = 0.0;   // $/MW
  double annualized_cost = 0.0;   // $/MW
};

struct Line {
  std::string id;
  std::string from;               // sending end
  std::string to;                 // receiving end
  double reactance = 0.0;         // pu
  double capacity = 0.0;          // MW
  bool candidate = false;
  double investment_cost = 0.0;   // $
  double annualized_cost = 0.0;   // $

  double susceptance() const { return 1.0 / reactance; }  // pu
};

struct Storage {
  std::string id;
  std::string bus;
  double energy_capacity = 0.0;   // MWh per unit
  double power_capacity = 0.0;    // MW per unit
  double charge_efficiency = 0.9;
  double discharge_efficiency = 0.9;
  double initial_energy = 0.0;    // MWh per unit
  bool candidate = false;
  int max_units = 0;
  double investment_cost = 0.0;   // $ per unit
  double annualized_cost = 0.0;   // $ per unit
};

struct WindUnit {
  std::string id;
  std::string bus;
  std::string zone;
  double capacity = 0.0;          // MW
  bool candidate = false;
  double investment_cost = 0.0;   // $/MW
  double annualized_cost = 0.0;   // $/MW
};

struct Demand {
  std::string id;
  std::string bus;
  std::string zone;
  double peak = 0.0;              // MW
  double shed_cost = 0.0;         // $/MWh
};

enum class BudgetMode { PerCategory, Total };

struct Budgets {
  BudgetMode mode = BudgetMode::Total;
  // Per-category limits; absent means unconstrained.
  std::optional<double> generation;
  std::optional<double> transmission;
  std::optional<double> storage;
  std::optional<double> wind;
  std::optional<double> total;
  double annualization = 0.1;     // annualized = factor * investment cost
};

inline constexpr double kDefaultBigM = 500000.0;

struct SystemData {
  std::string name;
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Line> lines;
  std::vector<Storage> storages;
  std::vector<WindUnit> wind_units;
  std::vector<Demand> demands;
  Budgets budgets;
  double big_m = kDefaultBigM;
  double delta_tau = 1.0;         // h
  double base_power = 100.0;      // MVA

  int bus_index(const std::string& id) const;  // -1 if absent
  int reference_bus() const;                   // -1 if not exactly one

  // Omega_n membership, by entity index.
  std::vector<int> generators_at(int bus) const;
  std::vector<int> demands_at(int bus) const;
  std::vector<int> storages_at(int bus) const;
  std::vector<int> wind_at(int bus) const;

  std::vector<int> candidate_generators() const;
  std::vector<int> candidate_lines() const;
  std::vector<int> candidate_storages() const;
  std::vector<int> candidate_wind() const;
};

// Investment cost of one storage unit, $: 60,000 $/MWh plus 1,000,000 $/MW.
double storage_investment_cost(double energy_mwh, double power_mw);

struct Diagnostic {
  std::string path;     // e.g. "lines[3].reactance"
  std::string message;
};

std::vector<Diagnostic> validate(const SystemData& system);

// Parses and validates; any diagnostic becomes a SchemaError carrying the
// offending path.
SystemData system_from_keytree(const KeyTree& tree);
SystemData load_system(const std::filesystem::path& path);
KeyTree system_to_keytree(const SystemData& system);

// Upper bound on any angle difference the flow limits of existing lines
// permit between two connected buses; +inf when the existing network is
// disconnected.
double angle_span_bound(const SystemData& system);
// Smallest big-M constant valid for every candidate line (pu flow units).
double safe_big_m(const SystemData& system);

}  // namespace repday

#endif  // REPDAY_SYSTEM_HPP
