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

#include "repday/system.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "repday/error.hpp"

namespace repday {

int SystemData::bus_index(const std::string& id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return -1;
}

int SystemData::reference_bus() const {
  int found = -1;
  for (size_t i = 0; i < buses.size(); ++i) {
    if (!buses[i].is_reference) continue;
    if (found >= 0) return -1;
    found = static_cast<int>(i);
  }
  return found;
}

namespace {

template <typename T>
std::vector<int> located_at(const SystemData& s, const std::vector<T>& items, int bus) {
  std::vector<int> out;
  for (size_t i = 0; i < items.size(); ++i)
    if (s.bus_index(items[i].bus) == bus) out.push_back(static_cast<int>(i));
  return out;
}

template <typename T>
std::vector<int> candidates_of(const std::vector<T>& items) {
  std::vector<int> out;
  for (size_t i = 0; i < items.size(); ++i)
    if (items[i].candidate) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace

std::vector<int> SystemData::generators_at(int bus) const { return located_at(*this, generators, bus); }
std::vector<int> SystemData::demands_at(int bus) const { return located_at(*this, demands, bus); }
std::vector<int> SystemData::storages_at(int bus) const { return located_at(*this, storages, bus); }
std::vector<int> SystemData::wind_at(int bus) const { return located_at(*this, wind_units, bus); }
std::vector<int> SystemData::candidate_generators() const { return candidates_of(generators); }
std::vector<int> SystemData::candidate_lines() const { return candidates_of(lines); }
std::vector<int> SystemData::candidate_storages() const { return candidates_of(storages); }
std::vector<int> SystemData::candidate_wind() const { return candidates_of(wind_units); }

double storage_investment_cost(double energy_mwh, double power_mw) {
  if (energy_mwh < 0.0 || power_mw < 0.0)
    throw ParameterError("storage ratings must be non-negative");
  return 60000.0 * energy_mwh + 1000000.0 * power_mw;
}

namespace {

class DiagnosticSink {
 public:
  void add(std::string path, std::string message) {
    out.push_back({std::move(path), std::move(message)});
  }
  std::vector<Diagnostic> out;
};

template <typename T>
void check_ids(DiagnosticSink& sink, const char* section, const std::vector<T>& items) {
  std::set<std::string> seen;
  for (size_t i = 0; i < items.size(); ++i) {
    const std::string path = fmt::format("{}[{}].id", section, i);
    if (items[i].id.empty()) sink.add(path, "empty id");
    else if (!seen.insert(items[i].id).second)
      sink.add(path, fmt::format("duplicate id '{}'", items[i].id));
  }
}

void check_bus(DiagnosticSink& sink, const SystemData& s, const std::string& path,
               const std::string& bus) {
  if (s.bus_index(bus) < 0) sink.add(path, fmt::format("unknown bus '{}'", bus));
}

template <typename T>
void check_costs(DiagnosticSink& sink, const std::string& prefix, const T& item) {
  if (item.candidate) {
    if (item.investment_cost < 0.0 || item.annualized_cost < 0.0)
      sink.add(prefix + ".investment_cost", "investment cost must be non-negative");
  } else if (item.investment_cost != 0.0 || item.annualized_cost != 0.0) {
    sink.add(prefix + ".investment_cost", "existing unit must not carry an investment cost");
  }
}

}  // namespace

std::vector<Diagnostic> validate(const SystemData& s) {
  DiagnosticSink sink;
  if (s.buses.empty()) sink.add("buses", "system has no buses");
  check_ids(sink, "buses", s.buses);
  const auto refs = std::count_if(s.buses.begin(), s.buses.end(),
                                  [](const Bus& b) { return b.is_reference; });
  if (refs != 1)
    sink.add("buses", fmt::format("expected exactly one reference bus, found {}", refs));

  check_ids(sink, "generators", s.generators);
  for (size_t i = 0; i < s.generators.size(); ++i) {
    const auto& g = s.generators[i];
    const std::string p = fmt::format("generators[{}]", i);
    check_bus(sink, s, p + ".bus", g.bus);
    if (!(g.capacity > 0.0)) sink.add(p + ".capacity", "capacity must be positive");
    if (!(g.cost >= 0.0)) sink.add(p + ".cost", "operation cost must be non-negative");
    check_costs(sink, p, g);
  }

  check_ids(sink, "lines", s.lines);
  for (size_t i = 0; i < s.lines.size(); ++i) {
    const auto& l = s.lines[i];
    const std::string p = fmt::format("lines[{}]", i);
    check_bus(sink, s, p + ".from", l.from);
    check_bus(sink, s, p + ".to", l.to);
    if (l.from == l.to) sink.add(p, "sending and receiving bus coincide");
    if (!(l.reactance > 0.0)) sink.add(p + ".reactance", "reactance must be positive");
    if (!(l.capacity > 0.0)) sink.add(p + ".capacity", "capacity must be positive");
    check_costs(sink, p, l);
  }

  check_ids(sink, "storages", s.storages);
  for (size_t i = 0; i < s.storages.size(); ++i) {
    const auto& st = s.storages[i];
    const std::string p = fmt::format("storages[{}]", i);
    check_bus(sink, s, p + ".bus", st.bus);
    if (!(st.energy_capacity > 0.0)) sink.add(p + ".energy_capacity", "energy capacity must be positive");
    if (!(st.power_capacity > 0.0)) sink.add(p + ".power_capacity", "power capacity must be positive");
    if (!(st.charge_efficiency > 0.0 && st.charge_efficiency <= 1.0))
      sink.add(p + ".charge_efficiency", "efficiency out of range");
    if (!(st.discharge_efficiency > 0.0 && st.discharge_efficiency <= 1.0))
      sink.add(p + ".discharge_efficiency", "efficiency out of range");
    if (!(st.initial_energy >= 0.0 && st.initial_energy <= st.energy_capacity))
      sink.add(p + ".initial_energy", "initial energy outside [0, energy_capacity]");
    if (st.candidate && st.max_units < 1)
      sink.add(p + ".max_units", "candidate storage needs max_units >= 1");
    if (!st.candidate && st.max_units != 0)
      sink.add(p + ".max_units", "existing storage must not set max_units");
    check_costs(sink, p, st);
  }

  check_ids(sink, "wind", s.wind_units);
  for (size_t i = 0; i < s.wind_units.size(); ++i) {
    const auto& w = s.wind_units[i];
    const std::string p = fmt::format("wind[{}]", i);
    check_bus(sink, s, p + ".bus", w.bus);
    if (w.zone.empty()) sink.add(p + ".zone", "zone must not be empty");
    if (!(w.capacity > 0.0)) sink.add(p + ".capacity", "capacity must be positive");
    check_costs(sink, p, w);
  }

  check_ids(sink, "demands", s.demands);
  for (size_t i = 0; i < s.demands.size(); ++i) {
    const auto& d = s.demands[i];
    const std::string p = fmt::format("demands[{}]", i);
    check_bus(sink, s, p + ".bus", d.bus);
    if (d.zone.empty()) sink.add(p + ".zone", "zone must not be empty");
    if (!(d.peak >= 0.0)) sink.add(p + ".peak", "peak demand must be non-negative");
    if (!(d.shed_cost >= 0.0)) sink.add(p + ".shed_cost", "load-shedding cost must be non-negative");
  }

  if (!(s.base_power > 0.0)) sink.add("options.base_power", "base power must be positive");
  if (!(s.delta_tau > 0.0)) sink.add("options.delta_tau", "time step must be positive");
  if (!(s.big_m > 0.0)) sink.add("options.big_m", "big-M constant must be positive");
  const Budgets& b = s.budgets;
  if (!(b.annualization > 0.0 && b.annualization <= 1.0))
    sink.add("budgets.annualization", "annualization factor must lie in (0, 1]");
  if (b.mode == BudgetMode::Total && !b.total)
    sink.add("budgets.total", "total budget mode requires a total budget");
  for (auto [name, value] : {std::pair{"generation", b.generation}, {"transmission", b.transmission},
                             {"storage", b.storage}, {"wind", b.wind}, {"total", b.total}}) {
    if (value && *value < 0.0)
      sink.add(fmt::format("budgets.{}", name), "budget must be non-negative");
  }
  return sink.out;
}

namespace {

// Fills whichever of investment/annualized cost is missing.
template <typename T>
void read_costs(const KeyTable& t, T& item, double factor, std::optional<double> fallback) {
  auto inv = t.optional_number("investment_cost");
  auto ann = t.optional_number("annualized_cost");
  if (!item.candidate) {
    item.investment_cost = inv.value_or(0.0);
    item.annualized_cost = ann.value_or(0.0);
    return;
  }
  if (!inv && !ann) {
    if (!fallback)
      throw SchemaError(fmt::format(
          "{}: candidate needs investment_cost or annualized_cost", t.path()));
    inv = fallback;
  }
  item.investment_cost = inv ? *inv : *ann / factor;
  item.annualized_cost = ann ? *ann : factor * *inv;
}

}  // namespace

SystemData system_from_keytree(const KeyTree& tree) {
  SystemData s;
  tree.root.require_known_keys({"name"});
  s.name = tree.root.string_or("name", "");
  for (const auto& [name, table] : tree.tables)
    if (name != "options" && name != "budgets")
      throw SchemaError(fmt::format("[{}]: unknown section (line {})", name, table.line()));
  for (const auto& [name, list] : tree.arrays)
    if (name != "buses" && name != "generators" && name != "lines" && name != "storages" &&
        name != "wind" && name != "demands")
      throw SchemaError(fmt::format("[[{}]]: unknown section", name));

  if (const KeyTable* opt = tree.table("options")) {
    opt->require_known_keys({"base_power", "delta_tau", "big_m"});
    s.base_power = opt->number_or("base_power", s.base_power);
    s.delta_tau = opt->number_or("delta_tau", s.delta_tau);
    s.big_m = opt->number_or("big_m", s.big_m);
  }
  if (const KeyTable* bud = tree.table("budgets")) {
    bud->require_known_keys({"mode", "annualization", "total", "generation",
                             "transmission", "storage", "wind"});
    const std::string mode = bud->string_or("mode", "total");
    if (mode == "total") s.budgets.mode = BudgetMode::Total;
    else if (mode == "per_category") s.budgets.mode = BudgetMode::PerCategory;
    else throw SchemaError(fmt::format("budgets.mode: unknown mode '{}'", mode));
    s.budgets.annualization = bud->number_or("annualization", s.budgets.annualization);
    s.budgets.total = bud->optional_number("total");
    s.budgets.generation = bud->optional_number("generation");
    s.budgets.transmission = bud->optional_number("transmission");
    s.budgets.storage = bud->optional_number("storage");
    s.budgets.wind = bud->optional_number("wind");
  } else {
    throw SchemaError("budgets: missing section");
  }
  const double factor = s.budgets.annualization;
  if (!(factor > 0.0)) throw SchemaError("budgets.annualization: must be positive");

  for (const auto& t : tree.array("buses")) {
    t.require_known_keys({"id", "reference"});
    s.buses.push_back({t.string("id"), t.boolean_or("reference", false)});
  }
  for (const auto& t : tree.array("generators")) {
    t.require_known_keys({"id", "bus", "capacity", "cost", "candidate",
                          "investment_cost", "annualized_cost"});
    Generator g;
    g.id = t.string("id");
    g.bus = t.string("bus");
    g.capacity = t.number("capacity");
    g.cost = t.number("cost");
    g.candidate = t.boolean_or("candidate", false);
    read_costs(t, g, factor, std::nullopt);
    s.generators.push_back(g);
  }
  for (const auto& t : tree.array("lines")) {
    t.require_known_keys({"id", "from", "to", "reactance", "capacity", "candidate",
                          "investment_cost", "annualized_cost"});
    Line l;
    l.id = t.string("id");
    l.from = t.string("from");
    l.to = t.string("to");
    l.reactance = t.number("reactance");
    l.capacity = t.number("capacity");
    l.candidate = t.boolean_or("candidate", false);
    read_costs(t, l, factor, std::nullopt);
    s.lines.push_back(l);
  }
  for (const auto& t : tree.array("storages")) {
    t.require_known_keys({"id", "bus", "energy_capacity", "power_capacity",
                          "charge_efficiency", "discharge_efficiency", "initial_energy",
                          "candidate", "max_units", "investment_cost", "annualized_cost"});
    Storage st;
    st.id = t.string("id");
    st.bus = t.string("bus");
    st.energy_capacity = t.number("energy_capacity");
    st.power_capacity = t.number("power_capacity");
    st.charge_efficiency = t.number_or("charge_efficiency", 0.9);
    st.discharge_efficiency = t.number_or("discharge_efficiency", 0.9);
    st.initial_energy = t.number_or("initial_energy", 0.0);
    st.candidate = t.boolean_or("candidate", false);
    st.max_units = static_cast<int>(t.integer_or("max_units", 0));
    std::optional<double> fallback;
    if (st.energy_capacity >= 0.0 && st.power_capacity >= 0.0)
      fallback = storage_investment_cost(st.energy_capacity, st.power_capacity);
    read_costs(t, st, factor, fallback);
    s.storages.push_back(st);
  }
  for (const auto& t : tree.array("wind")) {
    t.require_known_keys({"id", "bus", "zone", "capacity", "candidate",
                          "investment_cost", "annualized_cost"});
    WindUnit w;
    w.id = t.string("id");
    w.bus = t.string("bus");
    w.zone = t.string("zone");
    w.capacity = t.number("capacity");
    w.candidate = t.boolean_or("candidate", false);
    read_costs(t, w, factor, std::nullopt);
    s.wind_units.push_back(w);
  }
  for (const auto& t : tree.array("demands")) {
    t.require_known_keys({"id", "bus", "zone", "peak", "shed_cost"});
    Demand d;
    d.id = t.string("id");
    d.bus = t.string("bus");
    d.zone = t.string("zone");
    d.peak = t.number("peak");
    d.shed_cost = t.number("shed_cost");
    s.demands.push_back(d);
  }

  const auto diagnostics = validate(s);
  if (!diagnostics.empty()) {
    std::string message;
    for (const auto& d : diagnostics) {
      if (!message.empty()) message += "; ";
      message += d.path + ": " + d.message;
    }
    throw SchemaError(message);
  }
  return s;
}

SystemData load_system(const std::filesystem::path& path) {
  const KeyTree tree = load_keytree(path);
  try {
    return system_from_keytree(tree);
  } catch (const SchemaError& e) {
    throw SchemaError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

KeyTree system_to_keytree(const SystemData& s) {
  KeyTree tree;
  if (!s.name.empty()) tree.root.set_string("name", s.name);
  KeyTable& opt = tree.table_mut("options");
  opt.set_number("base_power", s.base_power);
  opt.set_number("delta_tau", s.delta_tau);
  opt.set_number("big_m", s.big_m);
  KeyTable& bud = tree.table_mut("budgets");
  bud.set_string("mode", s.budgets.mode == BudgetMode::Total ? "total" : "per_category");
  bud.set_number("annualization", s.budgets.annualization);
  if (s.budgets.total) bud.set_number("total", *s.budgets.total);
  if (s.budgets.generation) bud.set_number("generation", *s.budgets.generation);
  if (s.budgets.transmission) bud.set_number("transmission", *s.budgets.transmission);
  if (s.budgets.storage) bud.set_number("storage", *s.budgets.storage);
  if (s.budgets.wind) bud.set_number("wind", *s.budgets.wind);

  auto costs = [](KeyTable& t, bool candidate, double inv, double ann) {
    t.set_bool("candidate", candidate);
    if (candidate) {
      t.set_number("investment_cost", inv);
      t.set_number("annualized_cost", ann);
    }
  };
  for (const auto& b : s.buses) {
    KeyTable t;
    t.set_string("id", b.id);
    t.set_bool("reference", b.is_reference);
    tree.arrays["buses"].push_back(t);
  }
  for (const auto& g : s.generators) {
    KeyTable t;
    t.set_string("id", g.id);
    t.set_string("bus", g.bus);
    t.set_number("capacity", g.capacity);
    t.set_number("cost", g.cost);
    costs(t, g.candidate, g.investment_cost, g.annualized_cost);
    tree.arrays["generators"].push_back(t);
  }
  for (const auto& l : s.lines) {
    KeyTable t;
    t.set_string("id", l.id);
    t.set_string("from", l.from);
    t.set_string("to", l.to);
    t.set_number("reactance", l.reactance);
    t.set_number("capacity", l.capacity);
    costs(t, l.candidate, l.investment_cost, l.annualized_cost);
    tree.arrays["lines"].push_back(t);
  }
  for (const auto& st : s.storages) {
    KeyTable t;
    t.set_string("id", st.id);
    t.set_string("bus", st.bus);
    t.set_number("energy_capacity", st.energy_capacity);
    t.set_number("power_capacity", st.power_capacity);
    t.set_number("charge_efficiency", st.charge_efficiency);
    t.set_number("discharge_efficiency", st.discharge_efficiency);
    t.set_number("initial_energy", st.initial_energy);
    if (st.candidate) t.set_number("max_units", st.max_units);
    costs(t, st.candidate, st.investment_cost, st.annualized_cost);
    tree.arrays["storages"].push_back(t);
  }
  for (const auto& w : s.wind_units) {
    KeyTable t;
    t.set_string("id", w.id);
    t.set_string("bus", w.bus);
    t.set_string("zone", w.zone);
    t.set_number("capacity", w.capacity);
    costs(t, w.candidate, w.investment_cost, w.annualized_cost);
    tree.arrays["wind"].push_back(t);
  }
  for (const auto& d : s.demands) {
    KeyTable t;
    t.set_string("id", d.id);
    t.set_string("bus", d.bus);
    t.set_string("zone", d.zone);
    t.set_number("peak", d.peak);
    t.set_number("shed_cost", d.shed_cost);
    tree.arrays["demands"].push_back(t);
  }
  return tree;
}

double angle_span_bound(const SystemData& s) {
  const size_t n = s.buses.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, inf);
  for (size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;
  for (const auto& l : s.lines) {
    if (l.candidate) continue;
    const int a = s.bus_index(l.from);
    const int b = s.bus_index(l.to);
    if (a < 0 || b < 0) continue;
    // |theta_a - theta_b| <= flow limit / susceptance, both in pu.
    const double w = l.capacity / s.base_power * l.reactance;
    dist[a * n + b] = std::min(dist[a * n + b], w);
    dist[b * n + a] = std::min(dist[b * n + a], w);
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        dist[i * n + j] = std::min(dist[i * n + j], dist[i * n + k] + dist[k * n + j]);
  double span = 0.0;
  for (double d : dist) span = std::max(span, d);
  return span;
}

double safe_big_m(const SystemData& s) {
  const double span = angle_span_bound(s);
  double bound = 0.0;
  for (const auto& l : s.lines)
    if (l.candidate) bound = std::max(bound, l.susceptance() * span);
  return bound;
}

}  // namespace repday
