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

#include "repday/model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "file_util.hpp"
#include "repday/error.hpp"

namespace repday {

namespace {

int zone_position(const std::vector<std::string>& zones, const std::string& zone) {
  auto it = std::find(zones.begin(), zones.end(), zone);
  return it == zones.end() ? -1 : static_cast<int>(it - zones.begin());
}

std::string tag(int day, int hour) { return fmt::format("d{}_h{}", day + 1, hour + 1); }

class Builder {
 public:
  Builder(const SystemData& system, const RepresentativeDaySet& days, const ModelOptions& options,
          bool chronological)
      : s_(system), days_(days), opt_(options) {
    if (days.days.empty()) throw ParameterError("no days to model");
    const auto diagnostics = validate(system);
    if (!diagnostics.empty())
      throw BuildError("system is invalid: " + diagnostics.front().path + ": " +
                       diagnostics.front().message);
    m_.chronological = chronological;
    m_.n_days = static_cast<int>(days.days.size());
    m_.base_power = system.base_power;
    m_.delta_tau = system.delta_tau;
    m_.storage_enabled = options.storage_enabled;
    m_.problem.name = chronological ? "gtep_chronological" : "gtep_representative";
    for (const RepresentativeDay& d : days.days)
      m_.weights.push_back(chronological ? 1 : d.weight);

    for (const Demand& d : system.demands) {
      const int z = zone_position(days.load_zones, d.zone);
      if (z < 0)
        throw BuildError("load zone '" + d.zone + "' of demand " + d.id +
                         " is missing from the day profiles");
      demand_zone_.push_back(z);
    }
    for (const WindUnit& w : system.wind_units) {
      const int z = zone_position(days.wind_zones, w.zone);
      if (z < 0)
        throw BuildError("wind zone '" + w.zone + "' of wind unit " + w.id +
                         " is missing from the day profiles");
      wind_zone_.push_back(z);
    }
    if (options.substituted_lines &&
        options.substituted_lines->size() != system.candidate_lines().size())
      throw ParameterError("substituted line decisions do not match the candidate lines");
    for (size_t k = 0; k < system.storages.size(); ++k)
      if (options.storage_enabled) storages_.push_back(static_cast<int>(k));
  }

  ExpansionModel build() {
    add_investments();
    for (int d = 0; d < m_.n_days; ++d)
      for (int h = 0; h < kHoursPerDay; ++h) add_hour(d, h);
    if (!m_.chronological) add_end_of_day();
    check_shed_coverage();
    if (s_.big_m < safe_big_m(s_) && !s_.candidate_lines().empty() && !opt_.substituted_lines)
      m_.warnings.push_back(fmt::format(
          "big-M constant {} is below the safe bound {} implied by existing line limits",
          s_.big_m, safe_big_m(s_)));
    return std::move(m_);
  }

 private:
  MilpProblem& p() { return m_.problem; }
  double base() const { return s_.base_power; }

  void add_investments() {
    const Budgets& b = s_.budgets;
    std::vector<Term> gen_budget, line_budget, storage_budget, wind_budget;
    m_.generator_capacity.assign(s_.generators.size(), -1);
    for (size_t k = 0; k < s_.generators.size(); ++k) {
      const Generator& g = s_.generators[k];
      if (!g.candidate) continue;
      const int v = p().add_variable("gcap_" + g.id, 0.0, g.capacity, VarType::Continuous,
                                     g.annualized_cost);
      m_.generator_capacity[k] = v;
      gen_budget.push_back({v, g.investment_cost});
    }
    m_.line_build.assign(s_.lines.size(), -1);
    int cand = 0;
    for (size_t k = 0; k < s_.lines.size(); ++k) {
      const Line& l = s_.lines[k];
      if (!l.candidate) continue;
      double lo = 0.0, up = 1.0;
      if (opt_.substituted_lines) lo = up = (*opt_.substituted_lines)[cand] ? 1.0 : 0.0;
      ++cand;
      const int v = p().add_variable("x_" + l.id, lo, up, VarType::Binary, l.annualized_cost);
      m_.line_build[k] = v;
      line_budget.push_back({v, l.investment_cost});
    }
    m_.storage_units.assign(s_.storages.size(), -1);
    for (int k : storages_) {
      const Storage& st = s_.storages[k];
      if (!st.candidate) continue;
      const int v = p().add_variable("m_" + st.id, 0.0, st.max_units, VarType::Integer,
                                     st.annualized_cost);
      m_.storage_units[k] = v;
      storage_budget.push_back({v, st.investment_cost});
    }
    m_.wind_capacity.assign(s_.wind_units.size(), -1);
    for (size_t k = 0; k < s_.wind_units.size(); ++k) {
      const WindUnit& w = s_.wind_units[k];
      if (!w.candidate) continue;
      const int v = p().add_variable("wcap_" + w.id, 0.0, w.capacity, VarType::Continuous,
                                     w.annualized_cost);
      m_.wind_capacity[k] = v;
      wind_budget.push_back({v, w.investment_cost});
    }
    auto budget_row = [&](const char* name, std::vector<Term> terms, double limit) {
      if (!terms.empty()) p().add_row(name, std::move(terms), RowSense::LessEqual, limit);
    };
    if (b.mode == BudgetMode::PerCategory) {
      if (b.generation) budget_row("budget_generation", gen_budget, *b.generation);
      if (b.transmission) budget_row("budget_transmission", line_budget, *b.transmission);
      if (b.storage) budget_row("budget_storage", storage_budget, *b.storage);
      if (b.wind) budget_row("budget_wind", wind_budget, *b.wind);
    } else if (b.total) {
      std::vector<Term> all;
      for (auto* part : {&gen_budget, &line_budget, &storage_budget, &wind_budget})
        all.insert(all.end(), part->begin(), part->end());
      budget_row("budget_total", all, *b.total);
    }
  }

  void add_hour(int d, int h) {
    const RepresentativeDay& day = days_.days[d];
    const double sigma = m_.weights[d];
    const double dt = s_.delta_tau;
    const std::string t = tag(d, h);
    HourBlock blk;

    for (size_t k = 0; k < s_.generators.size(); ++k) {
      const Generator& g = s_.generators[k];
      const double up = g.candidate ? kInfinity : g.capacity / base();
      const int v = p().add_variable("pG_" + g.id + "_" + t, 0.0, up, VarType::Continuous,
                                     sigma * dt * g.cost * base());
      blk.generation.push_back(v);
      if (g.candidate)
        p().add_row("gmax_" + g.id + "_" + t,
                    {{v, 1.0}, {m_.generator_capacity[k], -1.0 / base()}}, RowSense::LessEqual, 0.0);
    }
    for (size_t k = 0; k < s_.demands.size(); ++k) {
      const Demand& dm = s_.demands[k];
      const double mw = day.beta[demand_zone_[k]][h] * dm.peak;
      m_.demand_mw.push_back(mw);
      blk.shed.push_back(p().add_variable("pLS_" + dm.id + "_" + t, 0.0, mw / base(),
                                          VarType::Continuous, sigma * dt * dm.shed_cost * base()));
    }
    for (const Bus& bus : s_.buses) {
      const bool ref = bus.is_reference;
      blk.angle.push_back(p().add_variable("theta_" + bus.id + "_" + t, ref ? 0.0 : -kInfinity,
                                           ref ? 0.0 : kInfinity));
    }
    int cand = 0;
    for (size_t k = 0; k < s_.lines.size(); ++k) {
      const Line& l = s_.lines[k];
      const double cap = l.capacity / base();
      const int a = blk.angle[s_.bus_index(l.from)];
      const int b = blk.angle[s_.bus_index(l.to)];
      const double bsus = l.susceptance();
      if (!l.candidate) {
        const int v = p().add_variable("pL_" + l.id + "_" + t, -cap, cap);
        blk.flow.push_back(v);
        p().add_row("dc_" + l.id + "_" + t, {{v, 1.0}, {a, -bsus}, {b, bsus}}, RowSense::Equal, 0.0);
        continue;
      }
      const int x = m_.line_build[k];
      if (opt_.substituted_lines) {
        const bool built = (*opt_.substituted_lines)[cand++] != 0;
        const int v = p().add_variable("pL_" + l.id + "_" + t, built ? -cap : 0.0, built ? cap : 0.0);
        blk.flow.push_back(v);
        if (built)
          p().add_row("dc_" + l.id + "_" + t, {{v, 1.0}, {a, -bsus}, {b, bsus}}, RowSense::Equal, 0.0);
        continue;
      }
      const int v = p().add_variable("pL_" + l.id + "_" + t, -kInfinity, kInfinity);
      blk.flow.push_back(v);
      const double f = s_.big_m;
      p().add_row("dcmax_" + l.id + "_" + t, {{v, 1.0}, {a, -bsus}, {b, bsus}, {x, f}},
                  RowSense::LessEqual, f);
      p().add_row("dcmin_" + l.id + "_" + t, {{v, 1.0}, {a, -bsus}, {b, bsus}, {x, -f}},
                  RowSense::GreaterEqual, -f);
      p().add_row("fmax_" + l.id + "_" + t, {{v, 1.0}, {x, -cap}}, RowSense::LessEqual, 0.0);
      p().add_row("fmin_" + l.id + "_" + t, {{v, 1.0}, {x, cap}}, RowSense::GreaterEqual, 0.0);
    }
    blk.charge.assign(s_.storages.size(), -1);
    blk.discharge.assign(s_.storages.size(), -1);
    blk.energy.assign(s_.storages.size(), -1);
    for (int k : storages_) {
      const Storage& st = s_.storages[k];
      const double pmax = st.power_capacity / base();
      const double emax = st.energy_capacity / base();
      const int m = m_.storage_units[k];
      const int c = p().add_variable("pSC_" + st.id + "_" + t, 0.0, st.candidate ? kInfinity : pmax);
      const int dis = p().add_variable("pSD_" + st.id + "_" + t, 0.0, st.candidate ? kInfinity : pmax);
      const int e = p().add_variable("e_" + st.id + "_" + t, 0.0, st.candidate ? kInfinity : emax);
      blk.charge[k] = c;
      blk.discharge[k] = dis;
      blk.energy[k] = e;
      if (st.candidate) {
        p().add_row("scmax_" + st.id + "_" + t, {{c, 1.0}, {m, -pmax}}, RowSense::LessEqual, 0.0);
        p().add_row("sdmax_" + st.id + "_" + t, {{dis, 1.0}, {m, -pmax}}, RowSense::LessEqual, 0.0);
        p().add_row("emax_" + st.id + "_" + t, {{e, 1.0}, {m, -emax}}, RowSense::LessEqual, 0.0);
      }
      std::vector<Term> terms{{e, 1.0},
                              {c, -st.charge_efficiency * dt},
                              {dis, dt / st.discharge_efficiency}};
      double rhs = 0.0;
      if (h > 0) {
        terms.push_back({m_.hours[d * kHoursPerDay + h - 1].energy[k], -1.0});
      } else if (m_.chronological && d > 0) {
        terms.push_back({m_.hours[(d - 1) * kHoursPerDay + kHoursPerDay - 1].energy[k], -1.0});
      } else if (st.candidate) {
        terms.push_back({m, -st.initial_energy / base()});
      } else {
        rhs = st.initial_energy / base();
      }
      p().add_row("soc_" + st.id + "_" + t, std::move(terms), RowSense::Equal, rhs);
    }
    for (size_t k = 0; k < s_.wind_units.size(); ++k) {
      const WindUnit& w = s_.wind_units[k];
      const double alpha = day.alpha[wind_zone_[k]][h];
      const double up = w.candidate ? kInfinity : alpha * w.capacity / base();
      const int v = p().add_variable("pW_" + w.id + "_" + t, 0.0, up);
      blk.wind.push_back(v);
      if (w.candidate)
        p().add_row("wmax_" + w.id + "_" + t,
                    {{v, 1.0}, {m_.wind_capacity[k], -alpha / base()}}, RowSense::LessEqual, 0.0);
    }

    for (size_t n = 0; n < s_.buses.size(); ++n) {
      std::vector<Term> terms;
      for (int g : s_.generators_at(static_cast<int>(n))) terms.push_back({blk.generation[g], 1.0});
      for (int w : s_.wind_at(static_cast<int>(n))) terms.push_back({blk.wind[w], 1.0});
      double load = 0.0;
      for (int dm : s_.demands_at(static_cast<int>(n))) {
        terms.push_back({blk.shed[dm], 1.0});
        load += m_.demand_mw[(static_cast<size_t>(d) * kHoursPerDay + h) * s_.demands.size() + dm];
      }
      for (int st : s_.storages_at(static_cast<int>(n))) {
        if (blk.charge[st] < 0) continue;
        terms.push_back({blk.discharge[st], 1.0});
        terms.push_back({blk.charge[st], -1.0});
      }
      for (size_t k = 0; k < s_.lines.size(); ++k) {
        const Line& l = s_.lines[k];
        if (s_.bus_index(l.from) == static_cast<int>(n)) terms.push_back({blk.flow[k], -1.0});
        if (s_.bus_index(l.to) == static_cast<int>(n)) terms.push_back({blk.flow[k], 1.0});
      }
      blk.balance_rows.push_back(p().add_row("bal_" + s_.buses[n].id + "_" + t, std::move(terms),
                                             RowSense::Equal, load / base()));
    }
    m_.hours.push_back(std::move(blk));
  }

  void add_end_of_day() {
    for (int d = 0; d < m_.n_days; ++d) {
      const HourBlock& last = m_.hours[d * kHoursPerDay + kHoursPerDay - 1];
      for (int k : storages_) {
        const Storage& st = s_.storages[k];
        const std::string name = "eod_" + st.id + "_d" + std::to_string(d + 1);
        if (st.candidate)
          p().add_row(name, {{last.energy[k], 1.0}, {m_.storage_units[k], -st.initial_energy / base()}},
                      RowSense::GreaterEqual, 0.0);
        else
          p().add_row(name, {{last.energy[k], 1.0}}, RowSense::GreaterEqual,
                      st.initial_energy / base());
      }
    }
  }

  // Every bus with demand must be able to shed it, which keeps any instance
  // with consistent data feasible.
  void check_shed_coverage() const {
    for (const HourBlock& blk : m_.hours)
      for (size_t n = 0; n < s_.buses.size(); ++n) {
        const Row& row = m_.problem.row(blk.balance_rows[n]);
        if (row.rhs <= 0.0) continue;
        const bool has_shed = std::any_of(row.terms.begin(), row.terms.end(), [&](const Term& t) {
          return std::find(blk.shed.begin(), blk.shed.end(), t.var) != blk.shed.end();
        });
        if (!has_shed) throw BuildError("balance row " + row.name + " has load but no shed variable");
      }
  }

  const SystemData& s_;
  const RepresentativeDaySet& days_;
  const ModelOptions& opt_;
  ExpansionModel m_;
  std::vector<int> demand_zone_;
  std::vector<int> wind_zone_;
  std::vector<int> storages_;
};

}  // namespace

ExpansionModel build_representative_model(const SystemData& system,
                                          const RepresentativeDaySet& days,
                                          const ModelOptions& options) {
  return Builder(system, days, options, false).build();
}

ExpansionModel build_chronological_model(const SystemData& system,
                                         const RepresentativeDaySet& days_in_order,
                                         const ModelOptions& options) {
  return Builder(system, days_in_order, options, true).build();
}

ExpansionModel build_chronological_model(const SystemData& system,
                                         const HourlyRecordSet& history,
                                         const ModelOptions& options) {
  if (history.n_days() < 1) throw ParameterError("history has no complete day");
  return build_chronological_model(system, history_days(history), options);
}

ExpansionPlan empty_plan(const SystemData& system) {
  ExpansionPlan plan;
  for (int g : system.candidate_generators()) {
    plan.generator_ids.push_back(system.generators[g].id);
    plan.generator_mw.push_back(0.0);
  }
  for (int l : system.candidate_lines()) {
    plan.line_ids.push_back(system.lines[l].id);
    plan.line_built.push_back(0);
  }
  for (int s : system.candidate_storages()) {
    plan.storage_ids.push_back(system.storages[s].id);
    plan.storage_units.push_back(0);
  }
  for (int w : system.candidate_wind()) {
    plan.wind_ids.push_back(system.wind_units[w].id);
    plan.wind_mw.push_back(0.0);
  }
  return plan;
}

namespace {

template <typename Value>
void pin(MilpProblem& p, const std::vector<std::string>& ids, const std::vector<Value>& values,
         const std::vector<int>& vars, const auto& entities, const char* kind) {
  if (ids.size() != values.size()) throw ParameterError(std::string("malformed ") + kind + " plan");
  for (size_t i = 0; i < ids.size(); ++i) {
    int var = -1;
    for (size_t k = 0; k < entities.size(); ++k)
      if (entities[k].id == ids[i]) var = vars[k];
    if (var < 0) {
      // Storage removed from the model may only be pinned to zero.
      bool known = false;
      for (const auto& e : entities) known = known || (e.id == ids[i] && e.candidate);
      if (known && static_cast<double>(values[i]) == 0.0) continue;
      throw ParameterError(std::string("plan names unknown candidate ") + kind + " '" + ids[i] + "'");
    }
    Variable& v = p.variable(var);
    const double x = static_cast<double>(values[i]);
    const double tol = 1e-9 * std::max(1.0, std::abs(x));
    if (x < v.lower - tol || x > v.upper + tol)
      throw ParameterError(fmt::format("plan value {} for {} '{}' is outside [{}, {}]", x, kind,
                                       ids[i], v.lower, v.upper));
    v.lower = v.upper = std::clamp(x, v.lower, v.upper);
  }
}

}  // namespace

MilpProblem fix_investments(const ExpansionModel& model, const SystemData& system,
                            const ExpansionPlan& plan) {
  MilpProblem p = model.problem;
  pin(p, plan.generator_ids, plan.generator_mw, model.generator_capacity, system.generators,
      "generator");
  pin(p, plan.line_ids, plan.line_built, model.line_build, system.lines, "line");
  pin(p, plan.storage_ids, plan.storage_units, model.storage_units, system.storages, "storage");
  pin(p, plan.wind_ids, plan.wind_mw, model.wind_capacity, system.wind_units, "wind unit");
  if (p.free_integer_count() != 0)
    throw ParameterError("plan does not cover every integer investment variable");
  p.name += "_fixed";
  return p;
}

ExpansionPlan plan_from_values(const ExpansionModel& model, const SystemData& system,
                               std::span<const double> values) {
  ExpansionPlan plan;
  for (size_t k = 0; k < system.generators.size(); ++k)
    if (system.generators[k].candidate) {
      plan.generator_ids.push_back(system.generators[k].id);
      const int v = model.generator_capacity[k];
      plan.generator_mw.push_back(v < 0 ? 0.0 : values[v]);
    }
  for (size_t k = 0; k < system.lines.size(); ++k)
    if (system.lines[k].candidate) {
      plan.line_ids.push_back(system.lines[k].id);
      const int v = model.line_build[k];
      plan.line_built.push_back(v < 0 ? 0 : static_cast<int>(std::lround(values[v])));
    }
  for (size_t k = 0; k < system.storages.size(); ++k)
    if (system.storages[k].candidate) {
      plan.storage_ids.push_back(system.storages[k].id);
      const int v = model.storage_units[k];
      plan.storage_units.push_back(v < 0 ? 0 : static_cast<int>(std::lround(values[v])));
    }
  for (size_t k = 0; k < system.wind_units.size(); ++k)
    if (system.wind_units[k].candidate) {
      plan.wind_ids.push_back(system.wind_units[k].id);
      const int v = model.wind_capacity[k];
      plan.wind_mw.push_back(v < 0 ? 0.0 : values[v]);
    }
  return plan;
}

ModelSolution extract_solution(const ExpansionModel& model, const SystemData& system,
                               std::span<const double> values) {
  const MilpProblem& p = model.problem;
  if (values.size() != p.num_variables())
    throw ParameterError("solution size does not match the model");
  const auto violations = find_violations(p, values, true);
  if (!violations.empty()) {
    std::string msg = "solution violates the model:";
    for (size_t k = 0; k < std::min<size_t>(3, violations.size()); ++k)
      msg += fmt::format(" '{}' by {:.6g};", violations[k].name, violations[k].amount);
    msg.pop_back();
    throw SolveError(msg);
  }

  ModelSolution out;
  out.plan = plan_from_values(model, system, values);
  CostBreakdown& c = out.costs;
  const double base = model.base_power;
  const double dt = model.delta_tau;
  for (int d = 0; d < model.n_days; ++d) {
    const double sigma = model.weights[d];
    for (int h = 0; h < kHoursPerDay; ++h) {
      const HourBlock& blk = model.block(d, h);
      for (size_t g = 0; g < system.generators.size(); ++g)
        c.generation += sigma * dt * system.generators[g].cost * base * values[blk.generation[g]];
      for (size_t k = 0; k < system.demands.size(); ++k) {
        const double shed = values[blk.shed[k]] * base;
        c.load_shedding += sigma * dt * system.demands[k].shed_cost * shed;
        c.shed_mwh += sigma * dt * shed;
        c.demand_mwh +=
            sigma * dt * model.demand_mw[(static_cast<size_t>(d) * kHoursPerDay + h) * system.demands.size() + k];
      }
    }
  }
  c.operation = c.generation + c.load_shedding;
  auto invest = [&](const std::vector<int>& vars) {
    double sum = 0.0;
    for (int v : vars)
      if (v >= 0) sum += p.variable(v).objective * values[v];
    return sum;
  };
  c.investment_generation = invest(model.generator_capacity);
  c.investment_transmission = invest(model.line_build);
  c.investment_storage = invest(model.storage_units);
  c.investment_wind = invest(model.wind_capacity);
  c.investment = c.investment_generation + c.investment_transmission + c.investment_storage +
                 c.investment_wind;
  c.total = c.operation + c.investment;

  OperationSchedule& sch = out.schedule;
  sch.n_days = model.n_days;
  auto table = [&](const char* quantity, auto member, const auto& entities, double scale) {
    OperationSchedule::Table t;
    t.quantity = quantity;
    std::vector<size_t> keep;
    for (size_t k = 0; k < entities.size(); ++k)
      if ((model.hours.front().*member)[k] >= 0) {
        keep.push_back(k);
        t.entities.push_back(entities[k].id);
      }
    if (keep.empty()) return;
    for (const HourBlock& blk : model.hours)
      for (size_t k : keep) t.values.push_back(values[(blk.*member)[k]] * scale);
    sch.tables.push_back(std::move(t));
  };
  table("generation_mw", &HourBlock::generation, system.generators, base);
  table("shed_mw", &HourBlock::shed, system.demands, base);
  table("flow_mw", &HourBlock::flow, system.lines, base);
  table("angle_rad", &HourBlock::angle, system.buses, 1.0);
  table("charge_mw", &HourBlock::charge, system.storages, base);
  table("discharge_mw", &HourBlock::discharge, system.storages, base);
  table("energy_mwh", &HourBlock::energy, system.storages, base);
  table("wind_mw", &HourBlock::wind, system.wind_units, base);
  return out;
}

namespace {

std::string num(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.10g}", v);
}

}  // namespace

std::string format_plan_csv(const ExpansionPlan& plan) {
  std::string out = "category,id,value\n";
  for (size_t k = 0; k < plan.generator_ids.size(); ++k)
    out += "generator_mw," + plan.generator_ids[k] + "," + num(plan.generator_mw[k]) + "\n";
  for (size_t k = 0; k < plan.line_ids.size(); ++k)
    out += "line_built," + plan.line_ids[k] + "," + std::to_string(plan.line_built[k]) + "\n";
  for (size_t k = 0; k < plan.storage_ids.size(); ++k)
    out += "storage_units," + plan.storage_ids[k] + "," + std::to_string(plan.storage_units[k]) + "\n";
  for (size_t k = 0; k < plan.wind_ids.size(); ++k)
    out += "wind_mw," + plan.wind_ids[k] + "," + num(plan.wind_mw[k]) + "\n";
  return out;
}

std::string format_costs_csv(const CostBreakdown& c) {
  std::string out = "item,value\n";
  const std::pair<const char*, double> items[] = {
      {"generation_cost", c.generation},
      {"load_shedding_cost", c.load_shedding},
      {"operation_cost", c.operation},
      {"investment_generation", c.investment_generation},
      {"investment_transmission", c.investment_transmission},
      {"investment_storage", c.investment_storage},
      {"investment_wind", c.investment_wind},
      {"investment_cost", c.investment},
      {"total_cost", c.total},
      {"demand_mwh", c.demand_mwh},
      {"shed_mwh", c.shed_mwh},
      {"shed_fraction", c.shed_fraction()}};
  for (const auto& [name, value] : items) out += fmt::format("{},{}\n", name, num(value));
  return out;
}

std::string format_schedule_csv(const OperationSchedule& schedule) {
  std::string out = "day,hour,quantity,entity,value\n";
  for (const auto& t : schedule.tables) {
    const size_t n = t.entities.size();
    for (int d = 0; d < schedule.n_days; ++d)
      for (int h = 0; h < kHoursPerDay; ++h)
        for (size_t k = 0; k < n; ++k)
          out += fmt::format("{},{},{},{},{}\n", d + 1, h + 1, t.quantity, t.entities[k],
                             num(t.values[(static_cast<size_t>(d) * kHoursPerDay + h) * n + k]));
  }
  return out;
}

void write_model_solution(const std::filesystem::path& dir, const ModelSolution& solution) {
  detail::write_text_file(dir / "plan.csv", format_plan_csv(solution.plan));
  detail::write_text_file(dir / "costs.csv", format_costs_csv(solution.costs));
  detail::write_text_file(dir / "schedule.csv", format_schedule_csv(solution.schedule));
}

}  // namespace repday
