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

#include "repday/repday.h"

#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>

#include "repday/clustering.hpp"
#include "repday/error.hpp"
#include "repday/evaluation.hpp"
#include "repday/lp_io.hpp"
#include "repday/milp.hpp"
#include "repday/model.hpp"
#include "repday/system.hpp"
#include "repday/timeseries.hpp"

struct repday_history {
  repday::HourlyRecordSet records;
};

struct repday_repdays {
  repday::RepresentativeDaySet set;
};

struct repday_system {
  repday::SystemData data;
  bool storage_enabled = true;
};

struct ModelBundle {
  repday::SystemData system;
  repday::ExpansionModel model;
};

struct repday_model {
  std::shared_ptr<const ModelBundle> bundle;
};

struct repday_solution {
  std::shared_ptr<const ModelBundle> bundle;
  repday::MilpSolution result;
  std::optional<repday::ModelSolution> detail;
};

struct repday_evaluation {
  repday::GridResult result;
  bool exact_only = false;
};

namespace {

thread_local std::string g_last_error;

repday_status fail(repday_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
repday_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return REPDAY_OK;
  } catch (const repday::ParseError& e) {
    return fail(REPDAY_PARSE_ERROR, e.what());
  } catch (const repday::ParameterError& e) {
    return fail(REPDAY_INVALID_ARGUMENT, e.what());
  } catch (const repday::PreconditionError& e) {
    return fail(REPDAY_PRECONDITION, e.what());
  } catch (const repday::SchemaError& e) {
    return fail(REPDAY_SCHEMA_ERROR, e.what());
  } catch (const repday::BuildError& e) {
    return fail(REPDAY_BUILD_ERROR, e.what());
  } catch (const repday::SolveError& e) {
    return fail(REPDAY_SOLVER_ERROR, e.what());
  } catch (const repday::IoError& e) {
    return fail(REPDAY_IO_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(REPDAY_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(REPDAY_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(REPDAY_INTERNAL_ERROR, "unknown error");
  }
}

#define REPDAY_REQUIRE(cond, what)                              \
  do {                                                          \
    if (!(cond)) return fail(REPDAY_INVALID_ARGUMENT, (what));  \
  } while (0)

repday::ModelOptions model_options(const repday_system* system) {
  repday::ModelOptions options;
  options.storage_enabled = system->storage_enabled;
  return options;
}

repday::SolverConfig solver_config(const repday_solver_options* options) {
  repday::SolverConfig config;
  if (options == nullptr) return config;
  if (options->relative_gap >= 0.0) config.relative_gap = options->relative_gap;
  if (options->time_limit > 0.0) config.time_limit = options->time_limit;
  if (options->node_limit > 0) config.node_limit = options->node_limit;
  return config;
}

void attach_detail(repday_solution* solution) {
  if (!solution->result.has_incumbent) return;
  solution->detail = repday::extract_solution(solution->bundle->model, solution->bundle->system,
                                              solution->result.values);
}

}  // namespace

extern "C" {

const char* repday_version(void) { return "0.1.0"; }

const char* repday_last_error(void) { return g_last_error.c_str(); }

const char* repday_status_string(repday_status status) {
  switch (status) {
    case REPDAY_OK: return "ok";
    case REPDAY_INVALID_ARGUMENT: return "invalid argument";
    case REPDAY_PARSE_ERROR: return "parse error";
    case REPDAY_SCHEMA_ERROR: return "schema error";
    case REPDAY_PRECONDITION: return "precondition violated";
    case REPDAY_BUILD_ERROR: return "model build error";
    case REPDAY_SOLVER_ERROR: return "solver error";
    case REPDAY_IO_ERROR: return "i/o error";
    case REPDAY_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

// History ------------------------------------------------------------------

repday_status repday_history_load_csv(const char* path, int wind_per_unit,
                                      repday_history** out) {
  REPDAY_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    repday::CsvSchema schema;
    if (wind_per_unit) schema.wind_units = repday::WindUnits::PerUnit;
    auto handle = std::make_unique<repday_history>();
    handle->records = repday::load_hourly_csv(path, schema);
    *out = handle.release();
  });
}

repday_status repday_history_synthesize(int year, int n_days, int first_day_of_year,
                                        uint64_t seed, const char* const* load_zones,
                                        const double* load_peaks, size_t n_load,
                                        const char* const* wind_zones,
                                        const double* wind_capacity, size_t n_wind,
                                        repday_history** out) {
  REPDAY_REQUIRE(out != nullptr, "null argument");
  REPDAY_REQUIRE(n_load == 0 || (load_zones != nullptr && load_peaks != nullptr),
                 "null load zone arrays");
  REPDAY_REQUIRE(n_wind == 0 || (wind_zones != nullptr && wind_capacity != nullptr),
                 "null wind zone arrays");
  *out = nullptr;
  return guarded([&] {
    repday::SyntheticHistorySpec spec;
    spec.year = year;
    spec.n_days = n_days;
    spec.first_day_of_year = first_day_of_year;
    spec.seed = seed;
    spec.load_zones.assign(load_zones, load_zones + n_load);
    spec.load_peaks.assign(load_peaks, load_peaks + n_load);
    spec.wind_zones.assign(wind_zones, wind_zones + n_wind);
    spec.wind_capacity.assign(wind_capacity, wind_capacity + n_wind);
    auto handle = std::make_unique<repday_history>();
    handle->records = repday::synthesize_history(spec);
    *out = handle.release();
  });
}

repday_status repday_history_write_csv(const repday_history* history, const char* path) {
  REPDAY_REQUIRE(history != nullptr && path != nullptr, "null argument");
  return guarded([&] { repday::write_hourly_csv(path, history->records); });
}

size_t repday_history_days(const repday_history* history) {
  return history ? history->records.n_days() : 0;
}

int repday_history_dropped_days(const repday_history* history) {
  return history ? history->records.dropped_partial_days : 0;
}

void repday_history_free(repday_history* history) { delete history; }

// Clustering ---------------------------------------------------------------

repday_status repday_cluster(const repday_history* history, repday_method method, int k,
                             int k1, int k2, uint64_t seed, repday_repdays** out) {
  REPDAY_REQUIRE(history != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    repday::ClusterSpec spec;
    spec.seed = seed;
    if (method == REPDAY_MKM) {
      spec.method = repday::ClusterMethod::Mkm;
      spec.k1 = k1;
      spec.k2 = k2;
      spec.k = k1 * k2;
    } else {
      spec.method = repday::ClusterMethod::Tkm;
      spec.k = k;
    }
    auto handle = std::make_unique<repday_repdays>();
    handle->set = repday::cluster_history(history->records, spec);
    *out = handle.release();
  });
}

repday_status repday_repdays_load(const char* path, repday_repdays** out) {
  REPDAY_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<repday_repdays>();
    handle->set = repday::load_representative_days(path);
    *out = handle.release();
  });
}

repday_status repday_repdays_write(const repday_repdays* days, const char* path) {
  REPDAY_REQUIRE(days != nullptr && path != nullptr, "null argument");
  return guarded([&] { repday::write_representative_days(path, days->set); });
}

size_t repday_repdays_count(const repday_repdays* days) {
  return days ? days->set.days.size() : 0;
}

int repday_repdays_weight(const repday_repdays* days, size_t index) {
  if (days == nullptr || index >= days->set.days.size()) return 0;
  return days->set.days[index].weight;
}

void repday_repdays_free(repday_repdays* days) { delete days; }

// System -------------------------------------------------------------------

repday_status repday_system_load(const char* path, repday_system** out) {
  REPDAY_REQUIRE(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<repday_system>();
    handle->data = repday::load_system(path);
    *out = handle.release();
  });
}

repday_status repday_system_set_budget_mode(repday_system* system, int total) {
  REPDAY_REQUIRE(system != nullptr, "null argument");
  auto& budgets = system->data.budgets;
  if (total && !budgets.total)
    return fail(REPDAY_PRECONDITION, "system file defines no total budget");
  budgets.mode = total ? repday::BudgetMode::Total : repday::BudgetMode::PerCategory;
  g_last_error.clear();
  return REPDAY_OK;
}

repday_status repday_system_set_storage(repday_system* system, int enabled) {
  REPDAY_REQUIRE(system != nullptr, "null argument");
  system->storage_enabled = enabled != 0;
  g_last_error.clear();
  return REPDAY_OK;
}

size_t repday_system_buses(const repday_system* system) {
  return system ? system->data.buses.size() : 0;
}

double repday_storage_investment_cost(double energy_mwh, double power_mw) {
  return repday::storage_investment_cost(energy_mwh, power_mw);
}

void repday_system_free(repday_system* system) { delete system; }

// Models -------------------------------------------------------------------

repday_status repday_model_build_representative(const repday_system* system,
                                                const repday_repdays* days,
                                                repday_model** out) {
  REPDAY_REQUIRE(system != nullptr && days != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto bundle = std::make_shared<ModelBundle>();
    bundle->system = system->data;
    bundle->model =
        repday::build_representative_model(system->data, days->set, model_options(system));
    *out = new repday_model{std::move(bundle)};
  });
}

repday_status repday_model_build_chronological(const repday_system* system,
                                               const repday_history* history,
                                               repday_model** out) {
  REPDAY_REQUIRE(system != nullptr && history != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto bundle = std::make_shared<ModelBundle>();
    bundle->system = system->data;
    bundle->model =
        repday::build_chronological_model(system->data, history->records, model_options(system));
    *out = new repday_model{std::move(bundle)};
  });
}

size_t repday_model_variables(const repday_model* model) {
  return model ? model->bundle->model.problem.num_variables() : 0;
}

size_t repday_model_rows(const repday_model* model) {
  return model ? model->bundle->model.problem.num_rows() : 0;
}

size_t repday_model_warning_count(const repday_model* model) {
  return model ? model->bundle->model.warnings.size() : 0;
}

const char* repday_model_warning(const repday_model* model, size_t index) {
  if (model == nullptr || index >= model->bundle->model.warnings.size()) return "";
  return model->bundle->model.warnings[index].c_str();
}

repday_status repday_model_export(const repday_model* model, const char* path) {
  REPDAY_REQUIRE(model != nullptr && path != nullptr, "null argument");
  return guarded([&] { repday::export_problem(model->bundle->model.problem, path); });
}

void repday_model_free(repday_model* model) { delete model; }

// Solving ------------------------------------------------------------------

void repday_solver_options_default(repday_solver_options* options) {
  if (options == nullptr) return;
  const repday::SolverConfig defaults;
  options->relative_gap = defaults.relative_gap;
  options->time_limit = defaults.time_limit;
  options->node_limit = defaults.node_limit;
}

repday_status repday_solve(const repday_model* model, const repday_solver_options* options,
                           repday_solution** out) {
  REPDAY_REQUIRE(model != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<repday_solution>();
    handle->bundle = model->bundle;
    handle->result = repday::solve_milp(model->bundle->model.problem, solver_config(options));
    attach_detail(handle.get());
    *out = handle.release();
  });
}

repday_status repday_solution_import(const repday_model* model, const char* path,
                                     repday_solution** out) {
  REPDAY_REQUIRE(model != nullptr && path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<repday_solution>();
    handle->bundle = model->bundle;
    handle->result = repday::import_solution(model->bundle->model.problem, path);
    attach_detail(handle.get());
    *out = handle.release();
  });
}

const char* repday_solution_status(const repday_solution* solution) {
  return solution ? repday::status_name(solution->result.status) : "";
}

int repday_solution_has_point(const repday_solution* solution) {
  return solution && solution->result.has_incumbent ? 1 : 0;
}

double repday_solution_objective(const repday_solution* solution) {
  return solution ? solution->result.objective : 0.0;
}

double repday_solution_gap(const repday_solution* solution) {
  return solution ? solution->result.relative_gap : 0.0;
}

double repday_solution_shed_fraction(const repday_solution* solution) {
  return solution && solution->detail ? solution->detail->costs.shed_fraction() : 0.0;
}

int64_t repday_solution_nodes(const repday_solution* solution) {
  return solution ? solution->result.nodes : 0;
}

repday_status repday_solution_write_values(const repday_solution* solution, const char* path) {
  REPDAY_REQUIRE(solution != nullptr && path != nullptr, "null argument");
  if (!solution->result.has_incumbent)
    return fail(REPDAY_PRECONDITION, "solution has no feasible point");
  return guarded([&] {
    repday::write_solution(solution->bundle->model.problem, solution->result.values, path);
  });
}

repday_status repday_solution_write_reports(const repday_solution* solution, const char* dir) {
  REPDAY_REQUIRE(solution != nullptr && dir != nullptr, "null argument");
  if (!solution->detail) return fail(REPDAY_PRECONDITION, "solution has no feasible point");
  return guarded([&] { repday::write_model_solution(dir, *solution->detail); });
}

void repday_solution_free(repday_solution* solution) { delete solution; }

// Evaluation ---------------------------------------------------------------

void repday_grid_options_default(repday_grid_options* options) {
  if (options == nullptr) return;
  const repday::GridConfig defaults;
  options->k_values = nullptr;
  options->n_k = 0;
  options->use_tkm = 1;
  options->use_mkm = 1;
  options->n_seeds = defaults.n_seeds;
  options->seed = defaults.seed;
  options->preferred_k2 = defaults.preferred_k2;
  options->jobs = defaults.jobs;
  options->exact_only = 0;
}

repday_status repday_evaluate(const repday_system* system, const repday_history* history,
                              const repday_grid_options* grid,
                              const repday_solver_options* solver,
                              repday_evaluation** out) {
  REPDAY_REQUIRE(system != nullptr && history != nullptr && grid != nullptr && out != nullptr,
                 "null argument");
  REPDAY_REQUIRE(grid->n_k == 0 || grid->k_values != nullptr, "null K list");
  *out = nullptr;
  return guarded([&] {
    repday::GridConfig config;
    if (grid->n_k > 0) config.k_values.assign(grid->k_values, grid->k_values + grid->n_k);
    config.methods.clear();
    if (grid->use_tkm) config.methods.push_back(repday::ClusterMethod::Tkm);
    if (grid->use_mkm) config.methods.push_back(repday::ClusterMethod::Mkm);
    config.n_seeds = grid->n_seeds;
    config.seed = grid->seed;
    config.preferred_k2 = grid->preferred_k2;
    config.jobs = grid->jobs;
    config.exact_only = grid->exact_only != 0;
    repday::PipelineConfig pipeline;
    pipeline.solver = solver_config(solver);
    pipeline.model = model_options(system);
    auto handle = std::make_unique<repday_evaluation>();
    handle->result = repday::run_grid(system->data, history->records, config, pipeline);
    handle->exact_only = config.exact_only;
    *out = handle.release();
  });
}

double repday_evaluation_exact_cost(const repday_evaluation* evaluation) {
  return evaluation ? evaluation->result.exact.total_cost : 0.0;
}

size_t repday_evaluation_rows(const repday_evaluation* evaluation) {
  return evaluation ? evaluation->result.rows.size() : 0;
}

double repday_evaluation_row_error(const repday_evaluation* evaluation, size_t row) {
  if (evaluation == nullptr || row >= evaluation->result.rows.size()) return 0.0;
  const auto& r = evaluation->result.rows[row];
  return r.failure.empty() ? r.error_percent : std::numeric_limits<double>::quiet_NaN();
}

uint64_t repday_evaluation_row_seed(const repday_evaluation* evaluation, size_t row) {
  if (evaluation == nullptr || row >= evaluation->result.rows.size()) return 0;
  return evaluation->result.rows[row].seed;
}

repday_status repday_evaluation_report(const repday_evaluation* evaluation, const char* dir,
                                       repday_timing timing) {
  REPDAY_REQUIRE(evaluation != nullptr && dir != nullptr, "null argument");
  return guarded([&] {
    if (evaluation->exact_only) {
      repday::write_exact_csv(evaluation->result.exact, dir);
      return;
    }
    repday::report(evaluation->result.rows, evaluation->result.exact, dir,
                   timing == REPDAY_TIMING_WALL ? repday::TimingMode::Wall
                                                : repday::TimingMode::Work);
  });
}

void repday_evaluation_free(repday_evaluation* evaluation) { delete evaluation; }

}  // extern "C"
