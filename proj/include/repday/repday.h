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

/* C interface to the repday library.
 *
 * Every function returns a repday_status. On failure the message of the
 * most recent error on the calling thread is available from
 * repday_last_error(). Objects are opaque handles created by the library and
 * released with the matching *_free function; passing NULL to *_free is a
 * no-op. Returned strings stay valid until the owning handle is freed. */

#ifndef REPDAY_REPDAY_H
#define REPDAY_REPDAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(REPDAY_BUILDING_LIBRARY)
#define REPDAY_API __attribute__((visibility("default")))
#else
#define REPDAY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum repday_status {
  REPDAY_OK = 0,
  REPDAY_INVALID_ARGUMENT = 1, /* bad parameter value or NULL handle */
  REPDAY_PARSE_ERROR = 2,      /* malformed input text */
  REPDAY_SCHEMA_ERROR = 3,     /* system file fails validation */
  REPDAY_PRECONDITION = 4,     /* operation not applicable to this input */
  REPDAY_BUILD_ERROR = 5,      /* model construction failed */
  REPDAY_SOLVER_ERROR = 6,     /* solve failed or point rejected */
  REPDAY_IO_ERROR = 7,
  REPDAY_INTERNAL_ERROR = 8
} repday_status;

typedef enum repday_method { REPDAY_TKM = 0, REPDAY_MKM = 1 } repday_method;
typedef enum repday_model_kind {
  REPDAY_REPRESENTATIVE = 0,
  REPDAY_CHRONOLOGICAL = 1
} repday_model_kind;
typedef enum repday_timing { REPDAY_TIMING_WORK = 0, REPDAY_TIMING_WALL = 1 } repday_timing;

typedef struct repday_history repday_history;
typedef struct repday_repdays repday_repdays;
typedef struct repday_system repday_system;
typedef struct repday_model repday_model;
typedef struct repday_solution repday_solution;
typedef struct repday_evaluation repday_evaluation;

REPDAY_API const char* repday_version(void);
REPDAY_API const char* repday_last_error(void);
REPDAY_API const char* repday_status_string(repday_status status);

/* Hourly history -------------------------------------------------------- */

/* wind_per_unit != 0 reads wind columns as fractions of installed capacity. */
REPDAY_API repday_status repday_history_load_csv(const char* path, int wind_per_unit,
                                                 repday_history** out);
REPDAY_API repday_status repday_history_synthesize(int year, int n_days, int first_day_of_year,
                                                   uint64_t seed, const char* const* load_zones,
                                                   const double* load_peaks, size_t n_load,
                                                   const char* const* wind_zones,
                                                   const double* wind_capacity, size_t n_wind,
                                                   repday_history** out);
REPDAY_API repday_status repday_history_write_csv(const repday_history* history, const char* path);
REPDAY_API size_t repday_history_days(const repday_history* history);
REPDAY_API int repday_history_dropped_days(const repday_history* history);
REPDAY_API void repday_history_free(repday_history* history);

/* Clustering ------------------------------------------------------------ */

/* TKM uses k; MKM uses k1 and k2 (k ignored). */
REPDAY_API repday_status repday_cluster(const repday_history* history, repday_method method,
                                        int k, int k1, int k2, uint64_t seed,
                                        repday_repdays** out);
REPDAY_API repday_status repday_repdays_load(const char* path, repday_repdays** out);
REPDAY_API repday_status repday_repdays_write(const repday_repdays* days, const char* path);
REPDAY_API size_t repday_repdays_count(const repday_repdays* days);
REPDAY_API int repday_repdays_weight(const repday_repdays* days, size_t index);
REPDAY_API void repday_repdays_free(repday_repdays* days);

/* System data ----------------------------------------------------------- */

/* Validation failures return REPDAY_SCHEMA_ERROR; the message names the
 * offending entry, e.g. "lines[3].reactance: must be positive". */
REPDAY_API repday_status repday_system_load(const char* path, repday_system** out);
/* Overrides the budget mode of the file: 0 per category, 1 total. */
REPDAY_API repday_status repday_system_set_budget_mode(repday_system* system, int total);
/* With storage disabled every existing and candidate storage unit is left
 * out of the models built from this system. */
REPDAY_API repday_status repday_system_set_storage(repday_system* system, int enabled);
REPDAY_API size_t repday_system_buses(const repday_system* system);
REPDAY_API double repday_storage_investment_cost(double energy_mwh, double power_mw);
REPDAY_API void repday_system_free(repday_system* system);

/* Models ---------------------------------------------------------------- */

REPDAY_API repday_status repday_model_build_representative(const repday_system* system,
                                                           const repday_repdays* days,
                                                           repday_model** out);
REPDAY_API repday_status repday_model_build_chronological(const repday_system* system,
                                                          const repday_history* history,
                                                          repday_model** out);
REPDAY_API size_t repday_model_variables(const repday_model* model);
REPDAY_API size_t repday_model_rows(const repday_model* model);
REPDAY_API size_t repday_model_warning_count(const repday_model* model);
REPDAY_API const char* repday_model_warning(const repday_model* model, size_t index);
/* Format picked from the extension: .lp or .mps. */
REPDAY_API repday_status repday_model_export(const repday_model* model, const char* path);
REPDAY_API void repday_model_free(repday_model* model);

/* Solving --------------------------------------------------------------- */

typedef struct repday_solver_options {
  double relative_gap;     /* default 1e-6 */
  double time_limit;       /* seconds, 0 = none */
  int64_t node_limit;      /* 0 = default */
} repday_solver_options;

REPDAY_API void repday_solver_options_default(repday_solver_options* options);
REPDAY_API repday_status repday_solve(const repday_model* model,
                                      const repday_solver_options* options,
                                      repday_solution** out);
/* Reads a `name value` file produced by an external solver. */
REPDAY_API repday_status repday_solution_import(const repday_model* model, const char* path,
                                                repday_solution** out);
REPDAY_API const char* repday_solution_status(const repday_solution* solution);
REPDAY_API int repday_solution_has_point(const repday_solution* solution);
REPDAY_API double repday_solution_objective(const repday_solution* solution);
REPDAY_API double repday_solution_gap(const repday_solution* solution);
REPDAY_API double repday_solution_shed_fraction(const repday_solution* solution);
REPDAY_API int64_t repday_solution_nodes(const repday_solution* solution);
REPDAY_API repday_status repday_solution_write_values(const repday_solution* solution,
                                                      const char* path);
/* plan.csv, costs.csv and schedule.csv in dir. */
REPDAY_API repday_status repday_solution_write_reports(const repday_solution* solution,
                                                       const char* dir);
REPDAY_API void repday_solution_free(repday_solution* solution);

/* Evaluation ------------------------------------------------------------ */

typedef struct repday_grid_options {
  const int* k_values;
  size_t n_k;
  int use_tkm;
  int use_mkm;
  int n_seeds;             /* default 5 */
  uint64_t seed;
  int preferred_k2;        /* default 2 */
  int jobs;                /* default 1 */
  int exact_only;
} repday_grid_options;

REPDAY_API void repday_grid_options_default(repday_grid_options* options);
REPDAY_API repday_status repday_evaluate(const repday_system* system,
                                         const repday_history* history,
                                         const repday_grid_options* grid,
                                         const repday_solver_options* solver,
                                         repday_evaluation** out);
REPDAY_API double repday_evaluation_exact_cost(const repday_evaluation* evaluation);
REPDAY_API size_t repday_evaluation_rows(const repday_evaluation* evaluation);
/* NaN for a row whose clustering preconditions failed. */
REPDAY_API double repday_evaluation_row_error(const repday_evaluation* evaluation, size_t row);
REPDAY_API uint64_t repday_evaluation_row_seed(const repday_evaluation* evaluation, size_t row);
/* Writes the report CSVs (or only exact.csv for an exact-only run). */
REPDAY_API repday_status repday_evaluation_report(const repday_evaluation* evaluation,
                                                  const char* dir, repday_timing timing);
REPDAY_API void repday_evaluation_free(repday_evaluation* evaluation);

#ifdef __cplusplus
}
#endif

#endif /* REPDAY_REPDAY_H */
