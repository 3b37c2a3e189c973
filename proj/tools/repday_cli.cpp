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

// repday command-line front end. Links only the C API.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repday/repday.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError {
  std::string message;
};

struct RuntimeFailure {
  repday_status status;
  std::string message;
};

int exit_code_for(repday_status status) {
  switch (status) {
    case REPDAY_OK: return kExitOk;
    case REPDAY_INVALID_ARGUMENT:
    case REPDAY_PARSE_ERROR:
    case REPDAY_SCHEMA_ERROR:
    case REPDAY_PRECONDITION: return kExitUsage;
    default: return kExitRuntime;
  }
}

void check(repday_status status, const std::string& context) {
  if (status != REPDAY_OK)
    throw RuntimeFailure{status, context.empty() ? std::string(repday_last_error())
                                                 : context + ": " + repday_last_error()};
}

// Owns a C handle.
template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr_); }
  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using History = Handle<repday_history, repday_history_free>;
using RepDays = Handle<repday_repdays, repday_repdays_free>;
using System = Handle<repday_system, repday_system_free>;
using Model = Handle<repday_model, repday_model_free>;
using Solution = Handle<repday_solution, repday_solution_free>;
using Evaluation = Handle<repday_evaluation, repday_evaluation_free>;

struct SolverArgs {
  double gap = 1e-6;
  double time_limit = 0.0;
  std::int64_t node_limit = 0;

  repday_solver_options options() const {
    repday_solver_options o;
    repday_solver_options_default(&o);
    o.relative_gap = gap;
    o.time_limit = time_limit;
    if (node_limit > 0) o.node_limit = node_limit;
    return o;
  }
};

struct SystemArgs {
  std::string path;
  std::string budget;  // empty: as in the file
  bool no_storage = false;
};

struct ClusterArgs {
  std::string in;
  bool wind_per_unit = false;
  std::string method = "tkm";
  int k = 0;
  int k1 = 0;
  int k2 = 0;
  std::uint64_t seed = 1;
  std::string out = "out";
};

struct SolveArgs {
  SystemArgs system;
  SolverArgs solver;
  std::string repdays;
  std::string history;
  bool wind_per_unit = false;
  std::string export_path;
  std::string import_path;
  std::string out = "out";
};

struct EvaluateArgs {
  SystemArgs system;
  SolverArgs solver;
  std::string history;
  bool wind_per_unit = false;
  std::vector<int> k_grid{2, 4, 8};
  std::vector<std::string> methods{"tkm", "mkm"};
  int seeds = 5;
  std::uint64_t seed = 1;
  int k2 = 2;
  int jobs = 1;
  bool exact_only = false;
  std::string timing = "work";
  std::string out = "out";
};

struct SynthArgs {
  int year = 2016;
  int days = 366;
  int first_day = 0;
  std::uint64_t seed = 2016;
  std::vector<std::string> load_zones{"west:3700", "east:2600"};
  std::vector<std::string> wind_zones{"north:3000", "south:1300"};
  std::string out = "history.csv";
};

struct ValidateArgs {
  std::string system;
};

void add_system_options(CLI::App* cmd, SystemArgs& args) {
  cmd->add_option("--system", args.path, "System file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--budget", args.budget, "Override the budget mode")
      ->check(CLI::IsMember({"total", "category"}));
  cmd->add_flag("--no-storage", args.no_storage, "Leave every storage unit out of the model");
}

void add_solver_options(CLI::App* cmd, SolverArgs& args) {
  cmd->add_option("--gap", args.gap, "Relative optimality gap")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--time-limit", args.time_limit, "Branch-and-bound time limit in seconds (0: none)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--node-limit", args.node_limit, "Branch-and-bound node limit (0: default)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

void add_out_option(CLI::App* cmd, std::string& out) {
  cmd->add_option("--out", out, "Output directory")
      ->envname("REPDAY_OUT_DIR")
      ->capture_default_str();
}

void load_system(const SystemArgs& args, System& system) {
  check(repday_system_load(args.path.c_str(), system.out()), "");
  if (!args.budget.empty())
    check(repday_system_set_budget_mode(system.get(), args.budget == "total"), "--budget");
  if (args.no_storage) check(repday_system_set_storage(system.get(), 0), "--no-storage");
}

void load_history(const std::string& path, bool per_unit, History& history) {
  check(repday_history_load_csv(path.c_str(), per_unit ? 1 : 0, history.out()),
        "history " + path);
}

class Manifest {
 public:
  // Records the effective value of every option of `command` as a config
  // section, so `--config manifest.toml` replays the run.
  explicit Manifest(const CLI::App& command)
      : command_(command.get_name()), start_(std::chrono::steady_clock::now()) {
    std::ostringstream text;
    text << "[" << command_ << "]\n";
    for (const CLI::Option* opt : command.get_options()) {
      const std::string key = opt->get_single_name();
      if (key == "help" || key == "config") continue;
      std::vector<std::string> values = opt->results();
      if (opt->count() == 0) {
        const std::string fallback = opt->get_default_str();
        if (fallback.empty()) continue;
        values = {fallback};
      }
      text << key << " = ";
      if (opt->get_expected_max() > 1) {
        text << "[";
        bool first = true;
        for (const auto& v : values) {
          for (const auto& item : split_list(v)) {
            text << (first ? "" : ", ") << quoted(opt, item);
            first = false;
          }
        }
        text << "]\n";
      } else {
        text << quoted(opt, values.empty() ? std::string() : values.back()) << "\n";
      }
    }
    config_ = text.str();
  }

  void note(const std::string& key, const std::string& value) {
    notes_ << "# " << key << " = " << value << "\n";
  }

  void write(const fs::path& path) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream file(path);
    if (!file) throw RuntimeFailure{REPDAY_IO_ERROR, "cannot write " + path.string()};
    file << "# repday " << repday_version() << " run manifest; rerun with\n"
         << "#   repday_cli --config " << path.string() << "\n"
         << notes_.str() << config_ << "# wall_seconds = " << seconds << "\n";
  }

 private:
  static std::vector<std::string> split_list(const std::string& value) {
    std::string body = value;
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
      body = body.substr(1, body.size() - 2);
    std::vector<std::string> items;
    std::stringstream stream(body);
    for (std::string item; std::getline(stream, item, ',');)
      if (!item.empty()) items.push_back(item);
    return items;
  }

  static std::string quoted(const CLI::Option* opt, const std::string& value) {
    if (opt->get_type_size() == 0) return value == "-1" || value == "false" ? "false" : "true";
    char* end = nullptr;
    std::strtod(value.c_str(), &end);
    if (!value.empty() && end == value.c_str() + value.size()) return value;
    return "\"" + value + "\"";
  }

  std::string command_;
  std::string config_;
  std::ostringstream notes_;
  std::chrono::steady_clock::time_point start_;
};

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path);
  if (!file) throw RuntimeFailure{REPDAY_IO_ERROR, "cannot write " + path.string()};
  file << text;
}

int run_cluster(const CLI::App& cmd, const ClusterArgs& args) {
  if (args.method == "tkm") {
    if (args.k <= 0) throw UsageError{"--method tkm requires --k N"};
    if (args.k1 != 0 || args.k2 != 0) throw UsageError{"--k1/--k2 apply only to --method mkm"};
  } else {
    if (args.k1 <= 0 || args.k2 <= 0) throw UsageError{"--method mkm requires --k1 A and --k2 B"};
    if (args.k != 0) throw UsageError{"--k applies only to --method tkm; use --k1/--k2"};
  }
  Manifest manifest(cmd);
  History history;
  load_history(args.in, args.wind_per_unit, history);
  RepDays days;
  const repday_method method = args.method == "tkm" ? REPDAY_TKM : REPDAY_MKM;
  check(repday_cluster(history.get(), method, args.k, args.k1, args.k2, args.seed, days.out()),
        "clustering");

  const fs::path out(args.out);
  check(repday_repdays_write(days.get(), (out / "repdays.csv").string().c_str()), "write");
  std::ostringstream summary;
  summary << "rep_day,weight\n";
  const size_t n = repday_repdays_count(days.get());
  for (size_t r = 0; r < n; ++r) summary << r + 1 << ',' << repday_repdays_weight(days.get(), r) << '\n';
  write_text(out / "cluster_summary.csv", summary.str());
  manifest.note("history_days", std::to_string(repday_history_days(history.get())));
  manifest.write(out / "manifest.toml");

  std::cout << n << " representative days from " << repday_history_days(history.get())
            << " days written to " << (out / "repdays.csv").string() << "\n";
  return kExitOk;
}

int run_solve(const CLI::App& cmd, const SolveArgs& args) {
  if (args.repdays.empty() == args.history.empty())
    throw UsageError{"give exactly one of --repdays or --history"};
  if (!args.export_path.empty() && !args.import_path.empty())
    throw UsageError{"--export and --import-solution are exclusive"};
  if (!args.export_path.empty()) {
    const std::string ext = fs::path(args.export_path).extension().string();
    if (ext != ".lp" && ext != ".mps") throw UsageError{"--export needs a .lp or .mps file"};
  }
  Manifest manifest(cmd);
  System system;
  load_system(args.system, system);
  Model model;
  if (!args.repdays.empty()) {
    RepDays days;
    check(repday_repdays_load(args.repdays.c_str(), days.out()), "repdays " + args.repdays);
    check(repday_model_build_representative(system.get(), days.get(), model.out()), "model");
  } else {
    History history;
    load_history(args.history, args.wind_per_unit, history);
    check(repday_model_build_chronological(system.get(), history.get(), model.out()), "model");
  }
  for (size_t i = 0; i < repday_model_warning_count(model.get()); ++i)
    std::cerr << "warning: " << repday_model_warning(model.get(), i) << "\n";

  if (!args.export_path.empty()) {
    check(repday_model_export(model.get(), args.export_path.c_str()), "export");
    std::cout << "exported " << repday_model_variables(model.get()) << " variables and "
              << repday_model_rows(model.get()) << " rows to " << args.export_path << "\n";
    return kExitOk;
  }

  Solution solution;
  if (!args.import_path.empty()) {
    check(repday_solution_import(model.get(), args.import_path.c_str(), solution.out()),
          "solution " + args.import_path);
  } else {
    const repday_solver_options options = args.solver.options();
    check(repday_solve(model.get(), &options, solution.out()), "solve");
  }

  const fs::path out(args.out);
  std::ostringstream summary;
  summary << "status,objective,relative_gap,nodes,shed_fraction\n"
          << repday_solution_status(solution.get()) << ','
          << format_number(repday_solution_objective(solution.get())) << ','
          << format_number(repday_solution_gap(solution.get())) << ','
          << repday_solution_nodes(solution.get()) << ','
          << format_number(repday_solution_shed_fraction(solution.get())) << '\n';
  write_text(out / "summary.csv", summary.str());
  manifest.note("variables", std::to_string(repday_model_variables(model.get())));
  manifest.note("rows", std::to_string(repday_model_rows(model.get())));
  if (!repday_solution_has_point(solution.get())) {
    manifest.write(out / "manifest.toml");
    std::cerr << "no feasible point: " << repday_solution_status(solution.get()) << "\n";
    return kExitRuntime;
  }
  check(repday_solution_write_reports(solution.get(), out.string().c_str()), "reports");
  check(repday_solution_write_values(solution.get(), (out / "values.txt").string().c_str()),
        "values");
  manifest.write(out / "manifest.toml");
  std::cout << "status " << repday_solution_status(solution.get()) << ", total cost "
            << format_number(repday_solution_objective(solution.get())) << " $\n";
  return kExitOk;
}

int run_evaluate(const CLI::App& cmd, const EvaluateArgs& args) {
  repday_grid_options grid;
  repday_grid_options_default(&grid);
  grid.use_tkm = 0;
  grid.use_mkm = 0;
  for (const auto& m : args.methods) {
    if (m == "tkm") grid.use_tkm = 1;
    else if (m == "mkm") grid.use_mkm = 1;
    else throw UsageError{"unknown method '" + m + "'"};
  }
  if (args.k_grid.empty() && !args.exact_only) throw UsageError{"--k-grid is empty"};
  for (int k : args.k_grid)
    if (k < 1) throw UsageError{"--k-grid values must be positive"};
  grid.k_values = args.k_grid.data();
  grid.n_k = args.k_grid.size();
  grid.n_seeds = args.seeds;
  grid.seed = args.seed;
  grid.preferred_k2 = args.k2;
  grid.jobs = args.jobs;
  grid.exact_only = args.exact_only ? 1 : 0;

  Manifest manifest(cmd);
  System system;
  load_system(args.system, system);
  History history;
  load_history(args.history, args.wind_per_unit, history);
  for (int k : args.k_grid)
    if (static_cast<size_t>(k) > repday_history_days(history.get()))
      throw UsageError{"--k-grid value " + std::to_string(k) + " exceeds the " +
                       std::to_string(repday_history_days(history.get())) + " history days"};

  const repday_solver_options solver = args.solver.options();
  Evaluation evaluation;
  check(repday_evaluate(system.get(), history.get(), &grid, &solver, evaluation.out()),
        "evaluation");
  const fs::path out(args.out);
  check(repday_evaluation_report(evaluation.get(), out.string().c_str(),
                                 args.timing == "wall" ? REPDAY_TIMING_WALL : REPDAY_TIMING_WORK),
        "report");

  manifest.note("exact_total_cost", format_number(repday_evaluation_exact_cost(evaluation.get())));
  std::string seeds;
  for (int i = 0; i < args.seeds; ++i) {
    // Row order is method, K, seed index; the first seeds-long block holds them all.
    if (static_cast<size_t>(i) >= repday_evaluation_rows(evaluation.get())) break;
    if (!seeds.empty()) seeds += ", ";
    seeds += std::to_string(repday_evaluation_row_seed(evaluation.get(), i));
  }
  if (!seeds.empty()) manifest.note("derived_seeds", "[" + seeds + "]");
  manifest.write(out / "manifest.toml");

  size_t failed = 0;
  for (size_t i = 0; i < repday_evaluation_rows(evaluation.get()); ++i)
    failed += std::isnan(repday_evaluation_row_error(evaluation.get(), i));
  std::cout << "exact total cost " << format_number(repday_evaluation_exact_cost(evaluation.get()))
            << " $; " << repday_evaluation_rows(evaluation.get()) << " rows written to "
            << out.string() << "\n";
  if (failed > 0)
    std::cout << failed << " row(s) rejected by clustering preconditions; see runs.csv\n";
  return kExitOk;
}

void split_zone(const std::string& spec, std::vector<std::string>& names,
                std::vector<double>& values) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0)
    throw UsageError{"zone '" + spec + "' must be name:value"};
  names.push_back(spec.substr(0, colon));
  try {
    size_t used = 0;
    values.push_back(std::stod(spec.substr(colon + 1), &used));
    if (used != spec.size() - colon - 1) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw UsageError{"zone '" + spec + "' has a malformed value"};
  }
}

int run_synth(const CLI::App& cmd, const SynthArgs& args) {
  std::vector<std::string> load_names, wind_names;
  std::vector<double> peaks, capacities;
  for (const auto& z : args.load_zones) split_zone(z, load_names, peaks);
  for (const auto& z : args.wind_zones) split_zone(z, wind_names, capacities);
  std::vector<const char*> load_c, wind_c;
  for (const auto& n : load_names) load_c.push_back(n.c_str());
  for (const auto& n : wind_names) wind_c.push_back(n.c_str());

  Manifest manifest(cmd);
  History history;
  check(repday_history_synthesize(args.year, args.days, args.first_day, args.seed, load_c.data(),
                                  peaks.data(), load_c.size(), wind_c.data(), capacities.data(),
                                  wind_c.size(), history.out()),
        "synthesis");
  check(repday_history_write_csv(history.get(), args.out.c_str()), "write");
  fs::path manifest_path(args.out);
  manifest_path += ".manifest.toml";
  manifest.write(manifest_path);
  std::cout << repday_history_days(history.get()) << " days written to " << args.out << "\n";
  return kExitOk;
}

int run_validate(const ValidateArgs& args) {
  System system;
  check(repday_system_load(args.system.c_str(), system.out()), "");
  std::cout << args.system << ": ok (" << repday_system_buses(system.get()) << " buses)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Representative-day generation and transmission expansion planning"};
  app.set_version_flag("--version", std::string(repday_version()));
  app.set_config("--config", "", "Read options from a key-tree (TOML) file; flags override it");
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  ClusterArgs cluster;
  auto* cmd_cluster = app.add_subcommand("cluster", "Cluster history into representative days")->configurable();
  cmd_cluster->add_option("--in", cluster.in, "Hourly history CSV")->required()->check(CLI::ExistingFile);
  cmd_cluster->add_flag("--wind-per-unit", cluster.wind_per_unit,
                        "Wind columns are fractions of installed capacity");
  cmd_cluster->add_option("--method", cluster.method, "Clustering method")
      ->capture_default_str()
      ->check(CLI::IsMember({"tkm", "mkm"}));
  cmd_cluster->add_option("--k", cluster.k, "TKM cluster count");
  cmd_cluster->add_option("--k1", cluster.k1, "MKM first-stage cluster count");
  cmd_cluster->add_option("--k2", cluster.k2, "MKM second-stage cluster count");
  cmd_cluster->add_option("--seed", cluster.seed, "Random seed")->capture_default_str();
  add_out_option(cmd_cluster, cluster.out);

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Build and solve an expansion model")->configurable();
  add_system_options(cmd_solve, solve.system);
  add_solver_options(cmd_solve, solve.solver);
  cmd_solve->add_option("--repdays", solve.repdays, "Representative-day CSV")
      ->check(CLI::ExistingFile);
  cmd_solve->add_option("--history", solve.history, "Hourly history CSV (chronological model)")
      ->check(CLI::ExistingFile);
  cmd_solve->add_flag("--wind-per-unit", solve.wind_per_unit,
                      "Wind columns are fractions of installed capacity");
  cmd_solve->add_option("--export", solve.export_path, "Write the model as .lp or .mps and stop");
  cmd_solve->add_option("--import-solution", solve.import_path,
                        "Read an external solver's name/value file instead of solving")
      ->check(CLI::ExistingFile);
  add_out_option(cmd_solve, solve.out);

  EvaluateArgs evaluate;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "Compare representative-day plans with the exact plan")->configurable();
  add_system_options(cmd_evaluate, evaluate.system);
  add_solver_options(cmd_evaluate, evaluate.solver);
  cmd_evaluate->add_option("--history", evaluate.history, "Hourly history CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_evaluate->add_flag("--wind-per-unit", evaluate.wind_per_unit,
                         "Wind columns are fractions of installed capacity");
  cmd_evaluate->add_option("--k-grid", evaluate.k_grid, "Representative-day counts")
      ->delimiter(',')
      ->capture_default_str();
  cmd_evaluate->add_option("--methods", evaluate.methods, "Clustering methods")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"tkm", "mkm"}));
  cmd_evaluate->add_option("--seeds", evaluate.seeds, "Seeds per (method, K)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_evaluate->add_option("--seed", evaluate.seed, "Top-level seed")->capture_default_str();
  cmd_evaluate->add_option("--k2", evaluate.k2, "Preferred MKM second-stage count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_evaluate->add_option("--jobs", evaluate.jobs, "Parallel pipeline rows")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_evaluate->add_flag("--exact-only", evaluate.exact_only, "Only compute the exact solution");
  cmd_evaluate->add_option("--timing", evaluate.timing,
                           "Time columns: work (simplex iterations) or wall (seconds)")
      ->capture_default_str()
      ->check(CLI::IsMember({"work", "wall"}));
  add_out_option(cmd_evaluate, evaluate.out);

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Write a synthetic hourly history")->configurable();
  cmd_synth->add_option("--year", synth.year, "Calendar year")->capture_default_str();
  cmd_synth->add_option("--days", synth.days, "Number of days")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_synth->add_option("--first-day", synth.first_day, "First day of year (0 = January 1st)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  cmd_synth->add_option("--load-zone", synth.load_zones, "Load zone as name:peak_mw")
      ->capture_default_str();
  cmd_synth->add_option("--wind-zone", synth.wind_zones, "Wind zone as name:capacity_mw")
      ->capture_default_str();
  cmd_synth->add_option("--out", synth.out, "Output CSV")->capture_default_str();

  ValidateArgs validate;
  auto* cmd_validate = app.add_subcommand("validate", "Check a system file")->configurable();
  cmd_validate->add_option("--system", validate.system, "System file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_cluster->parsed()) return run_cluster(*cmd_cluster, cluster);
    if (cmd_solve->parsed()) return run_solve(*cmd_solve, solve);
    if (cmd_evaluate->parsed()) return run_evaluate(*cmd_evaluate, evaluate);
    if (cmd_synth->parsed()) return run_synth(*cmd_synth, synth);
    if (cmd_validate->parsed()) return run_validate(validate);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return exit_code_for(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
