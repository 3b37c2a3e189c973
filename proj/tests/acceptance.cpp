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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   acceptance [--expect-fail 8[,N...]] [path/to/repday_cli]
//
// The CLI path is needed for the determinism criterion. Criteria listed
// with --expect-fail still print FAIL but do not change the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "repday/clustering.hpp"
#include "repday/error.hpp"
#include "repday/evaluation.hpp"
#include "repday/lp_io.hpp"
#include "repday/milp.hpp"
#include "repday/model.hpp"
#include "repday/random.hpp"
#include "repday/system.hpp"
#include "repday/timeseries.hpp"

using namespace repday;
namespace fs = std::filesystem;

namespace {

const fs::path kData = REPDAY_DATA_DIR;
const fs::path kGolden = REPDAY_GOLDEN_DIR;

// Pinned tolerances.
constexpr double kCentroidTol = 1e-9;
constexpr double kOracleRelTol = 1e-6;
constexpr double kRoundTripRelTol = 1e-9;
constexpr double kInjectionTol = 1e-9;
constexpr double kAnnualizedRelTol = 1e-12;
constexpr double kStorageTol = 1e-9;
// A plan can undercut CT^E by at most the exact solve's relative gap (1e-6),
// i.e. 1e-4 percent.
constexpr double kErrorFloor = -1e-4;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Point> random_points(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> points(n, Point(dim));
  for (auto& p : points)
    for (auto& x : p) x = u(rng);
  return points;
}

std::vector<int> canonical(const std::vector<int>& assignment) {
  std::map<int, int> map;
  std::vector<int> out;
  for (int c : assignment) {
    auto it = map.try_emplace(c, static_cast<int>(map.size())).first;
    out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome clustering_properties() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  int bad_trace = 0, bad_centroid = 0, bad_mkm = 0, skipped_mkm = 0;
  double worst_centroid = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 39);
    const int dim = 1 + static_cast<int>(rng() % 8);
    const int k = 1 + static_cast<int>(rng() % std::min(n, 8));
    const auto pts = random_points(rng, n, dim);

    const auto r = tkm(pts, k, trial);
    for (size_t i = 1; i < r.sse_trace.size(); ++i)
      if (r.sse_trace[i] > r.sse_trace[i - 1]) ++bad_trace;
    for (int c = 0; c < k; ++c) {
      for (int d = 0; d < dim; ++d) {
        double s = 0.0;
        int m = 0;
        for (int i = 0; i < n; ++i)
          if (r.assignment[i] == c) {
            s += pts[i][d];
            ++m;
          }
        const double err = m == 0 ? INFINITY : std::abs(r.centroids[c][d] - s / m);
        worst_centroid = std::max(worst_centroid, err);
        if (!(err <= kCentroidTol)) ++bad_centroid;
      }
    }

    const int k2 = 1 + static_cast<int>(rng() % 3);
    const int k1 = 1 + static_cast<int>(rng() % std::max(1, std::min(6, n / (2 * k2))));
    try {
      const auto m = mkm(pts, k1, k2, trial);
      int total = 0;
      for (int c : m.counts) total += c;
      if (static_cast<int>(m.centroids.size()) != k1 * k2 || static_cast<int>(m.counts.size()) != k1 * k2 ||
          total != n)
        ++bad_mkm;
    } catch (const PreconditionError&) {
      // Only legitimate when some stage-one cluster has fewer than K2 members.
      const auto stage = tkm(pts, k1, trial);
      if (*std::min_element(stage.counts.begin(), stage.counts.end()) >= k2) ++bad_mkm;
      ++skipped_mkm;
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = bad_trace == 0 && bad_centroid == 0 && bad_mkm == 0 && seconds < 10.0;
  o.detail = fmt::format(
      "200 instances, SSE increases {}, centroid max dev {:.1e} (tol 1e-9), MKM failures {} "
      "({} precondition rejections), {:.2f} s (limit 10 s)",
      bad_trace, worst_centroid, bad_mkm, skipped_mkm, seconds);
  return o;
}

Outcome mkm_degenerate() {
  std::mt19937_64 rng(77);
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 12 + static_cast<int>(rng() % 25);
    const auto pts = random_points(rng, n, 1 + static_cast<int>(rng() % 6));
    const int k = 2 + static_cast<int>(rng() % 5);
    // K2 = 1: stage one is the whole answer.
    if (canonical(mkm(pts, k, 1, seed).assignment) != canonical(tkm(pts, k, seed).assignment)) ++mismatches;
    // K1 = 1: one stage-one cluster, refined with the first derived seed.
    if (canonical(mkm(pts, 1, k, seed).assignment) != canonical(tkm(pts, k, derive_seed(seed, 0)).assignment))
      ++mismatches;
  }
  return {mismatches == 0, fmt::format("20 seeds x (K1=1, K2=1), partition mismatches {}", mismatches)};
}

RepresentativeDaySet desk_days(int k) {
  ClusterSpec spec;
  spec.k = k;
  spec.seed = 7;
  return cluster_history(load_hourly_csv(kData / "desk_history_14.csv"), spec);
}

Outcome milp_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const auto system = load_system(kData / "desk3.toml");
  const auto model = build_representative_model(system, desk_days(2));
  const auto sol = solve_milp(model.problem);
  if (sol.status != MilpStatus::Optimal) return {false, "branch and bound did not reach optimality"};

  const auto lines = system.candidate_lines();
  const auto storages = system.candidate_storages();
  if (lines.size() != 2 || storages.size() != 1) return {false, "unexpected desk candidates"};
  const int max_units = system.storages[storages[0]].max_units;
  double best = INFINITY;
  int combos = 0;
  for (int code = 0; code < 4; ++code) {
    for (int units = 0; units <= max_units; ++units) {
      MilpProblem lp = model.problem;
      for (size_t i = 0; i < 2; ++i) {
        auto& v = lp.variable(model.line_build[lines[i]]);
        v.lower = v.upper = (code >> i) & 1;
      }
      auto& u = lp.variable(model.storage_units[storages[0]]);
      u.lower = u.upper = units;
      if (lp.free_integer_count() != 0) return {false, "integer variables left after fixing"};
      const auto r = solve_milp(lp);
      ++combos;
      if (r.status == MilpStatus::Optimal) best = std::min(best, r.objective);
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double rel = std::abs(sol.objective - best) / std::abs(best);
  return {rel <= kOracleRelTol && seconds < 60.0,
          fmt::format("B&B {:.4f} vs enumeration of {} combinations {:.4f}, rel {:.1e} (tol 1e-6), "
                      "{:.2f} s (limit 60 s)",
                      sol.objective, combos, best, rel, seconds)};
}

Outcome linearization() {
  const auto system = load_system(kData / "desk3.toml");
  const auto days = desk_days(2);
  const auto big_m = build_representative_model(system, days);
  const auto lines = system.candidate_lines();
  double worst = 0.0;
  bool solved = true;
  for (int code = 0; code < (1 << lines.size()); ++code) {
    std::vector<int> x;
    for (size_t i = 0; i < lines.size(); ++i) x.push_back((code >> i) & 1);
    MilpProblem fixed = big_m.problem;
    for (size_t i = 0; i < x.size(); ++i) {
      auto& v = fixed.variable(big_m.line_build[lines[i]]);
      v.lower = v.upper = x[i];
    }
    ModelOptions options;
    options.substituted_lines = x;
    const auto direct = build_representative_model(system, days, options);
    const auto a = solve_milp(fixed);
    const auto b = solve_milp(direct.problem);
    if (a.status != MilpStatus::Optimal || b.status != MilpStatus::Optimal) {
      solved = false;
      continue;
    }
    worst = std::max(worst, std::abs(a.objective - b.objective) / std::abs(b.objective));
  }
  return {solved && worst <= kOracleRelTol,
          fmt::format("{} line assignments, max rel diff {:.1e} (tol 1e-6)", 1 << lines.size(), worst)};
}

Outcome storage_arithmetic() {
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
  Storage st;
  st.id = "s";
  st.bus = "n";
  st.energy_capacity = 100;
  st.power_capacity = 20;
  st.charge_efficiency = 0.9;
  st.discharge_efficiency = 0.9;
  s.storages.push_back(st);
  s.budgets.mode = BudgetMode::PerCategory;

  RepresentativeDaySet days;
  RepresentativeDay day;
  day.weight = 1;
  day.beta.assign(1, std::vector<double>(kHoursPerDay, 0.5));
  days.days.push_back(day);
  days.load_zones = {"z"};
  const auto model = build_representative_model(s, days);

  // Charge 10 MW in hour 1, idle in hour 2, discharge 4.5 MW in hour 3.
  MilpProblem pinned = model.problem;
  for (int h = 0; h < kHoursPerDay; ++h) {
    const auto& blk = model.block(0, h);
    const double charge = h == 0 ? 10.0 : 0.0;
    const double discharge = h == 2 ? 4.5 : 0.0;
    pinned.variable(blk.charge[0]).lower = pinned.variable(blk.charge[0]).upper = charge / s.base_power;
    pinned.variable(blk.discharge[0]).lower = pinned.variable(blk.discharge[0]).upper = discharge / s.base_power;
  }
  const auto sol = solve_milp(pinned);
  if (sol.status != MilpStatus::Optimal) return {false, "pinned schedule not solved"};
  auto energy = [&](int h) { return sol.values[model.block(0, h).energy[0]] * s.base_power; };
  const double expected[] = {9.0, 9.0, 4.0, 4.0};
  const double got[] = {energy(0), energy(1), energy(2), energy(23)};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(got[i] - expected[i]));
  return {worst <= kStorageTol,
          fmt::format("energy after hours 1/2/3/24: {:.9g}/{:.9g}/{:.9g}/{:.9g} MWh "
                      "(expected 9/9/4/4), max dev {:.1e}",
                      got[0], got[1], got[2], got[3], worst)};
}

Outcome storage_costs() {
  struct Pair {
    double e, p, annualized;
  };
  const Pair pairs[] = {{250, 125, 14.0e6}, {200, 100, 11.2e6}, {300, 150, 16.8e6}, {400, 200, 22.4e6}};
  double worst = 0.0;
  std::string values;
  for (const auto& x : pairs) {
    const double got = 0.1 * storage_investment_cost(x.e, x.p);
    worst = std::max(worst, std::abs(got - x.annualized) / x.annualized);
    values += fmt::format("{}{:.1f}M", values.empty() ? "" : ", ", got / 1e6);
  }
  // The RTS file applies the same rule to its storage candidates.
  const auto rts = load_system(kData / "rts24.toml");
  const double table[] = {14.0e6, 14.0e6, 11.2e6, 16.8e6, 22.4e6};
  const auto cand = rts.candidate_storages();
  bool rts_ok = cand.size() == 5;
  for (size_t i = 0; rts_ok && i < cand.size(); ++i) {
    const double got = rts.storages[cand[i]].annualized_cost;
    worst = std::max(worst, std::abs(got - table[i]) / table[i]);
  }
  return {rts_ok && worst <= kAnnualizedRelTol,
          fmt::format("annualized {} and 5 RTS candidates, max rel dev {:.1e} (tol 1e-12)", values, worst)};
}

Outcome file_round_trips() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  int status_mismatch = 0, optimal = 0;
  for (int trial = 0; trial < 20; ++trial) {
    MilpProblem p;
    const int n = 3 + static_cast<int>(rng() % 6);
    const int m = 2 + static_cast<int>(rng() % 5);
    for (int j = 0; j < n; ++j) {
      const int kind = static_cast<int>(rng() % 3);
      const VarType t = kind == 0 ? VarType::Continuous : kind == 1 ? VarType::Integer : VarType::Binary;
      const double lo = t == VarType::Binary ? 0.0 : std::floor(u(rng) / 2.0);
      const double up = t == VarType::Binary ? 1.0 : lo + 1.0 + std::floor(std::abs(u(rng)));
      p.add_variable(fmt::format("x{}", j), lo, up, t, u(rng) / 3.0);
    }
    for (int i = 0; i < m; ++i) {
      std::vector<Term> terms;
      double at_lower = 0.0;
      for (int j = 0; j < n; ++j)
        if (rng() % 2) {
          terms.push_back({j, u(rng) / 7.0});
          at_lower += terms.back().coef * p.variable(j).lower;
        }
      const RowSense s = rng() % 2 ? RowSense::LessEqual : RowSense::GreaterEqual;
      p.add_row(fmt::format("r{}", i), terms, s,
                s == RowSense::LessEqual ? at_lower + std::abs(u(rng)) : at_lower - std::abs(u(rng)));
    }
    const auto a = solve_milp(p);
    const auto b = solve_milp(parse_lp(format_lp(p)));
    const auto c = solve_milp(parse_mps(format_mps(p)));
    if (a.status != b.status || a.status != c.status) {
      ++status_mismatch;
      continue;
    }
    if (a.status != MilpStatus::Optimal) continue;
    ++optimal;
    const double scale = std::max(1.0, std::abs(a.objective));
    worst = std::max({worst, std::abs(a.objective - b.objective) / scale, std::abs(a.objective - c.objective) / scale});
  }

  MilpProblem two;
  two.name = "two_var";
  const int x = two.add_variable("x", 0.0, 4.0, VarType::Continuous, -3.0);
  const int y = two.add_variable("y", 0.0, kInfinity, VarType::Integer, -2.0);
  two.add_row("c1", {{x, 1.0}, {y, 1.0}}, RowSense::LessEqual, 4.5);
  two.add_row("c2", {{x, 1.0}, {y, -0.25}}, RowSense::GreaterEqual, -1.0);
  const bool golden_lp = format_lp(two) == slurp(kGolden / "two_var.lp");
  const bool golden_mps = format_mps(two) == slurp(kGolden / "two_var.mps");

  return {status_mismatch == 0 && worst <= kRoundTripRelTol && golden_lp && golden_mps,
          fmt::format("20 instances ({} optimal), max rel diff {:.1e} (tol 1e-9), status mismatches {}, "
                      "golden LP {}, golden MPS {}",
                      optimal, worst, status_mismatch, golden_lp ? "equal" : "differs",
                      golden_mps ? "equal" : "differs")};
}

// ---------------------------------------------------------------------------
// Desk grid shared by the pipeline and trend criteria.

struct DeskGrid {
  GridResult result;
  double injected_error = INFINITY;
  double seconds = 0.0;
};

DeskGrid run_desk_grid() {
  const auto start = std::chrono::steady_clock::now();
  const auto system = load_system(kData / "desk3.toml");
  const auto history = load_hourly_csv(kData / "desk_history_14.csv");
  GridConfig grid;
  grid.k_values = {2, 4, 7, 8};
  grid.n_seeds = 5;
  DeskGrid out;
  out.result = run_grid(system, history, grid);
  out.injected_error =
      percent_error(evaluate_plan(system, history, out.result.exact.plan), out.result.exact.total_cost);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

Outcome pipeline_sanity(const DeskGrid& g) {
  double lowest = INFINITY;
  int rows = 0, negative = 0, rejected = 0;
  for (const auto& r : g.result.rows) {
    if (r.k != 2 && r.k != 4 && r.k != 7) continue;
    if (!r.failure.empty()) {
      ++rejected;
      continue;
    }
    ++rows;
    // Signed error: a negative value would mean the plan beat the exact optimum.
    const double signed_error = 100.0 * (r.total_cost - g.result.exact.total_cost) / g.result.exact.total_cost;
    lowest = std::min(lowest, signed_error);
    if (signed_error < kErrorFloor) ++negative;
  }
  return {rows == 30 && negative == 0 && g.result.exact.certified && g.injected_error <= kInjectionTol,
          fmt::format("CT^E {:.2f}, {} of 30 runs completed ({} rejected by MKM preconditions), "
                      "min signed eps {:.2e}% (floor -1e-4%), below floor {}, exact-plan eps {:.1e}% (tol 1e-9)",
                      g.result.exact.total_cost, rows, rejected, lowest, negative, g.injected_error)};
}

Outcome method_trend(const DeskGrid& g) {
  std::string table;
  int exceptions = 0;
  for (int k : {2, 4, 7, 8}) {
    const auto t = summarize(g.result.rows, ClusterMethod::Tkm, k, TimingMode::Work);
    const auto m = summarize(g.result.rows, ClusterMethod::Mkm, k, TimingMode::Work);
    if (!t || !m) return {false, fmt::format("no completed rows for K={}", k)};
    table += fmt::format("{}K={} TKM {:.4f}% MKM {:.4f}%", table.empty() ? "" : "; ", k, t->median_error,
                         m->median_error);
    if (t->failed + m->failed > 0) table += fmt::format(" ({} MKM seeds rejected)", m->failed);
    if ((k == 4 || k == 8) && m->median_error > t->median_error + 1e-12) ++exceptions;
  }
  return {exceptions <= 1, fmt::format("median eps over 5 seeds: {}; exceptions at K in {{4,8}}: {} (allowed 1)",
                                       table, exceptions)};
}

// ---------------------------------------------------------------------------

int run(const std::string& command) {
  const int rc = std::system((command + " >/dev/null 2>&1").c_str());
  return rc;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome determinism(const std::string& cli) {
  if (cli.empty()) return {false, "CLI path not supplied"};
  const fs::path work = fs::temp_directory_path() / "repday_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string exe = quote(cli);
  const std::string history = quote(kData / "desk_history_14.csv");
  const std::string system = quote(kData / "desk3.toml");

  struct Case {
    std::string name, first;
  };
  const std::vector<Case> cases{
      {"cluster", exe + " cluster --in " + history + " --method mkm --k1 3 --k2 2 --seed 9 --out " +
                      quote(work / "cluster_a")},
      {"solve", ""},
      {"evaluate", exe + " evaluate --system " + system + " --history " + history +
                       " --k-grid 2 4 --seeds 2 --seed 3 --out " + quote(work / "evaluate_a")},
  };
  int compared = 0, differing = 0, failed = 0;
  for (const auto& c : cases) {
    std::string first = c.first;
    if (c.name == "solve")
      first = exe + " solve --system " + system + " --repdays " + quote(work / "cluster_a" / "repdays.csv") +
              " --out " + quote(work / "solve_a");
    const fs::path a = work / (c.name + "_a");
    const fs::path b = work / (c.name + "_b");
    if (run(first) != 0) {
      ++failed;
      continue;
    }
    if (run(exe + " --config " + quote(a / "manifest.toml") + " " + c.name + " --out " + quote(b)) != 0) {
      ++failed;
      continue;
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      if (slurp(entry.path()) != slurp(b / entry.path().filename())) ++differing;
    }
  }
  fs::remove_all(work);
  return {failed == 0 && differing == 0 && compared > 0,
          fmt::format("cluster/solve/evaluate replayed from manifests: {} CSV files compared, {} differ, "
                      "{} commands failed",
                      compared, differing, failed)};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string id; std::getline(list, id, ',');) expected.insert(std::stoi(id));
    } else {
      cli = arg;
    }
  }
  int failures = 0, unexpected = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    unexpected += !o.pass && !expected.count(id);
    fmt::print("{} {:>2} {}: {}{}\n", o.pass ? "PASS" : "FAIL", id, title, o.detail,
               !o.pass && expected.count(id) ? " [expected failure]" : "");
    std::fflush(stdout);
  };

  report(1, "clustering properties", clustering_properties);
  report(2, "MKM/TKM degenerate equivalence", mkm_degenerate);
  report(3, "MILP vs enumeration oracle", milp_oracle);
  report(4, "big-M vs substituted lines", linearization);
  report(5, "storage arithmetic", storage_arithmetic);
  report(6, "storage investment cost", storage_costs);

  DeskGrid grid;
  std::string grid_error;
  try {
    grid = run_desk_grid();
  } catch (const std::exception& e) {
    grid_error = e.what();
  }
  auto grid_guard = [&](auto fn) {
    return [&, fn]() -> Outcome {
      if (!grid_error.empty()) return {false, "desk grid failed: " + grid_error};
      return fn(grid);
    };
  };
  report(7, "pipeline sanity", grid_guard(pipeline_sanity));
  report(8, "MKM vs TKM trend", grid_guard(method_trend));
  report(9, "LP/MPS round trips", file_round_trips);
  report(10, "determinism", [&] { return determinism(cli); });

  if (grid_error.empty()) fmt::print("desk grid: {:.1f} s\n", grid.seconds);
  fmt::print("{} of 10 criteria passed\n", 10 - failures);
  return unexpected == 0 ? 0 : 1;
}
