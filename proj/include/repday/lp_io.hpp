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

#ifndef REPDAY_LP_IO_HPP
#define REPDAY_LP_IO_HPP

// Text interchange with external solvers: CPLEX-style LP files, free MPS
// files, and `name value` solution files.
//
// Names are sanitized on export. Characters outside [A-Za-z0-9_.] become
// '_'; a name that starts with a digit or '.', is empty, or is a format
// keyword gets a leading '_'; names are cut at 255 characters; a name that
// then collides with an earlier one gets the suffix "_<k>" with the smallest
// free k >= 1. Variables and rows are separate namespaces and the row name
// "obj" is reserved for the objective.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "repday/milp.hpp"
#include "repday/problem.hpp"

namespace repday {

enum class FileFormat { LpText, Mps };

// Picks the format from the extension (.lp or .mps); throws ParameterError
// otherwise.
FileFormat format_from_path(const std::filesystem::path& path);

struct NameMap {
  std::vector<std::string> variables;
  std::vector<std::string> rows;
  // (original, exported) for every name changed by collision handling.
  std::vector<std::pair<std::string, std::string>> collisions;
  int renamed = 0;  // names changed for any reason
};

std::string sanitize_name(std::string_view name);
NameMap sanitized_names(const MilpProblem& problem);

std::string format_lp(const MilpProblem& problem);
std::string format_mps(const MilpProblem& problem);
MilpProblem parse_lp(std::string_view text);
MilpProblem parse_mps(std::string_view text);

NameMap export_problem(const MilpProblem& problem, const std::filesystem::path& path,
                       FileFormat format);
NameMap export_problem(const MilpProblem& problem, const std::filesystem::path& path);
MilpProblem import_problem(const std::filesystem::path& path);

// One `name value` pair per line using the exported names.
std::string format_solution(const MilpProblem& problem, std::span<const double> values);
void write_solution(const MilpProblem& problem, std::span<const double> values,
                    const std::filesystem::path& path);

// Reads a solution file written against the exported names of `problem`.
// Every variable must be present exactly once. The point is checked against
// all rows, bounds and integrality marks; an infeasible point is rejected
// with a SolveError citing the three worst violations.
MilpSolution parse_solution(const MilpProblem& problem, std::string_view text);
MilpSolution import_solution(const MilpProblem& problem, const std::filesystem::path& path);

}  // namespace repday

#endif  // REPDAY_LP_IO_HPP
