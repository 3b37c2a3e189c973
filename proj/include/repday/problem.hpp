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

#ifndef REPDAY_PROBLEM_HPP
#define REPDAY_PROBLEM_HPP

// A linear program with integrality marks: named bounded variables, named
// linear rows, and a minimization objective.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace repday {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Feasibility tolerance used for every acceptance check of a point: a row or
// bound may be violated by at most kFeasibilityAbsTol + kFeasibilityRelTol *
// |rhs|. Network rows are in pu on a 100 MVA base, so the absolute part is
// 1e-4 MW.
inline constexpr double kFeasibilityRelTol = 1e-6;
inline constexpr double kFeasibilityAbsTol = 1e-6;
inline constexpr double kIntegralityTol = 1e-6;

enum class VarType { Continuous, Integer, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  VarType type = VarType::Continuous;
  double objective = 0.0;

  bool is_integral() const { return type != VarType::Continuous; }
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

class MilpProblem {
 public:
  std::string name;

  int add_variable(std::string var_name, double lower, double upper,
                   VarType type = VarType::Continuous, double objective = 0.0);
  int add_row(std::string row_name, std::vector<Term> terms, RowSense sense,
              double rhs);

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Variable& variable(int j) const { return variables_[j]; }
  Variable& variable(int j) { return variables_[j]; }
  const Row& row(int i) const { return rows_[i]; }

  int find_variable(const std::string& var_name) const;  // -1 if absent
  int find_row(const std::string& row_name) const;       // -1 if absent

  bool has_integers() const;
  // Integer variables whose bounds still admit more than one value.
  std::size_t free_integer_count() const;
  std::size_t num_nonzeros() const;

  double objective_value(std::span<const double> x) const;

  // Throws BuildError on a dangling coefficient, lower > upper, a non-finite
  // coefficient, or duplicate names.
  void check() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, int> variable_index_;
  std::unordered_map<std::string, int> row_index_;
};

double row_activity(const Row& row, std::span<const double> x);

struct Violation {
  enum class Kind { Row, Bound, Integrality };
  Kind kind = Kind::Row;
  int index = 0;          // row or variable index
  std::string name;
  double amount = 0.0;    // beyond the allowed tolerance
};

// All violations of rows, bounds and integrality, largest first.
std::vector<Violation> find_violations(const MilpProblem& problem,
                                       std::span<const double> x,
                                       bool check_integrality = true);

}  // namespace repday

#endif  // REPDAY_PROBLEM_HPP
