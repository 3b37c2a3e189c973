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

#include "repday/problem.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "repday/error.hpp"

namespace repday {

int MilpProblem::add_variable(std::string var_name, double lower, double upper,
                              VarType type, double objective) {
  const int index = static_cast<int>(variables_.size());
  if (type == VarType::Binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  auto [it, inserted] = variable_index_.emplace(var_name, index);
  if (!inserted) throw BuildError(fmt::format("duplicate variable name '{}'", var_name));
  variables_.push_back({std::move(var_name), lower, upper, type, objective});
  return index;
}

int MilpProblem::add_row(std::string row_name, std::vector<Term> terms,
                         RowSense sense, double rhs) {
  const int index = static_cast<int>(rows_.size());
  auto [it, inserted] = row_index_.emplace(row_name, index);
  if (!inserted) throw BuildError(fmt::format("duplicate row name '{}'", row_name));
  rows_.push_back({std::move(row_name), std::move(terms), sense, rhs});
  return index;
}

int MilpProblem::find_variable(const std::string& var_name) const {
  auto it = variable_index_.find(var_name);
  return it == variable_index_.end() ? -1 : it->second;
}

int MilpProblem::find_row(const std::string& row_name) const {
  auto it = row_index_.find(row_name);
  return it == row_index_.end() ? -1 : it->second;
}

bool MilpProblem::has_integers() const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [](const Variable& v) { return v.is_integral(); });
}

std::size_t MilpProblem::free_integer_count() const {
  std::size_t count = 0;
  for (const auto& v : variables_)
    if (v.is_integral() && std::floor(v.upper) > std::ceil(v.lower)) ++count;
  return count;
}

std::size_t MilpProblem::num_nonzeros() const {
  std::size_t nnz = 0;
  for (const auto& r : rows_) nnz += r.terms.size();
  return nnz;
}

double MilpProblem::objective_value(std::span<const double> x) const {
  double sum = 0.0;
  for (size_t j = 0; j < variables_.size(); ++j) sum += variables_[j].objective * x[j];
  return sum;
}

void MilpProblem::check() const {
  const int n = static_cast<int>(variables_.size());
  for (const auto& v : variables_) {
    if (v.lower > v.upper)
      throw BuildError(fmt::format("variable '{}' has lower bound {} above upper bound {}",
                                   v.name, v.lower, v.upper));
    if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.objective))
      throw BuildError(fmt::format("variable '{}' has an invalid bound or cost", v.name));
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs))
      throw BuildError(fmt::format("row '{}' has a non-finite right-hand side", r.name));
    for (const auto& t : r.terms) {
      if (t.var < 0 || t.var >= n)
        throw BuildError(fmt::format("row '{}' references unknown variable {}", r.name, t.var));
      if (!std::isfinite(t.coef))
        throw BuildError(fmt::format("row '{}' has a non-finite coefficient", r.name));
    }
  }
}

double row_activity(const Row& row, std::span<const double> x) {
  double sum = 0.0;
  for (const auto& t : row.terms) sum += t.coef * x[t.var];
  return sum;
}

std::vector<Violation> find_violations(const MilpProblem& problem,
                                       std::span<const double> x,
                                       bool check_integrality) {
  std::vector<Violation> out;
  auto allowed = [](double reference) {
    return kFeasibilityAbsTol + kFeasibilityRelTol * std::abs(reference);
  };
  for (size_t i = 0; i < problem.num_rows(); ++i) {
    const Row& r = problem.row(static_cast<int>(i));
    const double activity = row_activity(r, x);
    double excess = 0.0;
    if (r.sense != RowSense::GreaterEqual) excess = std::max(excess, activity - r.rhs);
    if (r.sense != RowSense::LessEqual) excess = std::max(excess, r.rhs - activity);
    if (excess > allowed(r.rhs))
      out.push_back({Violation::Kind::Row, static_cast<int>(i), r.name, excess});
  }
  for (size_t j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variable(static_cast<int>(j));
    double excess = std::max(v.lower - x[j], x[j] - v.upper);
    const double ref = x[j] < v.lower ? v.lower : v.upper;
    if (excess > allowed(ref))
      out.push_back({Violation::Kind::Bound, static_cast<int>(j), v.name, excess});
    if (check_integrality && v.is_integral()) {
      const double gap = std::abs(x[j] - std::round(x[j]));
      if (gap > kIntegralityTol)
        out.push_back({Violation::Kind::Integrality, static_cast<int>(j), v.name, gap});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return a.amount > b.amount;
  });
  return out;
}

}  // namespace repday
