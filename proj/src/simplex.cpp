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

#include "repday/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

#include "repday/error.hpp"

namespace repday {

const char* status_name(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::IterationLimit:
      return "iteration-limit";
  }
  return "?";
}

// Scaled column-major copy of the constraint matrix with costs and row
// right-hand sides. Row i reads  sum_j a_ij x_j + s_i = b_i  where the slack
// s_i carries the row sense as bounds.
struct SimplexData {
  SimplexOptions options;
  int n = 0;  // structural columns
  int m = 0;  // rows
  std::vector<int> col_start;
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<double> cost;       // scaled
  std::vector<double> rhs;        // scaled
  std::vector<double> slack_lower;
  std::vector<double> slack_upper;
  std::vector<double> row_scale;
  std::vector<double> col_scale;
  double cost_scale = 1.0;
  std::vector<double> orig_lower;
  std::vector<double> orig_upper;
  const MilpProblem* problem = nullptr;
};

struct SimplexSolver::Data : SimplexData {};

namespace {

double power_of_two(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(x))));
}

enum class VarState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

struct Eta {
  int row;
  double pivot;
  std::vector<int> index;
  std::vector<double> value;
};

class Engine {
 public:
  Engine(const SimplexData& d, std::span<const double> lower,
         std::span<const double> upper)
      : d_(d), n_(d.n), m_(d.m) {
    opts_ = d.options;
    max_iterations_ = opts_.max_iterations > 0
                          ? opts_.max_iterations
                          : 20 * (n_ + m_) + 10000;
    const int total = n_ + m_;
    lower_.resize(total);
    upper_.resize(total);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = lower[j] / d.col_scale[j];
      upper_[j] = upper[j] / d.col_scale[j];
    }
    for (int i = 0; i < m_; ++i) {
      lower_[n_ + i] = d.slack_lower[i];
      upper_[n_ + i] = d.slack_upper[i];
    }
  }

  LpSolution run() {
    LpSolution out;
    for (int j = 0; j < n_; ++j) {
      if (lower_[j] > upper_[j] + 1e-12 * std::max(1.0, std::abs(lower_[j]))) {
        out.status = LpStatus::Infeasible;
        return out;
      }
    }
    crash();
    // Phase one: drive the artificials to zero.
    cost_.assign(lower_.size(), 0.0);
    for (size_t j = static_cast<size_t>(n_ + m_); j < cost_.size(); ++j) cost_[j] = 1.0;
    Result phase1 = iterate();
    out.phase_one_iterations = iterations_;
    if (phase1 == Result::IterationLimit) return finish(out, LpStatus::IterationLimit);
    double infeasibility = 0.0;
    for (size_t j = static_cast<size_t>(n_ + m_); j < x_.size(); ++j) infeasibility += x_[j];
    double rhs_norm = 1.0;
    for (double b : d_.rhs) rhs_norm = std::max(rhs_norm, std::abs(b));
    if (infeasibility > 1e-8 * rhs_norm) return finish(out, LpStatus::Infeasible);

    for (size_t j = static_cast<size_t>(n_ + m_); j < x_.size(); ++j) {
      upper_[j] = 0.0;
      if (state_[j] != VarState::Basic) x_[j] = 0.0;
    }
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = d_.cost[j];
    Result phase2 = iterate();
    switch (phase2) {
      case Result::Optimal:
        return finish(out, LpStatus::Optimal);
      case Result::Unbounded:
        return finish(out, LpStatus::Unbounded);
      default:
        return finish(out, LpStatus::IterationLimit);
    }
  }

  int artificial_count() const { return static_cast<int>(lower_.size()) - n_ - m_; }

 private:
  enum class Result { Optimal, Unbounded, IterationLimit };

  // Column access ----------------------------------------------------------

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (int k = d_.col_start[j]; k < d_.col_start[j + 1]; ++k) f(d_.row_index[k], d_.value[k]);
    } else if (j < n_ + m_) {
      f(j - n_, 1.0);
    } else {
      const int a = j - n_ - m_;
      f(art_row_[a], art_sign_[a]);
    }
  }

  double dot_column(int j, const std::vector<double>& y) const {
    double s = 0.0;
    for_column(j, [&](int i, double v) { s += v * y[i]; });
    return s;
  }

  // Initial basis ----------------------------------------------------------

  void crash() {
    const int total = n_ + m_;
    x_.assign(total, 0.0);
    state_.assign(total, VarState::AtLower);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
        state_[j] = VarState::AtLower;
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
        state_[j] = VarState::AtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = VarState::FreeZero;
      }
    }
    std::vector<double> residual(d_.rhs);
    for (int j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (int k = d_.col_start[j]; k < d_.col_start[j + 1]; ++k)
        residual[d_.row_index[k]] -= d_.value[k] * x_[j];
    }
    basis_.assign(m_, -1);
    triangular_crash(residual);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0) continue;
      const int s = n_ + i;
      const double v = residual[i];
      if (v >= lower_[s] && v <= upper_[s]) {
        x_[s] = v;
        state_[s] = VarState::Basic;
        basis_[i] = s;
        continue;
      }
      // Slack parks at its violated bound; an artificial absorbs the rest.
      const double bound = v < lower_[s] ? lower_[s] : upper_[s];
      x_[s] = bound;
      state_[s] = v < lower_[s] ? VarState::AtLower : VarState::AtUpper;
      const double gap = v - bound;
      art_row_.push_back(i);
      art_sign_.push_back(gap >= 0.0 ? 1.0 : -1.0);
      lower_.push_back(0.0);
      upper_.push_back(kInfinity);
      x_.push_back(std::abs(gap));
      state_.push_back(VarState::Basic);
      basis_[i] = static_cast<int>(x_.size()) - 1;
    }
    refactor();
  }

  // Rows whose slack cannot absorb the residual take a structural column
  // instead of an artificial where possible. A column qualifies when its
  // other nonzeros lie in rows not yet claimed by a structural, which keeps
  // the crash basis triangular, and when the value that zeroes the row
  // residual respects its bounds.
  void triangular_crash(std::vector<double>& residual) {
    std::vector<int> row_start(m_ + 1, 0);
    for (int j = 0; j < n_; ++j)
      for (int k = d_.col_start[j]; k < d_.col_start[j + 1]; ++k) ++row_start[d_.row_index[k] + 1];
    for (int i = 0; i < m_; ++i) row_start[i + 1] += row_start[i];
    std::vector<int> row_col(row_start.back());
    std::vector<double> row_val(row_start.back());
    std::vector<int> fill(row_start.begin(), row_start.end() - 1);
    for (int j = 0; j < n_; ++j)
      for (int k = d_.col_start[j]; k < d_.col_start[j + 1]; ++k) {
        const int i = d_.row_index[k];
        row_col[fill[i]] = j;
        row_val[fill[i]++] = d_.value[k];
      }

    std::vector<char> claimed(m_, 0);
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      if (residual[i] >= lower_[s] && residual[i] <= upper_[s]) continue;
      int best = -1;
      double best_coef = 0.0, best_value = 0.0;
      for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
        const int j = row_col[k];
        const double a = row_val[k];
        if (state_[j] == VarState::Basic || lower_[j] == upper_[j] || std::abs(a) <= best_coef ||
            std::abs(a) < 1e-3)
          continue;
        const double v = x_[j] + residual[i] / a;
        if (v < lower_[j] || v > upper_[j]) continue;
        // The move must not push another row outside what its slack absorbs.
        const double delta = v - x_[j];
        bool ok = true;
        for (int q = d_.col_start[j]; q < d_.col_start[j + 1] && ok; ++q) {
          const int r = d_.row_index[q];
          if (r == i) continue;
          const double before = residual[r];
          const double after = before - d_.value[q] * delta;
          const bool absorbed = before >= lower_[n_ + r] && before <= upper_[n_ + r];
          ok = !claimed[r] && (!absorbed || (after >= lower_[n_ + r] && after <= upper_[n_ + r]));
        }
        if (!ok) continue;
        best = j;
        best_coef = std::abs(a);
        best_value = v;
      }
      if (best < 0) continue;
      const double delta = best_value - x_[best];
      for (int q = d_.col_start[best]; q < d_.col_start[best + 1]; ++q)
        residual[d_.row_index[q]] -= d_.value[q] * delta;
      residual[i] = 0.0;
      x_[best] = best_value;
      state_[best] = VarState::Basic;
      basis_[i] = best;
      claimed[i] = 1;
      x_[s] = 0.0;
      state_[s] = lower_[s] == 0.0 ? VarState::AtLower : VarState::AtUpper;
    }
  }

  // Factorization ----------------------------------------------------------

  void refactor() {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(m_) * 3);
    for (int i = 0; i < m_; ++i)
      for_column(basis_[i], [&](int r, double v) { triplets.emplace_back(r, i, v); });
    Eigen::SparseMatrix<double> b(m_, m_);
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.makeCompressed();
    lu_.analyzePattern(b);
    lu_.factorize(b);
    if (lu_.info() != Eigen::Success)
      throw SolveError("simplex basis became singular: " + lu_.lastErrorMessage());
    etas_.clear();
    ++refactorizations_;
  }

  void ftran(Eigen::VectorXd& v) const {
    v = lu_.solve(v);
    for (const Eta& e : etas_) {
      const double t = v[e.row] / e.pivot;
      if (t != 0.0)
        for (size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * t;
      v[e.row] = t;
    }
  }

  void btran(Eigen::VectorXd& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->row];
      for (size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
      v[it->row] = s / it->pivot;
    }
    v = lu_.transpose().solve(v);
  }

  void recompute_basics() {
    Eigen::VectorXd r(m_);
    for (int i = 0; i < m_; ++i) r[i] = d_.rhs[i];
    for (size_t j = 0; j < x_.size(); ++j) {
      if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(static_cast<int>(j), [&](int i, double v) { r[i] -= v * xj; });
    }
    ftran(r);
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = r[i];
  }

  // Iterations -------------------------------------------------------------

  Result iterate() {
    Eigen::VectorXd y(m_);
    Eigen::VectorXd w(m_);
    std::vector<double> yv(m_);
    int degenerate_run = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= max_iterations_) return Result::IterationLimit;
      if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
        refactor();
        recompute_basics();
      }
      for (int i = 0; i < m_; ++i) y[i] = cost_[basis_[i]];
      btran(y);
      for (int i = 0; i < m_; ++i) yv[i] = y[i];

      // Pricing: Dantzig, or lowest eligible index under Bland's rule.
      int entering = -1;
      double best = 0.0;
      int direction = 0;
      const int total = static_cast<int>(x_.size());
      for (int j = 0; j < total; ++j) {
        const VarState st = state_[j];
        if (st == VarState::Basic || lower_[j] == upper_[j]) continue;
        const double dj = cost_[j] - dot_column(j, yv);
        int dir = 0;
        if (st == VarState::AtLower && dj < -opts_.dual_tolerance) dir = 1;
        else if (st == VarState::AtUpper && dj > opts_.dual_tolerance) dir = -1;
        else if (st == VarState::FreeZero && std::abs(dj) > opts_.dual_tolerance) dir = dj < 0 ? 1 : -1;
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) {
        if (!etas_.empty()) {
          // Confirm optimality on a fresh factorization.
          refactor();
          recompute_basics();
          continue;
        }
        return Result::Optimal;
      }

      w.setZero();
      for_column(entering, [&](int i, double v) { w[i] = v; });
      ftran(w);

      // Harris two-pass ratio test.
      const double delta = opts_.primal_tolerance;
      double relaxed_max = kInfinity;
      for (int i = 0; i < m_; ++i) {
        const double wi = w[i];
        if (std::abs(wi) <= opts_.pivot_tolerance) continue;
        const double alpha = -direction * wi;
        const int b = basis_[i];
        double limit = kInfinity;
        if (alpha < 0.0 && std::isfinite(lower_[b])) limit = (x_[b] - lower_[b] + delta) / -alpha;
        else if (alpha > 0.0 && std::isfinite(upper_[b])) limit = (upper_[b] - x_[b] + delta) / alpha;
        relaxed_max = std::min(relaxed_max, limit);
      }
      const double flip = upper_[entering] - lower_[entering];
      if (!std::isfinite(relaxed_max) && !std::isfinite(flip)) return Result::Unbounded;

      int leave = -1;
      double step = 0.0;
      if (std::isfinite(flip) && flip <= relaxed_max) {
        step = flip;
      } else {
        double best_pivot = 0.0;
        double best_ratio = kInfinity;
        for (int i = 0; i < m_; ++i) {
          const double wi = w[i];
          if (std::abs(wi) <= opts_.pivot_tolerance) continue;
          const double alpha = -direction * wi;
          const int b = basis_[i];
          double ratio;
          if (alpha < 0.0 && std::isfinite(lower_[b])) ratio = (x_[b] - lower_[b]) / -alpha;
          else if (alpha > 0.0 && std::isfinite(upper_[b])) ratio = (upper_[b] - x_[b]) / alpha;
          else continue;
          if (ratio > relaxed_max) continue;
          if (bland) {
            if (ratio < best_ratio - delta ||
                (ratio <= best_ratio + delta && (leave < 0 || b < basis_[leave]))) {
              best_ratio = std::min(ratio, best_ratio);
              leave = i;
            }
          } else if (std::abs(wi) > best_pivot) {
            best_pivot = std::abs(wi);
            leave = i;
          }
        }
        if (leave < 0) return Result::Unbounded;
        const double alpha = -direction * w[leave];
        const int b = basis_[leave];
        step = alpha < 0.0 ? (x_[b] - lower_[b]) / -alpha : (upper_[b] - x_[b]) / alpha;
        step = std::max(step, 0.0);
      }

      // Apply the step.
      ++iterations_;
      if (step > delta) {
        degenerate_run = 0;
        bland = false;
      } else if (++degenerate_run > opts_.degenerate_limit) {
        bland = true;
        used_bland_ = true;
      }
      const double signed_step = direction * step;
      if (signed_step != 0.0) {
        x_[entering] += signed_step;
        for (int i = 0; i < m_; ++i)
          if (w[i] != 0.0) x_[basis_[i]] -= signed_step * w[i];
      }
      if (leave < 0) {
        // Bound flip: the entering variable crosses to its other bound.
        state_[entering] = direction > 0 ? VarState::AtUpper : VarState::AtLower;
        x_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
        continue;
      }
      const int out = basis_[leave];
      const double alpha = -direction * w[leave];
      if (alpha < 0.0) {
        x_[out] = lower_[out];
        state_[out] = VarState::AtLower;
      } else {
        x_[out] = upper_[out];
        state_[out] = VarState::AtUpper;
      }
      if (out >= n_ + m_) {
        // A departed artificial never returns.
        upper_[out] = 0.0;
        x_[out] = 0.0;
        state_[out] = VarState::AtLower;
      }
      basis_[leave] = entering;
      state_[entering] = VarState::Basic;

      Eta eta;
      eta.row = leave;
      eta.pivot = w[leave];
      for (int i = 0; i < m_; ++i) {
        if (i == leave || std::abs(w[i]) < 1e-14) continue;
        eta.index.push_back(i);
        eta.value.push_back(w[i]);
      }
      etas_.push_back(std::move(eta));
    }
  }

  // Extraction -------------------------------------------------------------

  LpSolution& finish(LpSolution& out, LpStatus status) {
    out.status = status;
    out.iterations = iterations_;
    out.used_bland = used_bland_;
    if (status != LpStatus::Optimal) return out;

    const MilpProblem& p = *d_.problem;
    out.values.resize(n_);
    for (int j = 0; j < n_; ++j) out.values[j] = x_[j] * d_.col_scale[j];
    // Nonbasic structurals sit exactly on their original bounds.
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == VarState::AtLower) out.values[j] = orig_lower(j);
      else if (state_[j] == VarState::AtUpper) out.values[j] = orig_upper(j);
    }
    out.objective = p.objective_value(out.values);

    Eigen::VectorXd y(m_);
    for (int i = 0; i < m_; ++i) y[i] = cost_[basis_[i]];
    btran(y);
    out.row_duals.resize(m_);
    for (int i = 0; i < m_; ++i) out.row_duals[i] = y[i] * d_.row_scale[i] / d_.cost_scale;
    out.reduced_costs.resize(n_);
    std::vector<double> yv(out.row_duals);
    for (int j = 0; j < n_; ++j) {
      double s = 0.0;
      for (const auto& r : column_terms(j)) s += r.second * yv[r.first];
      out.reduced_costs[j] = p.variable(j).objective - s;
    }

    // Dual bound: b'y plus the bound terms of every reduced cost.
    double bound = 0.0;
    auto bound_term = [](double dj, double lo, double up) {
      if (dj > 0.0) return std::isfinite(lo) ? dj * lo : -kInfinity;
      if (dj < 0.0) return std::isfinite(up) ? dj * up : -kInfinity;
      return 0.0;
    };
    for (int i = 0; i < m_; ++i) {
      const Row& r = p.row(i);
      bound += r.rhs * out.row_duals[i];
      double lo = 0.0, up = 0.0;
      if (r.sense == RowSense::LessEqual) up = kInfinity;
      if (r.sense == RowSense::GreaterEqual) lo = -kInfinity;
      // Slack column is e_i with zero cost: reduced cost -y_i.
      const double dj = -out.row_duals[i];
      if (std::abs(dj) > 1e-9) bound += bound_term(dj, lo, up);
    }
    for (int j = 0; j < n_; ++j) {
      const double dj = out.reduced_costs[j];
      if (std::abs(dj) <= 1e-9) continue;
      bound += bound_term(dj, orig_lower(j), orig_upper(j));
    }
    out.dual_bound = bound;

    for (int i = 0; i < m_; ++i) {
      const Row& r = p.row(i);
      const double act = row_activity(r, out.values);
      double excess = 0.0;
      if (r.sense != RowSense::GreaterEqual) excess = std::max(excess, act - r.rhs);
      if (r.sense != RowSense::LessEqual) excess = std::max(excess, r.rhs - act);
      out.max_primal_residual = std::max(out.max_primal_residual, excess);
    }
    for (int j = 0; j < n_; ++j) {
      const double v = out.values[j];
      out.max_bound_violation =
          std::max({out.max_bound_violation, orig_lower(j) - v, v - orig_upper(j)});
    }
    return out;
  }

  double orig_lower(int j) const { return lower_[j] * d_.col_scale[j]; }
  double orig_upper(int j) const { return upper_[j] * d_.col_scale[j]; }

  std::vector<std::pair<int, double>> column_terms(int j) const {
    std::vector<std::pair<int, double>> out;
    for (int k = d_.col_start[j]; k < d_.col_start[j + 1]; ++k)
      out.emplace_back(d_.row_index[k],
                       d_.value[k] / (d_.row_scale[d_.row_index[k]] * d_.col_scale[j]));
    return out;
  }

  const SimplexData& d_;
  SimplexOptions opts_;
  int n_;
  int m_;
  int max_iterations_ = 0;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<double> cost_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  int iterations_ = 0;
  int refactorizations_ = 0;
  bool used_bland_ = false;
};

}  // namespace

SimplexSolver::SimplexSolver(const MilpProblem& problem, SimplexOptions options)
    : data_(std::make_unique<Data>()) {
  problem.check();
  Data& d = *data_;
  d.options = options;
  d.problem = &problem;
  d.n = static_cast<int>(problem.num_variables());
  d.m = static_cast<int>(problem.num_rows());

  // Column-major copy, merging duplicate entries.
  std::vector<std::vector<std::pair<int, double>>> columns(d.n);
  for (int i = 0; i < d.m; ++i)
    for (const Term& t : problem.row(i).terms)
      if (t.coef != 0.0) columns[t.var].emplace_back(i, t.coef);
  d.col_start.assign(d.n + 1, 0);
  for (int j = 0; j < d.n; ++j) {
    auto& col = columns[j];
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t k = 0; k < col.size(); ++k) {
      if (!d.row_index.empty() && static_cast<int>(d.row_index.size()) > d.col_start[j] &&
          d.row_index.back() == col[k].first) {
        d.value.back() += col[k].second;
        continue;
      }
      d.row_index.push_back(col[k].first);
      d.value.push_back(col[k].second);
    }
    d.col_start[j + 1] = static_cast<int>(d.row_index.size());
  }

  d.row_scale.assign(d.m, 1.0);
  d.col_scale.assign(d.n, 1.0);
  if (options.scaling) {
    // Geometric-mean passes, then rounding to powers of two so scaling is
    // exact in floating point.
    std::vector<double> rmin(d.m), rmax(d.m);
    for (int pass = 0; pass < 6; ++pass) {
      std::fill(rmin.begin(), rmin.end(), kInfinity);
      std::fill(rmax.begin(), rmax.end(), 0.0);
      for (int j = 0; j < d.n; ++j)
        for (int k = d.col_start[j]; k < d.col_start[j + 1]; ++k) {
          const int i = d.row_index[k];
          const double a = std::abs(d.value[k]) * d.row_scale[i] * d.col_scale[j];
          rmin[i] = std::min(rmin[i], a);
          rmax[i] = std::max(rmax[i], a);
        }
      for (int i = 0; i < d.m; ++i)
        if (rmax[i] > 0.0) d.row_scale[i] /= std::sqrt(rmin[i] * rmax[i]);
      for (int j = 0; j < d.n; ++j) {
        double cmin = kInfinity, cmax = 0.0;
        for (int k = d.col_start[j]; k < d.col_start[j + 1]; ++k) {
          const double a = std::abs(d.value[k]) * d.row_scale[d.row_index[k]] * d.col_scale[j];
          cmin = std::min(cmin, a);
          cmax = std::max(cmax, a);
        }
        if (cmax > 0.0) d.col_scale[j] /= std::sqrt(cmin * cmax);
      }
    }
    for (double& r : d.row_scale) r = power_of_two(r);
    for (double& c : d.col_scale) c = power_of_two(c);
  }
  for (int j = 0; j < d.n; ++j)
    for (int k = d.col_start[j]; k < d.col_start[j + 1]; ++k)
      d.value[k] *= d.row_scale[d.row_index[k]] * d.col_scale[j];

  d.cost.resize(d.n);
  double cmax = 0.0;
  for (int j = 0; j < d.n; ++j) {
    d.cost[j] = problem.variable(j).objective * d.col_scale[j];
    cmax = std::max(cmax, std::abs(d.cost[j]));
  }
  d.cost_scale = options.scaling && cmax > 0.0 ? power_of_two(1.0 / cmax) : 1.0;
  for (double& c : d.cost) c *= d.cost_scale;

  d.rhs.resize(d.m);
  d.slack_lower.resize(d.m);
  d.slack_upper.resize(d.m);
  for (int i = 0; i < d.m; ++i) {
    const Row& r = problem.row(i);
    d.rhs[i] = r.rhs * d.row_scale[i];
    switch (r.sense) {
      case RowSense::LessEqual:
        d.slack_lower[i] = 0.0;
        d.slack_upper[i] = kInfinity;
        break;
      case RowSense::GreaterEqual:
        d.slack_lower[i] = -kInfinity;
        d.slack_upper[i] = 0.0;
        break;
      case RowSense::Equal:
        d.slack_lower[i] = 0.0;
        d.slack_upper[i] = 0.0;
        break;
    }
  }
  d.orig_lower.resize(d.n);
  d.orig_upper.resize(d.n);
  for (int j = 0; j < d.n; ++j) {
    d.orig_lower[j] = problem.variable(j).lower;
    d.orig_upper[j] = problem.variable(j).upper;
  }
}

SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LpSolution SimplexSolver::solve() const {
  return solve(data_->orig_lower, data_->orig_upper);
}

LpSolution SimplexSolver::solve(std::span<const double> lower,
                                std::span<const double> upper) const {
  if (lower.size() != static_cast<size_t>(data_->n) || upper.size() != lower.size())
    throw ParameterError("bound vectors do not match the problem size");
  Engine engine(*data_, lower, upper);
  return engine.run();
}

LpSolution solve_lp(const MilpProblem& problem, const SimplexOptions& options) {
  return SimplexSolver(problem, options).solve();
}

}  // namespace repday
