#ifndef DGSCHED_LP_HPP
#define DGSCHED_LP_HPP

// Small dense two-phase simplex with Bland's rule. Meant for the capacity
// oracle's tiny programs (tens of rows, a few hundred columns).

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace dgsched::lp {

enum class Sense { LessEq, Equal, GreaterEq };

struct Constraint {
  std::vector<std::pair<std::size_t, double>> terms;
  Sense sense = Sense::LessEq;
  double rhs = 0.0;
};

/// maximize objective . x  subject to constraints, x >= 0
struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;

  std::size_t add_var(double cost = 0.0) {
    objective.push_back(cost);
    return num_vars++;
  }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

namespace detail {

class Tableau {
public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), t_(rows, std::vector<double>(cols + 1, 0.0)), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  double& rhs(std::size_t r) { return t_[r][cols_]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t e) {
    const double p = t_[r][e];
    for (double& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r) continue;
      const double f = t_[i][e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = e;
  }

  /// Runs simplex iterations for `cost` restricted to columns with
  /// allowed[j]. Returns false if unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& allowed, double tol) {
    for (std::size_t iter = 0; iter < 200000; ++iter) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
        if (!allowed[j]) continue;
        double d = cost[j];
        for (std::size_t i = 0; i < t_.size(); ++i) d -= cost[basis_[i]] * t_[i][j];
        if (d > tol) enter = j;
      }
      if (enter == cols_) return true;
      std::size_t leave = t_.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][enter] <= tol) continue;
        const double ratio = t_[i][cols_] / t_[i][enter];
        if (ratio < best - tol || (std::abs(ratio - best) <= tol && leave < t_.size() && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == t_.size()) return false;
      pivot(leave, enter);
    }
    return true;
  }

  double value(const std::vector<double>& cost) {
    double v = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) v += cost[basis_[i]] * t_[i][cols_];
    return v;
  }

private:
  std::size_t cols_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
};

} // namespace detail

inline Solution maximize(const Problem& p, double tol = 1e-9) {
  const std::size_t m = p.constraints.size();
  const std::size_t n = p.num_vars;

  // Column layout: originals | one slack/surplus per inequality | artificials.
  std::size_t slack_count = 0;
  std::size_t art_count = 0;
  std::vector<Sense> sense(m);
  std::vector<double> sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = p.constraints[i].sense;
    if (p.constraints[i].rhs < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == Sense::LessEq) sense[i] = Sense::GreaterEq;
      else if (sense[i] == Sense::GreaterEq) sense[i] = Sense::LessEq;
    }
    if (sense[i] != Sense::Equal) ++slack_count;
    if (sense[i] != Sense::LessEq) ++art_count;
  }
  const std::size_t cols = n + slack_count + art_count;
  detail::Tableau tab(m, cols);
  std::size_t next_slack = n;
  std::size_t next_art = n + slack_count;
  for (std::size_t i = 0; i < m; ++i) {
    for (auto [j, a] : p.constraints[i].terms) tab.at(i, j) += sign[i] * a;
    tab.rhs(i) = sign[i] * p.constraints[i].rhs;
    if (sense[i] == Sense::LessEq) {
      tab.at(i, next_slack) = 1.0;
      tab.basis(i) = next_slack++;
    } else {
      if (sense[i] == Sense::GreaterEq) tab.at(i, next_slack++) = -1.0;
      tab.at(i, next_art) = 1.0;
      tab.basis(i) = next_art++;
    }
  }

  Solution sol;
  std::vector<bool> allowed(cols, true);
  if (art_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = n + slack_count; j < cols; ++j) phase1[j] = -1.0;
    tab.optimize(phase1, allowed, tol);
    if (tab.value(phase1) < -1e-7) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive remaining (zero-valued) artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis(i) < n + slack_count) continue;
      for (std::size_t j = 0; j < n + slack_count; ++j)
        if (std::abs(tab.at(i, j)) > tol) {
          tab.pivot(i, j);
          break;
        }
    }
    for (std::size_t j = n + slack_count; j < cols; ++j) allowed[j] = false;
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = p.objective[j];
  if (!tab.optimize(cost, allowed, tol)) {
    sol.status = Status::Unbounded;
    return sol;
  }
  sol.status = Status::Optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis(i) < n) sol.x[tab.basis(i)] = tab.rhs(i);
  sol.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.value += p.objective[j] * sol.x[j];
  return sol;
}

} // namespace dgsched::lp

#endif // DGSCHED_LP_HPP
