#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "exnet/error.hpp"
#include "exnet/rational.hpp"

namespace exnet::solver {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs{0};
};

// maximize objective . x  subject to rows and x >= lower bounds.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t variables) : objective_(variables), lower_(variables) {}

  std::size_t variable_count() const { return objective_.size(); }
  std::size_t constraint_count() const { return rows_.size(); }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<Rational>& lower_bounds() const { return lower_; }
  const std::vector<LinearConstraint>& constraints() const { return rows_; }

  void set_objective(std::size_t var, const Rational& c) { objective_.at(var) = c; }
  void set_lower_bound(std::size_t var, const Rational& l) { lower_.at(var) = l; }

  void add_constraint(std::vector<Rational> coeffs, Relation rel, const Rational& rhs) {
    if (coeffs.size() != objective_.size())
      throw ContractViolation("constraint has " + std::to_string(coeffs.size()) + " coefficients, program has " +
                              std::to_string(objective_.size()) + " variables");
    rows_.push_back({std::move(coeffs), rel, rhs});
  }

  void add_sparse_constraint(const std::vector<std::pair<std::size_t, Rational>>& terms, Relation rel, const Rational& rhs) {
    std::vector<Rational> coeffs(objective_.size());
    for (const auto& [var, c] : terms) coeffs.at(var) += c;
    add_constraint(std::move(coeffs), rel, rhs);
  }

  Rational evaluate(const std::vector<Rational>& x) const {
    Rational v{0};
    for (std::size_t j = 0; j < x.size(); ++j) v += objective_[j] * x[j];
    return v;
  }

  // Exact re-substitution of a candidate point.
  bool satisfied_by(const std::vector<Rational>& x) const {
    if (x.size() != objective_.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] < lower_[j]) return false;
    for (const auto& row : rows_) {
      Rational lhs{0};
      for (std::size_t j = 0; j < x.size(); ++j)
        if (row.coeffs[j] != 0) lhs += row.coeffs[j] * x[j];
      switch (row.relation) {
        case Relation::LessEqual:
          if (lhs > row.rhs) return false;
          break;
        case Relation::Equal:
          if (lhs != row.rhs) return false;
          break;
        case Relation::GreaterEqual:
          if (lhs < row.rhs) return false;
          break;
      }
    }
    return true;
  }

 private:
  std::vector<Rational> objective_;
  std::vector<Rational> lower_;
  std::vector<LinearConstraint> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value{0};
  std::vector<Rational> point;
};

namespace detail {

// Dense tableau in canonical form: basic columns are unit vectors, the last
// column holds the basic values.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), t_(rows, std::vector<Rational>(cols + 1)), basis_(rows) {}

  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  Rational& rhs(std::size_t r) { return t_[r][cols_]; }
  std::size_t& basic(std::size_t r) { return basis_[r]; }

  void pivot(std::size_t r, std::size_t e) {
    Rational p = t_[r][e];
    for (auto& v : t_[r])
      if (v != 0) v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || t_[i][e] == 0) continue;
      Rational f = t_[i][e];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = e;
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  // Primal simplex with Bland's rule: entering is the lowest-index improving
  // column, leaving breaks ratio ties by the lowest basic index.
  // Returns false on unboundedness.
  bool maximize(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
    std::vector<bool> in_basis(cols_);
    for (;;) {
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (std::size_t b : basis_) in_basis[b] = true;
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_ && entering == cols_; ++j) {
        if (!allowed[j] || in_basis[j]) continue;
        Rational d = cost[j];
        for (std::size_t i = 0; i < t_.size(); ++i)
          if (t_[i][j] != 0 && cost[basis_[i]] != 0) d -= cost[basis_[i]] * t_[i][j];
        if (d > 0) entering = j;
      }
      if (entering == cols_) return true;

      std::size_t leave = t_.size();
      Rational best;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][entering] <= 0) continue;
        Rational ratio = t_[i][cols_] / t_[i][entering];
        if (leave == t_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == t_.size()) return false;
      pivot(leave, entering);
    }
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Exact two-phase simplex.
inline LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.variable_count();
  const auto& lower = lp.lower_bounds();

  struct Row {
    std::vector<Rational> a;
    Relation rel;
    Rational b;
  };
  std::vector<Row> rows;
  rows.reserve(lp.constraint_count());
  for (const auto& c : lp.constraints()) {
    Row r{c.coeffs, c.relation, c.rhs};
    for (std::size_t j = 0; j < n; ++j)
      if (r.a[j] != 0 && lower[j] != 0) r.b -= r.a[j] * lower[j];
    if (r.b < 0) {
      for (auto& v : r.a) v = -v;
      r.b = -r.b;
      if (r.rel == Relation::LessEqual)
        r.rel = Relation::GreaterEqual;
      else if (r.rel == Relation::GreaterEqual)
        r.rel = Relation::LessEqual;
    }
    rows.push_back(std::move(r));
  }

  const std::size_t m = rows.size();
  std::size_t slack_count = 0, art_count = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::Equal) ++slack_count;
    if (r.rel != Relation::LessEqual) ++art_count;
  }
  const std::size_t art_begin = n + slack_count;
  const std::size_t cols = art_begin + art_count;

  detail::Tableau tab(m, cols);
  std::size_t next_slack = n, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = rows[i].a[j];
    tab.rhs(i) = rows[i].b;
    switch (rows[i].rel) {
      case Relation::LessEqual:
        tab.at(i, next_slack) = 1;
        tab.basic(i) = next_slack++;
        break;
      case Relation::GreaterEqual:
        tab.at(i, next_slack++) = -1;
        tab.at(i, next_art) = 1;
        tab.basic(i) = next_art++;
        break;
      case Relation::Equal:
        tab.at(i, next_art) = 1;
        tab.basic(i) = next_art++;
        break;
    }
  }

  LpResult result;
  std::vector<bool> allowed(cols, true);
  if (art_count > 0) {
    std::vector<Rational> phase1(cols);
    for (std::size_t j = art_begin; j < cols; ++j) phase1[j] = -1;
    tab.maximize(phase1, allowed);
    Rational infeasibility{0};
    for (std::size_t i = 0; i < tab.rows(); ++i)
      if (tab.basic(i) >= art_begin) infeasibility += tab.rhs(i);
    if (infeasibility != 0) return result;

    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basic(i) < art_begin) {
        ++i;
        continue;
      }
      std::size_t j = 0;
      while (j < art_begin && tab.at(i, j) == 0) ++j;
      if (j < art_begin) {
        tab.pivot(i, j);
        ++i;
      } else {
        tab.drop_row(i);
      }
    }
    for (std::size_t j = art_begin; j < cols; ++j) allowed[j] = false;
  }

  std::vector<Rational> phase2(cols);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.objective()[j];
  if (!tab.maximize(phase2, allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.point = lower;
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basic(i) < n) result.point[tab.basic(i)] += tab.rhs(i);
  result.value = lp.evaluate(result.point);
  return result;
}

}  // namespace exnet::solver
