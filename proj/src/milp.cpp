// SPDX-License-Identifier: Apache-2.0

#include "linebal/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <string>

#include "linebal/errors.hpp"

namespace linebal::milp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kRatioTieTol = 1e-12;
constexpr double kImprovementTol = 1e-9;

bool is_finite(double v) { return std::isfinite(v); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Dense simplex tableau in standard form. Columns are laid out as
// [structural | slack/surplus | artificial]; the last cell of each row and of
// the objective row holds the rhs / negated objective value.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols, std::size_t real_cols)
      : rows_(rows),
        cols_(cols),
        real_cols_(real_cols),
        stride_(cols + 1),
        a_(rows * (cols + 1), 0.0),
        obj_(cols + 1, 0.0),
        basis_(rows, -1) {
    degenerate_limit_ = 3 * static_cast<long>(rows + cols);
    pivot_limit_ = 1000 + 200 * static_cast<long>(rows + cols);
  }

  double& at(std::size_t i, std::size_t j) { return a_[i * stride_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * stride_ + j]; }
  double& rhs(std::size_t i) { return a_[i * stride_ + cols_]; }
  double rhs(std::size_t i) const { return a_[i * stride_ + cols_]; }

  std::size_t rows() const { return rows_; }
  std::size_t real_cols() const { return real_cols_; }
  int basis(std::size_t i) const { return basis_[i]; }
  void set_basis(std::size_t i, int j) { basis_[i] = j; }

  void reset_objective() { std::fill(obj_.begin(), obj_.end(), 0.0); }
  double& obj(std::size_t j) { return obj_[j]; }

  // Zeroes the reduced costs of the current basic columns.
  void price_out_basis() {
    for (std::size_t i = 0; i < rows_; ++i) {
      const int b = basis_[i];
      const double f = obj_[static_cast<std::size_t>(b)];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * at(i, j);
      obj_[static_cast<std::size_t>(b)] = 0.0;
    }
  }

  double objective_value() const { return -obj_[cols_]; }

  void pivot(std::size_t row, std::size_t col) {
    const double inv = 1.0 / at(row, col);
    for (std::size_t j = 0; j <= cols_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    const double f = obj_[col];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * at(row, j);
      obj_[col] = 0.0;
    }
    basis_[row] = static_cast<int>(col);
  }

  // Drops row `i` (used for redundant rows left by phase 1).
  void remove_row(std::size_t i) {
    if (i != rows_ - 1) {
      std::copy(a_.begin() + static_cast<long>((rows_ - 1) * stride_),
                a_.begin() + static_cast<long>(rows_ * stride_),
                a_.begin() + static_cast<long>(i * stride_));
      basis_[i] = basis_[rows_ - 1];
    }
    --rows_;
    a_.resize(rows_ * stride_);
    basis_.resize(rows_);
  }

  enum class Outcome { Optimal, Unbounded };

  // Runs the simplex loop to optimality. Only columns below real_cols_ may
  // enter, so artificials never re-enter the basis.
  Outcome optimize() {
    for (;;) {
      const int enter = pick_entering();
      if (enter < 0) return Outcome::Optimal;
      const int leave = pick_leaving(static_cast<std::size_t>(enter));
      if (leave < 0) return Outcome::Unbounded;
      if (rhs(static_cast<std::size_t>(leave)) <= kPivotTol) {
        if (++degenerate_pivots_ > degenerate_limit_) bland_ = true;
      }
      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
      if (++pivots_ > pivot_limit_) throw SolverError("simplex iteration limit exceeded");
    }
  }

 private:
  int pick_entering() const {
    int best = -1;
    double best_cost = -kReducedCostTol;
    for (std::size_t j = 0; j < real_cols_; ++j) {
      const double c = obj_[j];
      if (c >= -kReducedCostTol) continue;
      if (bland_) return static_cast<int>(j);
      if (c < best_cost) {
        best_cost = c;
        best = static_cast<int>(j);
      }
    }
    return best;
  }

  int pick_leaving(std::size_t col) const {
    int leave = -1;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double a = at(i, col);
      if (a <= kPivotTol) continue;
      const double ratio = rhs(i) / a;
      if (leave < 0) {
        best_ratio = ratio;
        leave = static_cast<int>(i);
        continue;
      }
      const double tie = kRatioTieTol * (1.0 + std::abs(best_ratio));
      if (ratio < best_ratio - tie) {
        best_ratio = ratio;
        leave = static_cast<int>(i);
      } else if (ratio <= best_ratio + tie && bland_ &&
                 basis_[i] < basis_[static_cast<std::size_t>(leave)]) {
        leave = static_cast<int>(i);
      }
    }
    return leave;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::size_t real_cols_;
  std::size_t stride_;
  std::vector<double> a_;
  std::vector<double> obj_;
  std::vector<int> basis_;
  bool bland_ = false;
  long degenerate_pivots_ = 0;
  long degenerate_limit_ = 0;
  long pivots_ = 0;
  long pivot_limit_ = 0;
};

struct StdRow {
  std::vector<double> coef;  // over shifted variables y = x - lb
  Relation rel = Relation::LE;
  double rhs = 0.0;
};

// Internal LP entry point. `lower`/`upper` override the problem's bounds so
// branch-and-bound nodes can reuse it; an empty box reports Infeasible
// instead of throwing.
LpSolution solve_lp_impl(const MilpProblem& p, const std::vector<double>& lower,
                         const std::vector<double>& upper, const SolveOptions& options) {
  const std::size_t n = p.num_vars();

  std::vector<StdRow> rows;
  rows.reserve(p.constraints.size() + n);

  double rhs_scale = 1.0;
  for (const LinearConstraint& c : p.constraints) {
    StdRow row;
    row.coef.resize(n);
    bool empty = true;
    double shifted = c.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      row.coef[j] = c.coefficients[j];
      if (c.coefficients[j] != 0.0) empty = false;
      shifted -= c.coefficients[j] * lower[j];
    }
    row.rel = c.relation;
    row.rhs = shifted;
    if (empty) {
      // 0 (rel) rhs: either trivially true or the whole problem is infeasible.
      const bool ok = (c.relation == Relation::LE && shifted >= -options.feasibility_tol) ||
                      (c.relation == Relation::GE && shifted <= options.feasibility_tol) ||
                      (c.relation == Relation::EQ && std::abs(shifted) <= options.feasibility_tol);
      if (!ok) return LpSolution{LpStatus::Infeasible, {}, std::numeric_limits<double>::quiet_NaN()};
      continue;
    }
    rows.push_back(std::move(row));
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) {
      return LpSolution{LpStatus::Infeasible, {}, std::numeric_limits<double>::quiet_NaN()};
    }
    if (!std::isinf(upper[j])) {
      StdRow row;
      row.coef.assign(n, 0.0);
      row.coef[j] = 1.0;
      row.rel = Relation::LE;
      row.rhs = upper[j] - lower[j];
      rows.push_back(std::move(row));
    }
  }

  // Normalize to rhs >= 0 and count auxiliary columns.
  std::size_t num_slack = 0;
  std::size_t num_artificial = 0;
  for (StdRow& row : rows) {
    if (row.rhs < 0.0) {
      for (double& v : row.coef) v = -v;
      row.rhs = -row.rhs;
      if (row.rel == Relation::LE)
        row.rel = Relation::GE;
      else if (row.rel == Relation::GE)
        row.rel = Relation::LE;
    }
    rhs_scale = std::max(rhs_scale, row.rhs);
    if (row.rel != Relation::EQ) ++num_slack;
    if (row.rel != Relation::LE) ++num_artificial;
  }

  const std::size_t m = rows.size();
  const std::size_t real_cols = n + num_slack;
  Tableau t(m, real_cols + num_artificial, real_cols);

  std::size_t slack_col = n;
  std::size_t art_col = real_cols;
  bool have_artificials = false;
  for (std::size_t i = 0; i < m; ++i) {
    const StdRow& row = rows[i];
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = row.coef[j];
    t.rhs(i) = row.rhs;
    if (row.rel == Relation::LE) {
      t.at(i, slack_col) = 1.0;
      t.set_basis(i, static_cast<int>(slack_col));
      ++slack_col;
    } else if (row.rel == Relation::GE) {
      t.at(i, slack_col) = -1.0;
      ++slack_col;
      t.at(i, art_col) = 1.0;
      t.set_basis(i, static_cast<int>(art_col));
      ++art_col;
      have_artificials = true;
    } else {
      t.at(i, art_col) = 1.0;
      t.set_basis(i, static_cast<int>(art_col));
      ++art_col;
      have_artificials = true;
    }
  }

  if (have_artificials) {
    // Phase 1: minimize the sum of artificial variables.
    t.reset_objective();
    for (std::size_t j = real_cols; j < real_cols + num_artificial; ++j) t.obj(j) = 1.0;
    t.price_out_basis();
    if (t.optimize() == Tableau::Outcome::Unbounded)
      throw SolverError("phase-1 simplex reported an unbounded objective");
    const double infeasibility = t.objective_value();
    if (infeasibility > options.feasibility_tol * rhs_scale) {
      return LpSolution{LpStatus::Infeasible, {}, std::numeric_limits<double>::quiet_NaN()};
    }
    // Drive leftover artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basis(i) < static_cast<int>(real_cols)) {
        ++i;
        continue;
      }
      std::size_t enter = real_cols;
      for (std::size_t j = 0; j < real_cols; ++j) {
        if (std::abs(t.at(i, j)) > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < real_cols) {
        t.pivot(i, enter);
        ++i;
      } else {
        t.remove_row(i);
      }
    }
  }

  // Phase 2: minimize the shifted objective c^T y (the c^T lb constant is
  // restored by evaluating the costs at the final point).
  t.reset_objective();
  for (std::size_t j = 0; j < n; ++j) t.obj(j) = p.costs[j];
  t.price_out_basis();
  if (t.optimize() == Tableau::Outcome::Unbounded) {
    return LpSolution{LpStatus::Unbounded, {}, -std::numeric_limits<double>::infinity()};
  }

  std::vector<double> x = lower;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const int b = t.basis(i);
    if (b >= 0 && b < static_cast<int>(n)) x[static_cast<std::size_t>(b)] += t.rhs(i);
  }
  const double objective = dot(p.costs, x);
  return LpSolution{LpStatus::Optimal, std::move(x), objective};
}

}  // namespace

MilpProblem MilpProblem::with_vars(std::size_t n) {
  MilpProblem p;
  p.costs.assign(n, 0.0);
  p.lower_bounds.assign(n, 0.0);
  p.upper_bounds.assign(n, unbounded());
  p.integral.assign(n, 0);
  return p;
}

void validate(const MilpProblem& p) {
  const std::size_t n = p.num_vars();
  if (n == 0) throw ValidationError("costs: problem has no variables");
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(p.costs[i])) throw ValidationError("costs[" + std::to_string(i) + "]: not finite");
  }
  auto check_len = [n](std::size_t len, const char* field) {
    if (len != n)
      throw ValidationError(std::string(field) + ": length " + std::to_string(len) +
                            " does not match variable count " + std::to_string(n));
  };
  check_len(p.lower_bounds.size(), "lower_bounds");
  check_len(p.upper_bounds.size(), "upper_bounds");
  check_len(p.integral.size(), "integral");
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(p.lower_bounds[i]))
      throw ValidationError("lower_bounds[" + std::to_string(i) + "]: must be finite");
    if (std::isnan(p.upper_bounds[i]) || p.upper_bounds[i] == -MilpProblem::unbounded())
      throw ValidationError("upper_bounds[" + std::to_string(i) + "]: must be finite or +inf");
    if (p.lower_bounds[i] > p.upper_bounds[i])
      throw ValidationError("upper_bounds[" + std::to_string(i) + "]: below lower_bounds[" +
                            std::to_string(i) + "]");
  }
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const LinearConstraint& c = p.constraints[k];
    const std::string where = "constraints[" + std::to_string(k) + "]";
    if (c.coefficients.size() != n)
      throw ValidationError(where + ".coefficients: length " + std::to_string(c.coefficients.size()) +
                            " does not match variable count " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_finite(c.coefficients[j]))
        throw ValidationError(where + ".coefficients[" + std::to_string(j) + "]: not finite");
    }
    if (!is_finite(c.rhs)) throw ValidationError(where + ".rhs: not finite");
  }
}

LpSolution solve_lp(const MilpProblem& problem, const SolveOptions& options) {
  validate(problem);
  return solve_lp_impl(problem, problem.lower_bounds, problem.upper_bounds, options);
}

double max_violation(const MilpProblem& p, const std::vector<double>& values) {
  double worst = 0.0;
  for (const LinearConstraint& c : p.constraints) {
    const double lhs = dot(c.coefficients, values);
    switch (c.relation) {
      case Relation::LE: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::GE: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::EQ: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  for (std::size_t i = 0; i < p.num_vars(); ++i) {
    worst = std::max(worst, p.lower_bounds[i] - values[i]);
    if (!std::isinf(p.upper_bounds[i])) worst = std::max(worst, values[i] - p.upper_bounds[i]);
  }
  return worst;
}

namespace {

struct Node {
  double bound = -std::numeric_limits<double>::infinity();
  std::int64_t seq = 0;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;                              // FIFO on ties
  }
};

// Index of the flagged variable farthest from an integer, or -1 when all are
// within tol. Lowest index wins ties.
int most_fractional(const MilpProblem& p, const std::vector<double>& x, double tol) {
  int best = -1;
  double best_dist = tol;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!p.integral[i]) continue;
    const double dist = std::abs(x[i] - std::round(x[i]));
    if (dist > best_dist) {
      best_dist = dist;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<double> snap_integrals(const MilpProblem& p, std::vector<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (p.integral[i]) x[i] = std::round(x[i]);
  }
  return x;
}

}  // namespace

MilpSolution solve_milp(const MilpProblem& problem, const SolveOptions& options) {
  validate(problem);
  if (options.max_nodes < 1) throw ValidationError("max_nodes: must be at least 1");
  for (std::size_t i = 0; i < problem.num_vars(); ++i) {
    if (problem.integral[i] && std::isinf(problem.upper_bounds[i]))
      throw ValidationError("upper_bounds[" + std::to_string(i) +
                            "]: integral variable needs a finite upper bound");
  }

  MilpSolution result;
  result.status = MilpStatus::Infeasible;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  Node root;
  root.lower = problem.lower_bounds;
  root.upper = problem.upper_bounds;
  open.push(std::move(root));
  std::int64_t next_seq = 1;

  bool have_incumbent = false;
  double incumbent_obj = std::numeric_limits<double>::infinity();
  std::vector<double> incumbent;
  bool root_solved = false;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound >= incumbent_obj - kImprovementTol) continue;
    if (result.nodes_explored >= options.max_nodes) {
      result.status = MilpStatus::NodeLimit;
      break;
    }

    LpSolution lp = solve_lp_impl(problem, node.lower, node.upper, options);
    ++result.nodes_explored;
    if (!root_solved) {
      root_solved = true;
      if (lp.status == LpStatus::Infeasible) break;
      if (lp.status == LpStatus::Unbounded)
        throw SolverError("LP relaxation is unbounded; cannot certify a MILP optimum");
      result.root_lp_bound = lp.objective;
    }
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded)
      throw SolverError("node relaxation is unbounded; cannot certify a MILP optimum");
    if (have_incumbent && lp.objective >= incumbent_obj - kImprovementTol) continue;

    const int branch = most_fractional(problem, lp.values, options.integrality_tol);
    if (branch < 0) {
      std::vector<double> candidate = snap_integrals(problem, lp.values);
      if (max_violation(problem, candidate) <= options.feasibility_tol) {
        const double obj = dot(problem.costs, candidate);
        if (!have_incumbent || obj < incumbent_obj - kImprovementTol) {
          have_incumbent = true;
          incumbent_obj = obj;
          incumbent = std::move(candidate);
        }
        continue;
      }
      // Snapping broke feasibility: split on the variable that moved the most
      // so each child pins it to an exact integer range.
      std::size_t worst = 0;
      double worst_move = -1.0;
      for (std::size_t i = 0; i < lp.values.size(); ++i) {
        if (!problem.integral[i]) continue;
        const double move = std::abs(lp.values[i] - std::round(lp.values[i]));
        if (move > worst_move) {
          worst_move = move;
          worst = i;
        }
      }
      const double pivot = std::round(lp.values[worst]);
      Node down = node;
      down.bound = lp.objective;
      down.seq = next_seq++;
      down.upper[worst] = std::min(down.upper[worst], pivot - 1.0);
      open.push(std::move(down));
      Node up = node;
      up.bound = lp.objective;
      up.seq = next_seq++;
      up.lower[worst] = std::max(up.lower[worst], pivot);
      open.push(std::move(up));
      continue;
    }

    const auto var = static_cast<std::size_t>(branch);
    const double floor_val = std::floor(lp.values[var]);
    Node floor_child = node;
    floor_child.bound = lp.objective;
    floor_child.seq = next_seq++;
    floor_child.upper[var] = std::min(floor_child.upper[var], floor_val);
    open.push(std::move(floor_child));
    Node ceil_child = std::move(node);
    ceil_child.bound = lp.objective;
    ceil_child.seq = next_seq++;
    ceil_child.lower[var] = std::max(ceil_child.lower[var], floor_val + 1.0);
    open.push(std::move(ceil_child));
  }

  if (have_incumbent) {
    if (result.status != MilpStatus::NodeLimit) result.status = MilpStatus::Optimal;
    result.values = std::move(incumbent);
    result.objective = incumbent_obj;
  }
  return result;
}

MilpSolution brute_force_milp(const MilpProblem& problem, const SolveOptions& options) {
  validate(problem);
  const std::size_t n = problem.num_vars();
  std::vector<std::int64_t> lo(n), hi(n);
  double lattice = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!problem.integral[i])
      throw ValidationError("integral[" + std::to_string(i) +
                            "]: brute_force_milp requires every variable integral");
    if (std::isinf(problem.upper_bounds[i]))
      throw ValidationError("upper_bounds[" + std::to_string(i) +
                            "]: brute_force_milp requires finite bounds");
    lo[i] = static_cast<std::int64_t>(std::ceil(problem.lower_bounds[i] - options.integrality_tol));
    hi[i] = static_cast<std::int64_t>(std::floor(problem.upper_bounds[i] + options.integrality_tol));
    lattice *= hi[i] >= lo[i] ? static_cast<double>(hi[i] - lo[i] + 1) : 0.0;
  }
  if (lattice > 1e7) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", lattice);
    throw ValidationError("lattice too large for brute force: about " + std::string(buf) +
                          " points exceeds the 1e7 limit");
  }

  MilpSolution result;
  result.status = MilpStatus::Infeasible;
  if (lattice == 0.0) return result;  // some variable admits no integer value

  std::vector<std::int64_t> point = lo;
  std::vector<double> x(n);
  bool done = false;
  while (!done) {
    ++result.nodes_explored;
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(point[i]);
    if (max_violation(problem, x) <= options.feasibility_tol) {
      const double obj = dot(problem.costs, x);
      if (result.status != MilpStatus::Optimal || obj < result.objective - kImprovementTol) {
        result.status = MilpStatus::Optimal;
        result.objective = obj;
        result.values = x;
      }
    }
    // Odometer increment, first variable fastest.
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (point[i] < hi[i]) {
        ++point[i];
        for (std::size_t k = 0; k < i; ++k) point[k] = lo[k];
        done = false;
        break;
      }
    }
  }
  if (result.status == MilpStatus::Optimal) result.root_lp_bound = result.objective;
  return result;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::NodeLimit: return "NodeLimit";
  }
  return "?";
}

}  // namespace linebal::milp
