// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace linebal::milp {

enum class Relation { LE, GE, EQ };

struct LinearConstraint {
  std::vector<double> coefficients;  // one per variable
  Relation relation = Relation::LE;
  double rhs = 0.0;
};

// Minimization MILP: costs^T x subject to linear constraints, box bounds and
// per-variable integrality flags. `unbounded()` marks a missing upper bound.
struct MilpProblem {
  std::vector<double> costs;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower_bounds;    // finite; default 0
  std::vector<double> upper_bounds;    // +inf when unbounded
  std::vector<std::uint8_t> integral;  // 1 = integer-constrained

  std::size_t num_vars() const { return costs.size(); }

  static constexpr double unbounded() { return std::numeric_limits<double>::infinity(); }

  // n continuous variables, zero costs, bounds [0, +inf).
  static MilpProblem with_vars(std::size_t n);
};

struct SolveOptions {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  std::int64_t max_nodes = 100000;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class MilpStatus { Optimal, Infeasible, NodeLimit };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // empty unless Optimal
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> values;  // integral entries snapped; empty without an incumbent
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::int64_t nodes_explored = 0;
  double root_lp_bound = std::numeric_limits<double>::quiet_NaN();
};

// Throws ValidationError naming the offending field.
void validate(const MilpProblem& problem);

// Two-phase dense-tableau simplex over the LP relaxation (integrality flags
// ignored). Dantzig pricing with a switch to Bland's rule after
// 3*(rows+columns) degenerate pivots; deterministic lowest-index tie-breaks.
LpSolution solve_lp(const MilpProblem& problem, const SolveOptions& options = {});

// Best-bound branch-and-bound (FIFO on ties). Branches on the most fractional
// flagged variable, lowest index on ties, floor child first. Throws
// SolverError when the root relaxation is unbounded. Every integral variable
// must carry finite bounds.
MilpSolution solve_milp(const MilpProblem& problem, const SolveOptions& options = {});

// Exhaustive integer-lattice enumeration; the testing oracle. Requires every
// variable integral with finite bounds and a lattice of at most 10^7 points.
MilpSolution brute_force_milp(const MilpProblem& problem, const SolveOptions& options = {});

// Largest violation of any constraint or bound at `values`.
double max_violation(const MilpProblem& problem, const std::vector<double>& values);

const char* to_string(LpStatus status);
const char* to_string(MilpStatus status);

}  // namespace linebal::milp
