#pragma once

#include <limits>
#include <vector>

#include "hirob/model.hpp"

namespace hirob {

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LpRow {
  Vector a;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

/// minimize cost.x subject to rows and lower <= x <= upper.
/// Bounds default to x >= 0; use -inf/+inf for free variables.
struct LinearProgram {
  explicit LinearProgram(int num_vars);

  int num_vars() const { return static_cast<int>(cost.size()); }
  void add_row(Vector a, RowSense sense, double rhs);
  void set_bounds(int var, double lo, double hi);
  void free_variable(int var);

  Vector cost;
  Vector lower;
  Vector upper;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-10;
  double feas_tol = 1e-9;
  int max_iterations = 200000;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
/// IterationLimit is reported, not thrown; callers that need an answer
/// use solve_or_throw.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

/// Like solve_lp but throws SolverError on IterationLimit.
LpResult solve_or_throw(const LinearProgram& lp, const LpOptions& opts = {});

}  // namespace hirob
