#pragma once

#include "hirob/geometry.hpp"
#include "hirob/model.hpp"

namespace hirob {

/// Generator polytope of the (Clarke = limiting) subdifferential at xbar.
/// Throws UnsupportedExpression outside the regular class.
Polytope subdiff_scalar(const ScalarExpr& expr, const Vector& xbar, const Tolerances& tol = {});

/// subdiff_scalar(f_i, xbar) - u_i
Polytope subdiff_objective_scenario(const UncertainMOP& p, int i, const Vector& xbar,
                                    const Vector& ui, const Tolerances& tol = {});

/// Partial subdifferential in x of g_j(., v) at xbar.
Polytope subdiff_constraint(const UncertainMOP& p, int j, const Vector& xbar, double v,
                            const Tolerances& tol = {});

/// Central differences with step h.
Vector fd_gradient(const ScalarExpr& expr, const Vector& xbar, double h);

}  // namespace hirob
