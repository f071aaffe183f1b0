#include "hirob/subdiff.hpp"

#include <cmath>

namespace hirob {

namespace {

constexpr double kAnchorTol = 1e-9;

double surrogate_derivative(SurrogateKind kind, double t) {
  switch (kind) {
    case SurrogateKind::Cbrt:
      return 1.0 / (3.0 * std::cbrt(t * t));
    case SurrogateKind::SquareSinInverse:
      return 2.0 * t * std::sin(1.0 / t) - std::cos(1.0 / t);
  }
  return 0.0;
}

Polytope surrogate_part(const SurrogateTerm& s, const Vector& xbar, const Tolerances& tol) {
  if (s.anchor && (xbar - *s.anchor).lpNorm<Eigen::Infinity>() <= kAnchorTol) {
    if (s.subgradients.empty())
      throw UnsupportedExpression("surrogate term has an anchor but no frozen subgradients");
    Polytope P{s.subgradients, {}};
    P.dedupe();
    return P;
  }
  const double t = s.a.dot(xbar) - s.b;
  if (std::abs(t) <= tol.act_tol)
    throw UnsupportedExpression("surrogate term evaluated at its non-Lipschitz point");
  return Polytope::point(s.weight * surrogate_derivative(s.kind, t) * s.a);
}

}  // namespace

Polytope subdiff_scalar(const ScalarExpr& expr, const Vector& xbar, const Tolerances& tol) {
  const int n = expr.dimension();
  require_dimension(xbar, n, "subdiff_scalar");
  expr.require_supported();

  std::vector<ScaledPolytope> parts;
  parts.push_back({1.0, Polytope::point(expr.smooth_part().gradient(xbar))});
  for (const auto& t : expr.abs_terms) {
    const double r = t.a.dot(xbar) - t.b;
    if (std::abs(r) <= tol.act_tol)
      parts.push_back({1.0, Polytope::segment(-t.weight * t.a, t.weight * t.a)});
    else
      parts.push_back({1.0, Polytope::point((r > 0.0 ? t.weight : -t.weight) * t.a)});
  }
  for (const auto& m : expr.max_terms) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& piece : m.pieces) best = std::max(best, piece.eval(xbar));
    Polytope hull;
    for (const auto& piece : m.pieces)
      if (piece.eval(xbar) >= best - tol.act_tol) hull.vertices.push_back(piece.gradient(xbar));
    hull.dedupe();
    parts.push_back({1.0, std::move(hull)});
  }
  for (const auto& s : expr.surrogate_terms) parts.push_back({1.0, surrogate_part(s, xbar, tol)});
  return minkowski_sum(parts);
}

Polytope subdiff_objective_scenario(const UncertainMOP& p, int i, const Vector& xbar,
                                    const Vector& ui, const Tolerances& tol) {
  if (i < 0 || i >= p.p()) throw ConfigError("objective index out of range");
  require_dimension(ui, p.n, "scenario component");
  return subdiff_scalar(p.objectives[i], xbar, tol).translated(-ui);
}

Polytope subdiff_constraint(const UncertainMOP& p, int j, const Vector& xbar, double v,
                            const Tolerances& tol) {
  if (j < 0 || j >= p.q()) throw ConfigError("constraint index out of range");
  require_dimension(xbar, p.n, "subdiff_constraint");
  const auto& c = p.constraints[j];
  if (!in_domain_closure(c.domain, v))
    throw DomainError("parameter value outside the constraint domain");
  if (const auto* g = std::get_if<AffineInX>(&c.kind)) {
    Vector a(p.n);
    for (int k = 0; k < p.n; ++k) a[k] = g->a[k](v);
    return Polytope::point(a);
  }
  for (const auto& s : std::get<FiniteScenarios>(c.kind).scenarios)
    if (std::abs(s.v - v) <= 1e-12) return subdiff_scalar(s.expr, xbar, tol);
  throw DomainError("parameter value is not a scenario label");
}

Vector fd_gradient(const ScalarExpr& expr, const Vector& xbar, double h) {
  if (!(h > 0.0)) throw ConfigError("fd_gradient: h must be positive");
  const int n = expr.dimension();
  require_dimension(xbar, n, "fd_gradient");
  Vector g(n);
  Vector x = xbar;
  for (int k = 0; k < n; ++k) {
    x[k] = xbar[k] + h;
    const double up = eval_scalar(expr, x);
    x[k] = xbar[k] - h;
    const double down = eval_scalar(expr, x);
    x[k] = xbar[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace hirob
