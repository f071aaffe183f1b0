#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hirob/errors.hpp"

namespace hirob {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical thresholds shared by every module. The defaults are the ones the
/// toolkit is calibrated and tested against.
struct Tolerances {
  double act_tol = 1e-8;         // kink / argmax activity threshold
  double strict_tol = 1e-9;      // margin required for a strict inequality
  double feas_tol = 1e-9;        // robust feasibility slack on lattices
  double golden_tol = 1e-10;     // interval argmax refinement width in v
  int constraint_resolution = 1001;  // grid points per interval domain
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

/// constant + linear.x + 1/2 x'Qx
struct SmoothPiece {
  double constant = 0.0;
  Vector linear;
  std::optional<Matrix> quad;

  double eval(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

/// weight * |a.x - b|, weight >= 0
struct AbsTerm {
  double weight = 1.0;
  Vector a;
  double b = 0.0;
};

struct MaxTerm {
  std::vector<SmoothPiece> pieces;
};

enum class SurrogateKind {
  Cbrt,              // phi(t) = cbrt(t)
  SquareSinInverse,  // phi(t) = t^2 sin(1/t), phi(0) = 0
};

/// weight * phi(a.x - b) for a function phi outside the regular class.
/// Subgradients are only produced where phi is smooth, or at `anchor` where
/// the frozen generator list is returned verbatim (local-only surrogate).
struct SurrogateTerm {
  SurrogateKind kind = SurrogateKind::Cbrt;
  double weight = 1.0;
  Vector a;
  double b = 0.0;
  std::optional<Vector> anchor;
  std::vector<Vector> subgradients;
};

/// One objective or constraint piece:
///   constant + linear.x + 1/2 x'Qx + sum_k w_k |a_k.x - b_k| + sum max(pieces)
/// plus optional surrogate nodes.
struct ScalarExpr {
  double constant = 0.0;
  Vector linear;
  std::optional<Matrix> quad;
  std::vector<AbsTerm> abs_terms;
  std::vector<MaxTerm> max_terms;
  std::vector<SurrogateTerm> surrogate_terms;

  static ScalarExpr zero(int n);
  static ScalarExpr affine(const Vector& linear, double constant);

  int dimension() const { return static_cast<int>(linear.size()); }
  SmoothPiece smooth_part() const { return {constant, linear, quad}; }

  /// Throws ValidationError when dimensions disagree or a quad matrix is not
  /// symmetric to 1e-12.
  void validate() const;
  /// Throws UnsupportedExpression when the expression leaves the regular
  /// class (a negative abs weight).
  void require_supported() const;
};

double eval_scalar(const ScalarExpr& expr, const Vector& x);

// ---------------------------------------------------------------------------
// Parametric constraints
// ---------------------------------------------------------------------------

enum class CoeffBasis { Poly, Sin, Cos };

/// poly: sum c_k v^k; sin: sum c_k sin(k v); cos: sum c_k cos(k v)
struct CoeffTerm {
  CoeffBasis basis = CoeffBasis::Poly;
  std::vector<double> coeffs;
};

struct CoeffFunction {
  std::vector<CoeffTerm> terms;

  static CoeffFunction constant(double c);
  double operator()(double v) const;
};

struct IntervalDomain {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = true;
  bool hi_closed = true;
};

struct FiniteDomain {
  std::vector<double> values;
};

using ParamDomain = std::variant<IntervalDomain, FiniteDomain>;

/// True when v lies in the closed hull of the domain (within 1e-12).
bool in_domain_closure(const ParamDomain& domain, double v);
/// True when v lies in the domain itself (open ends excluded).
bool in_domain(const ParamDomain& domain, double v);

/// g(x, v) = a(v).x - b(v)
struct AffineInX {
  std::vector<CoeffFunction> a;
  CoeffFunction b;
};

struct LabeledExpr {
  double v = 0.0;
  ScalarExpr expr;
};

/// g(x, v) = expr_v(x) over a finite label set
struct FiniteScenarios {
  std::vector<LabeledExpr> scenarios;
};

struct ParamConstraint {
  std::variant<AffineInX, FiniteScenarios> kind;
  ParamDomain domain;

  /// Finite-scenario constraint whose domain is the label set.
  static ParamConstraint finite(std::vector<LabeledExpr> scenarios);
  static ParamConstraint affine(AffineInX g, ParamDomain domain);

  double eval(const Vector& x, double v) const;
};

// ---------------------------------------------------------------------------
// Uncertainty sets
// ---------------------------------------------------------------------------

struct PolytopeSet {
  std::vector<Vector> vertices;
  std::vector<Vector> rays;
};

struct BoxSet {
  Vector lo;
  Vector hi;
};

struct BallSet {
  Vector center;
  double radius = 1.0;
};

/// { u : (u - c)' A^{-1} (u - c) <= 1 }, A symmetric positive definite.
struct EllipsoidSet {
  Vector center;
  Matrix shape;
};

struct FiniteSet {
  std::vector<Vector> points;
};

struct UncertaintySet {
  std::variant<PolytopeSet, BoxSet, BallSet, EllipsoidSet, FiniteSet> shape;

  int dimension() const;
  bool bounded() const;
  /// Kind name as used in problem files ("polytope", "box", ...).
  std::string kind_name() const;
  void validate() const;
};

bool operator==(const UncertaintySet& lhs, const UncertaintySet& rhs);

// ---------------------------------------------------------------------------
// Problem
// ---------------------------------------------------------------------------

struct BoxBounds {
  Vector lo;
  Vector hi;
};

struct UncertainMOP {
  int n = 0;
  std::vector<ScalarExpr> objectives;
  std::vector<UncertaintySet> uncertainty;
  std::vector<ParamConstraint> constraints;
  std::optional<BoxBounds> box_bounds;
  /// Set by diagonal_reduce: scenarios are restricted to u_1 = ... = u_p and
  /// drawn from uncertainty[0].
  bool diagonal = false;

  int p() const { return static_cast<int>(objectives.size()); }
  int q() const { return static_cast<int>(constraints.size()); }

  /// Checks every structural invariant; throws ValidationError.
  void validate() const;
};

struct NamedPoint {
  std::string name;
  Vector x;
};

using Scenario = std::vector<Vector>;

/// f(x) for every objective (nominal values).
Vector eval_objectives(const UncertainMOP& p, const Vector& x);

/// f_i(x, u_i) = f_i(x) - <u_i, x>.
Vector eval_objective_scenario(const UncertainMOP& p, const Vector& x, const Scenario& u);

struct SupResult {
  double value = 0.0;
  std::vector<double> arg_set;
  /// A maximizer sat at an excluded (open) endpoint and was dropped.
  bool attained_outside_domain = false;
};

/// G_j(x) = sup_v g_j(x, v) with the maximizers found.
SupResult constraint_sup(const UncertainMOP& p, int j, const Vector& x,
                         int grid_resolution = 1001, const Tolerances& tol = {});

/// { v : g_j(xbar, v) >= G_j(xbar) - eps }, discretized like constraint_sup.
std::vector<double> active_set(const UncertainMOP& p, int j, const Vector& xbar, double eps,
                               int grid_resolution = 1001, const Tolerances& tol = {});

/// G_j(x) <= tol for all j.
bool is_robust_feasible(const UncertainMOP& p, const Vector& x, double tol,
                        int grid_resolution = 1001);

/// Throws DimensionError unless x has the expected size.
void require_dimension(const Vector& x, int n, const char* what);

}  // namespace hirob
