#include "hirob/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hirob {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kDomainTol = 1e-12;
constexpr double kArgMergeTol = 1e-7;

double surrogate_phi(SurrogateKind kind, double t) {
  switch (kind) {
    case SurrogateKind::Cbrt:
      return std::cbrt(t);
    case SurrogateKind::SquareSinInverse:
      return t == 0.0 ? 0.0 : t * t * std::sin(1.0 / t);
  }
  return 0.0;
}

void check_quad(const std::optional<Matrix>& quad, int n, const char* where) {
  if (!quad) return;
  if (quad->rows() != n || quad->cols() != n) {
    throw ValidationError(std::string(where) + ": quad matrix must be n x n");
  }
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      if (std::abs((*quad)(r, c) - (*quad)(c, r)) > kSymTol)
        throw ValidationError(std::string(where) + ": quad matrix is not symmetric");
}

void check_finite(const Vector& v, const char* where) {
  if (!v.allFinite()) throw ValidationError(std::string(where) + ": non-finite entry");
}

}  // namespace

void require_dimension(const Vector& x, int n, const char* what) {
  if (x.size() != n) {
    std::ostringstream os;
    os << what << ": expected dimension " << n << ", got " << x.size();
    throw DimensionError(os.str());
  }
}

// ---------------------------------------------------------------------------

double SmoothPiece::eval(const Vector& x) const {
  require_dimension(x, static_cast<int>(linear.size()), "smooth piece");
  double value = constant + linear.dot(x);
  if (quad) value += 0.5 * x.dot(*quad * x);
  return value;
}

Vector SmoothPiece::gradient(const Vector& x) const {
  Vector g = linear;
  if (quad) g += *quad * x;
  return g;
}

ScalarExpr ScalarExpr::zero(int n) {
  ScalarExpr e;
  e.linear = Vector::Zero(n);
  return e;
}

ScalarExpr ScalarExpr::affine(const Vector& linear, double constant) {
  ScalarExpr e;
  e.linear = linear;
  e.constant = constant;
  return e;
}

void ScalarExpr::validate() const {
  const int n = dimension();
  check_finite(linear, "linear");
  check_quad(quad, n, "expression");
  for (const auto& t : abs_terms) {
    if (t.a.size() != n) throw ValidationError("abs term: dimension mismatch");
    check_finite(t.a, "abs term");
    if (!std::isfinite(t.weight) || !std::isfinite(t.b))
      throw ValidationError("abs term: non-finite weight or offset");
  }
  for (const auto& m : max_terms) {
    if (m.pieces.empty()) throw ValidationError("max term: needs at least one piece");
    for (const auto& piece : m.pieces) {
      if (piece.linear.size() != n) throw ValidationError("max term piece: dimension mismatch");
      check_quad(piece.quad, n, "max term piece");
    }
  }
  for (const auto& s : surrogate_terms) {
    if (s.a.size() != n) throw ValidationError("surrogate term: dimension mismatch");
    if (s.anchor && s.anchor->size() != n)
      throw ValidationError("surrogate term: anchor dimension mismatch");
    for (const auto& g : s.subgradients)
      if (g.size() != n) throw ValidationError("surrogate term: subgradient dimension mismatch");
  }
}

void ScalarExpr::require_supported() const {
  for (const auto& t : abs_terms)
    if (t.weight < 0.0)
      throw UnsupportedExpression(
          "abs term with negative weight leaves the Clarke-regular class");
}

double eval_scalar(const ScalarExpr& expr, const Vector& x) {
  require_dimension(x, expr.dimension(), "eval_scalar");
  double value = expr.constant + expr.linear.dot(x);
  if (expr.quad) value += 0.5 * x.dot(*expr.quad * x);
  for (const auto& t : expr.abs_terms) value += t.weight * std::abs(t.a.dot(x) - t.b);
  for (const auto& m : expr.max_terms) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& piece : m.pieces) best = std::max(best, piece.eval(x));
    value += best;
  }
  for (const auto& s : expr.surrogate_terms)
    value += s.weight * surrogate_phi(s.kind, s.a.dot(x) - s.b);
  return value;
}

// ---------------------------------------------------------------------------

CoeffFunction CoeffFunction::constant(double c) {
  return CoeffFunction{{CoeffTerm{CoeffBasis::Poly, {c}}}};
}

double CoeffFunction::operator()(double v) const {
  double total = 0.0;
  for (const auto& term : terms) {
    switch (term.basis) {
      case CoeffBasis::Poly: {
        double acc = 0.0;
        for (auto it = term.coeffs.rbegin(); it != term.coeffs.rend(); ++it) acc = acc * v + *it;
        total += acc;
        break;
      }
      case CoeffBasis::Sin:
        for (std::size_t k = 1; k < term.coeffs.size(); ++k)
          total += term.coeffs[k] * std::sin(static_cast<double>(k) * v);
        break;
      case CoeffBasis::Cos:
        for (std::size_t k = 0; k < term.coeffs.size(); ++k)
          total += term.coeffs[k] * std::cos(static_cast<double>(k) * v);
        break;
    }
  }
  return total;
}

bool in_domain_closure(const ParamDomain& domain, double v) {
  if (const auto* iv = std::get_if<IntervalDomain>(&domain))
    return v >= iv->lo - kDomainTol && v <= iv->hi + kDomainTol;
  const auto& fin = std::get<FiniteDomain>(domain);
  return std::any_of(fin.values.begin(), fin.values.end(),
                     [v](double w) { return std::abs(v - w) <= kDomainTol; });
}

bool in_domain(const ParamDomain& domain, double v) {
  if (!in_domain_closure(domain, v)) return false;
  if (const auto* iv = std::get_if<IntervalDomain>(&domain)) {
    if (!iv->lo_closed && std::abs(v - iv->lo) <= kDomainTol) return false;
    if (!iv->hi_closed && std::abs(v - iv->hi) <= kDomainTol) return false;
  }
  return true;
}

ParamConstraint ParamConstraint::finite(std::vector<LabeledExpr> scenarios) {
  FiniteDomain dom;
  for (const auto& s : scenarios) dom.values.push_back(s.v);
  std::sort(dom.values.begin(), dom.values.end());
  dom.values.erase(std::unique(dom.values.begin(), dom.values.end()), dom.values.end());
  return ParamConstraint{FiniteScenarios{std::move(scenarios)}, std::move(dom)};
}

ParamConstraint ParamConstraint::affine(AffineInX g, ParamDomain domain) {
  return ParamConstraint{std::move(g), std::move(domain)};
}

double ParamConstraint::eval(const Vector& x, double v) const {
  if (const auto* g = std::get_if<AffineInX>(&kind)) {
    require_dimension(x, static_cast<int>(g->a.size()), "constraint");
    double value = -g->b(v);
    for (std::size_t k = 0; k < g->a.size(); ++k) value += g->a[k](v) * x[static_cast<int>(k)];
    return value;
  }
  const auto& fs = std::get<FiniteScenarios>(kind);
  for (const auto& s : fs.scenarios)
    if (std::abs(s.v - v) <= kDomainTol) return eval_scalar(s.expr, x);
  std::ostringstream os;
  os << "constraint parameter " << v << " is not a scenario label";
  throw DomainError(os.str());
}

// ---------------------------------------------------------------------------

int UncertaintySet::dimension() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolytopeSet>)
          return s.vertices.empty() ? 0 : static_cast<int>(s.vertices.front().size());
        else if constexpr (std::is_same_v<T, BoxSet>)
          return static_cast<int>(s.lo.size());
        else if constexpr (std::is_same_v<T, FiniteSet>)
          return s.points.empty() ? 0 : static_cast<int>(s.points.front().size());
        else
          return static_cast<int>(s.center.size());
      },
      shape);
}

bool UncertaintySet::bounded() const {
  if (const auto* poly = std::get_if<PolytopeSet>(&shape)) return poly->rays.empty();
  return true;
}

std::string UncertaintySet::kind_name() const {
  switch (shape.index()) {
    case 0: return "polytope";
    case 1: return "box";
    case 2: return "ball";
    case 3: return "ellipsoid";
    default: return "finite";
  }
}

void UncertaintySet::validate() const {
  const int n = dimension();
  auto same_dim = [n](const std::vector<Vector>& vs, const char* what) {
    for (const auto& v : vs) {
      if (v.size() != n) throw ValidationError(std::string(what) + ": dimension mismatch");
      check_finite(v, what);
    }
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolytopeSet>) {
          if (s.vertices.empty()) throw ValidationError("polytope: needs at least one vertex");
          same_dim(s.vertices, "polytope vertex");
          same_dim(s.rays, "polytope ray");
          for (const auto& r : s.rays)
            if (r.template lpNorm<Eigen::Infinity>() == 0.0) throw ValidationError("polytope: zero ray");
        } else if constexpr (std::is_same_v<T, BoxSet>) {
          if (s.hi.size() != n) throw ValidationError("box: lo/hi dimension mismatch");
          check_finite(s.lo, "box");
          check_finite(s.hi, "box");
          for (int k = 0; k < n; ++k)
            if (s.lo[k] > s.hi[k]) throw ValidationError("box: lo > hi");
        } else if constexpr (std::is_same_v<T, BallSet>) {
          check_finite(s.center, "ball");
          if (!(s.radius > 0.0) || !std::isfinite(s.radius))
            throw ValidationError("ball: radius must be positive");
        } else if constexpr (std::is_same_v<T, EllipsoidSet>) {
          check_finite(s.center, "ellipsoid");
          if (s.shape.rows() != n || s.shape.cols() != n)
            throw ValidationError("ellipsoid: shape must be n x n");
          if (!(s.shape - s.shape.transpose()).isZero(kSymTol))
            throw ValidationError("ellipsoid: shape is not symmetric");
          Eigen::LLT<Matrix> llt(s.shape);
          if (llt.info() != Eigen::Success)
            throw ValidationError("ellipsoid: shape is not positive definite");
        } else {
          if (s.points.empty()) throw ValidationError("finite set: needs at least one point");
          same_dim(s.points, "finite point");
        }
      },
      shape);
  if (n == 0) throw ValidationError("uncertainty set: zero dimension");
}

namespace {

bool near(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a - b).lpNorm<Eigen::Infinity>() <= 1e-12;
}

bool near(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!near(a[k], b[k])) return false;
  return true;
}

}  // namespace

bool operator==(const UncertaintySet& lhs, const UncertaintySet& rhs) {
  if (lhs.shape.index() != rhs.shape.index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(rhs.shape);
        if constexpr (std::is_same_v<T, PolytopeSet>)
          return near(a.vertices, b.vertices) && near(a.rays, b.rays);
        else if constexpr (std::is_same_v<T, BoxSet>)
          return near(a.lo, b.lo) && near(a.hi, b.hi);
        else if constexpr (std::is_same_v<T, BallSet>)
          return near(a.center, b.center) && std::abs(a.radius - b.radius) <= 1e-12;
        else if constexpr (std::is_same_v<T, EllipsoidSet>)
          return near(a.center, b.center) && a.shape.rows() == b.shape.rows() &&
                 (a.shape - b.shape).cwiseAbs().maxCoeff() <= 1e-12;
        else
          return near(a.points, b.points);
      },
      lhs.shape);
}

// ---------------------------------------------------------------------------

void UncertainMOP::validate() const {
  if (n <= 0) throw ValidationError("dimension must be positive");
  if (p() < 2) throw ValidationError("at least two objectives are required");
  if (static_cast<int>(uncertainty.size()) != p())
    throw ValidationError("one uncertainty set per objective is required");
  for (const auto& f : objectives) {
    if (f.dimension() != n) throw ValidationError("objective dimension differs from n");
    f.validate();
  }
  for (const auto& u : uncertainty) {
    u.validate();
    if (u.dimension() != n) throw ValidationError("uncertainty set dimension differs from n");
  }
  for (const auto& c : constraints) {
    if (const auto* g = std::get_if<AffineInX>(&c.kind)) {
      if (static_cast<int>(g->a.size()) != n)
        throw ValidationError("affine constraint needs n coefficient functions");
    } else {
      const auto& fs = std::get<FiniteScenarios>(c.kind);
      if (fs.scenarios.empty()) throw ValidationError("finite-scenario constraint is empty");
      for (const auto& s : fs.scenarios) {
        if (s.expr.dimension() != n)
          throw ValidationError("constraint expression dimension differs from n");
        s.expr.validate();
      }
    }
    if (const auto* iv = std::get_if<IntervalDomain>(&c.domain)) {
      if (!(iv->lo < iv->hi)) throw ValidationError("interval domain needs lo < hi");
    } else {
      const auto& vals = std::get<FiniteDomain>(c.domain).values;
      if (vals.empty()) throw ValidationError("finite domain is empty");
      for (std::size_t k = 1; k < vals.size(); ++k)
        if (!(vals[k - 1] < vals[k]))
          throw ValidationError("finite domain must be sorted and deduplicated");
    }
  }
  if (box_bounds) {
    if (box_bounds->lo.size() != n || box_bounds->hi.size() != n)
      throw ValidationError("box_bounds dimension differs from n");
    for (int k = 0; k < n; ++k)
      if (box_bounds->lo[k] > box_bounds->hi[k]) throw ValidationError("box_bounds: lo > hi");
  }
  if (diagonal) {
    for (const auto& u : uncertainty)
      if (!(u == uncertainty.front()))
        throw ValidationError("diagonal problem requires identical uncertainty sets");
  }
}

Vector eval_objectives(const UncertainMOP& p, const Vector& x) {
  require_dimension(x, p.n, "eval_objectives");
  Vector out(p.p());
  for (int i = 0; i < p.p(); ++i) out[i] = eval_scalar(p.objectives[i], x);
  return out;
}

Vector eval_objective_scenario(const UncertainMOP& p, const Vector& x, const Scenario& u) {
  if (static_cast<int>(u.size()) != p.p())
    throw DimensionError("scenario must hold one vector per objective");
  Vector out = eval_objectives(p, x);
  for (int i = 0; i < p.p(); ++i) {
    require_dimension(u[i], p.n, "scenario component");
    out[i] -= u[i].dot(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Golden-section maximization of a unimodal-in-bracket function.
std::pair<double, double> golden_max(const auto& g, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > tol) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  const double v = 0.5 * (a + b);
  return {v, g(v)};
}

struct Candidate {
  double v;
  double value;
};

/// Every maximizer candidate on an interval, refined; values evaluated on the
/// closed hull.
struct IntervalScan {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<Candidate> refined;
  double best = -std::numeric_limits<double>::infinity();
};

IntervalScan scan_interval(const ParamConstraint& c, const IntervalDomain& iv, const Vector& x,
                           int resolution, const Tolerances& tol) {
  if (resolution < 2) throw ConfigError("interval grid_resolution must be at least 2");
  IntervalScan scan;
  const int N = resolution;
  const double h = (iv.hi - iv.lo) / (N - 1);
  scan.grid.resize(N);
  scan.values.resize(N);
  for (int k = 0; k < N; ++k) {
    scan.grid[k] = (k == N - 1) ? iv.hi : iv.lo + k * h;
    scan.values[k] = c.eval(x, scan.grid[k]);
  }
  double gmax = *std::max_element(scan.values.begin(), scan.values.end());
  double max_step = 0.0;
  for (int k = 1; k < N; ++k) max_step = std::max(max_step, std::abs(scan.values[k] - scan.values[k - 1]));
  const double band = std::max(tol.act_tol, 2.0 * max_step);

  auto g = [&](double v) { return c.eval(x, v); };
  for (int k = 0; k < N; ++k) {
    const double here = scan.values[k];
    const bool ge_left = k == 0 || here >= scan.values[k - 1];
    const bool ge_right = k == N - 1 || here >= scan.values[k + 1];
    if (!ge_left || !ge_right) continue;
    const bool strict_somewhere = k == 0 || k == N - 1 || here > scan.values[k - 1] ||
                                  here > scan.values[k + 1];
    if (!strict_somewhere || here < gmax - band) continue;
    const double a = scan.grid[std::max(k - 1, 0)];
    const double b = scan.grid[std::min(k + 1, N - 1)];
    auto [v, val] = golden_max(g, a, b, tol.golden_tol);
    Candidate best{scan.grid[k], here};
    if (val > best.value) best = {v, val};
    // snap to an endpoint when the refinement converged onto it
    for (double end : {iv.lo, iv.hi}) {
      if (std::abs(best.v - end) <= 10.0 * tol.golden_tol) {
        const double ve = g(end);
        if (ve >= best.value - tol.act_tol) best = {end, std::max(ve, best.value)};
      }
    }
    scan.refined.push_back(best);
  }
  for (double val : scan.values) scan.best = std::max(scan.best, val);
  for (const auto& cand : scan.refined) scan.best = std::max(scan.best, cand.value);
  return scan;
}

void add_unique(std::vector<double>& out, double v) {
  for (double w : out)
    if (std::abs(w - v) <= kArgMergeTol) return;
  out.push_back(v);
}

}  // namespace

SupResult constraint_sup(const UncertainMOP& p, int j, const Vector& x, int grid_resolution,
                         const Tolerances& tol) {
  if (j < 0 || j >= p.q()) throw ConfigError("constraint index out of range");
  require_dimension(x, p.n, "constraint_sup");
  const auto& c = p.constraints[j];
  SupResult out;

  if (const auto* fin = std::get_if<FiniteDomain>(&c.domain)) {
    std::vector<double> vals;
    vals.reserve(fin->values.size());
    for (double v : fin->values) vals.push_back(c.eval(x, v));
    out.value = *std::max_element(vals.begin(), vals.end());
    for (std::size_t k = 0; k < vals.size(); ++k)
      if (vals[k] >= out.value - tol.act_tol) out.arg_set.push_back(fin->values[k]);
    return out;
  }

  const auto& iv = std::get<IntervalDomain>(c.domain);
  IntervalScan scan = scan_interval(c, iv, x, grid_resolution, tol);
  out.value = scan.best;
  std::vector<double> maximizers;
  for (const auto& cand : scan.refined)
    if (cand.value >= out.value - tol.act_tol) add_unique(maximizers, cand.v);
  for (std::size_t k = 0; k < scan.grid.size(); ++k)
    if (scan.values[k] >= out.value - tol.act_tol) add_unique(maximizers, scan.grid[k]);
  for (double v : maximizers) {
    if (in_domain(c.domain, v))
      out.arg_set.push_back(v);
    else
      out.attained_outside_domain = true;
  }
  std::sort(out.arg_set.begin(), out.arg_set.end());
  return out;
}

std::vector<double> active_set(const UncertainMOP& p, int j, const Vector& xbar, double eps,
                               int grid_resolution, const Tolerances& tol) {
  if (eps < 0.0) throw ConfigError("active_set: eps must be nonnegative");
  SupResult sup = constraint_sup(p, j, xbar, grid_resolution, tol);
  const auto& c = p.constraints[j];
  std::vector<double> out = sup.arg_set;
  const double threshold = sup.value - std::max(eps, tol.act_tol);

  if (const auto* fin = std::get_if<FiniteDomain>(&c.domain)) {
    for (double v : fin->values)
      if (c.eval(xbar, v) >= threshold) add_unique(out, v);
  } else {
    const auto& iv = std::get<IntervalDomain>(c.domain);
    const int N = grid_resolution;
    const double h = (iv.hi - iv.lo) / (N - 1);
    for (int k = 0; k < N; ++k) {
      const double v = (k == N - 1) ? iv.hi : iv.lo + k * h;
      if (in_domain(c.domain, v) && c.eval(xbar, v) >= threshold) add_unique(out, v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_robust_feasible(const UncertainMOP& p, const Vector& x, double tol, int grid_resolution) {
  if (tol < 0.0) throw ConfigError("is_robust_feasible: tol must be nonnegative");
  for (int j = 0; j < p.q(); ++j)
    if (constraint_sup(p, j, x, grid_resolution).value > tol) return false;
  return true;
}

}  // namespace hirob
