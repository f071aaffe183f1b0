#include "hirob/geometry.hpp"

#include <cmath>
#include <limits>

#include "hirob/lp.hpp"

namespace hirob {

namespace {

constexpr double kRayTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void box_corners(const BoxSet& box, std::vector<Vector>& out) {
  const int n = static_cast<int>(box.lo.size());
  // Degenerate axes collapse, so only distinct corners are produced.
  std::vector<int> free_axes;
  for (int k = 0; k < n; ++k)
    if (box.hi[k] > box.lo[k]) free_axes.push_back(k);
  const std::size_t count = std::size_t{1} << free_axes.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector c = box.lo;
    for (std::size_t b = 0; b < free_axes.size(); ++b)
      if (mask & (std::size_t{1} << b)) c[free_axes[b]] = box.hi[free_axes[b]];
    out.push_back(std::move(c));
  }
}

}  // namespace

Polytope Polytope::point(const Vector& y) { return Polytope{{y}, {}}; }

Polytope Polytope::segment(const Vector& a, const Vector& b) {
  Polytope P{{a, b}, {}};
  P.dedupe();
  return P;
}

int Polytope::dimension() const {
  return vertices.empty() ? 0 : static_cast<int>(vertices.front().size());
}

void Polytope::validate() const {
  if (vertices.empty()) throw ValidationError("polytope: empty vertex list");
  const int n = dimension();
  for (const auto* list : {&vertices, &rays})
    for (const auto& v : *list) {
      if (v.size() != n) throw DimensionError("polytope: generator dimension mismatch");
      if (!v.allFinite()) throw ValidationError("polytope: non-finite generator");
    }
}

void Polytope::dedupe(double tol) {
  std::vector<Vector> kept;
  kept.reserve(vertices.size());
  for (auto& v : vertices) {
    bool dup = false;
    for (const auto& k : kept)
      if ((k - v).lpNorm<Eigen::Infinity>() <= tol) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(std::move(v));
  }
  vertices = std::move(kept);
}

Polytope Polytope::translated(const Vector& shift) const {
  Polytope out = *this;
  for (auto& v : out.vertices) v += shift;
  return out;
}

// ---------------------------------------------------------------------------

double support_value(const Polytope& P, const Vector& d) {
  require_dimension(d, P.dimension(), "support_value");
  for (const auto& r : P.rays)
    if (d.dot(r) > kRayTol) return kInf;
  double best = -kInf;
  for (const auto& v : P.vertices) best = std::max(best, d.dot(v));
  return best;
}

double support_value(const UncertaintySet& U, const Vector& d) {
  require_dimension(d, U.dimension(), "support_value");
  if (const auto* poly = std::get_if<PolytopeSet>(&U.shape))
    return support_value(Polytope{poly->vertices, poly->rays}, d);
  if (const auto* box = std::get_if<BoxSet>(&U.shape)) {
    double s = 0.0;
    for (int k = 0; k < d.size(); ++k) s += d[k] >= 0.0 ? d[k] * box->hi[k] : d[k] * box->lo[k];
    return s;
  }
  if (const auto* ball = std::get_if<BallSet>(&U.shape))
    return ball->center.dot(d) + ball->radius * d.norm();
  if (const auto* ell = std::get_if<EllipsoidSet>(&U.shape))
    return ell->center.dot(d) + std::sqrt(std::max(0.0, d.dot(ell->shape * d)));
  const auto& fin = std::get<FiniteSet>(U.shape);
  double best = -kInf;
  for (const auto& p : fin.points) best = std::max(best, d.dot(p));
  return best;
}

Vector support_point(const UncertaintySet& U, const Vector& d) {
  require_dimension(d, U.dimension(), "support_point");
  if (!std::isfinite(support_value(U, d)))
    throw DomainError("support_point: support is unbounded in this direction");
  auto argmax = [&](const std::vector<Vector>& pts) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pts.size(); ++k)
      if (d.dot(pts[k]) > d.dot(pts[best])) best = k;
    return pts[best];
  };
  if (const auto* poly = std::get_if<PolytopeSet>(&U.shape)) return argmax(poly->vertices);
  if (const auto* box = std::get_if<BoxSet>(&U.shape)) {
    Vector u(d.size());
    for (int k = 0; k < d.size(); ++k) u[k] = d[k] > 0.0 ? box->hi[k] : box->lo[k];
    return u;
  }
  if (const auto* ball = std::get_if<BallSet>(&U.shape)) {
    const double nd = d.norm();
    return nd == 0.0 ? ball->center : Vector(ball->center + ball->radius * d / nd);
  }
  if (const auto* ell = std::get_if<EllipsoidSet>(&U.shape)) {
    const Vector Ad = ell->shape * d;
    const double q = std::sqrt(std::max(0.0, d.dot(Ad)));
    return q == 0.0 ? ell->center : Vector(ell->center + Ad / q);
  }
  return argmax(std::get<FiniteSet>(U.shape).points);
}

Polytope as_polytope(const UncertaintySet& U) {
  if (const auto* poly = std::get_if<PolytopeSet>(&U.shape))
    return Polytope{poly->vertices, poly->rays};
  if (const auto* box = std::get_if<BoxSet>(&U.shape)) {
    Polytope P;
    box_corners(*box, P.vertices);
    return P;
  }
  if (const auto* fin = std::get_if<FiniteSet>(&U.shape)) {
    Polytope P{fin->points, {}};
    P.dedupe();
    return P;
  }
  throw NotApplicable(U.kind_name() + " set has no finite generator representation");
}

// ---------------------------------------------------------------------------

double membership_residual(const Polytope& P, const Vector& y) {
  P.validate();
  const int n = P.dimension();
  require_dimension(y, n, "membership_residual");
  const int nv = static_cast<int>(P.vertices.size());
  const int nr = static_cast<int>(P.rays.size());
  const int s = nv + nr;
  LinearProgram lp(s + 1);
  lp.cost[s] = 1.0;
  Vector sum_row = Vector::Zero(s + 1);
  sum_row.head(nv).setOnes();
  lp.add_row(sum_row, RowSense::Equal, 1.0);
  for (int k = 0; k < n; ++k) {
    Vector row = Vector::Zero(s + 1);
    for (int v = 0; v < nv; ++v) row[v] = P.vertices[v][k];
    for (int r = 0; r < nr; ++r) row[nv + r] = P.rays[r][k];
    row[s] = -1.0;
    lp.add_row(row, RowSense::LessEqual, y[k]);
    row[s] = 1.0;
    lp.add_row(row, RowSense::GreaterEqual, y[k]);
  }
  const LpResult res = solve_or_throw(lp);
  if (res.status != LpStatus::Optimal)
    throw SolverError("membership LP did not reach an optimum");
  return std::max(0.0, res.x[s]);
}

bool contains_point(const Polytope& P, const Vector& y, double tol) {
  if (tol < 0.0) throw ConfigError("contains_point: tol must be nonnegative");
  return membership_residual(P, y) <= tol;
}

bool contains_point(const UncertaintySet& U, const Vector& y, double tol) {
  require_dimension(y, U.dimension(), "contains_point");
  if (const auto* box = std::get_if<BoxSet>(&U.shape)) {
    for (int k = 0; k < y.size(); ++k)
      if (y[k] < box->lo[k] - tol || y[k] > box->hi[k] + tol) return false;
    return true;
  }
  if (const auto* ball = std::get_if<BallSet>(&U.shape))
    return (y - ball->center).norm() <= ball->radius + tol;
  if (const auto* ell = std::get_if<EllipsoidSet>(&U.shape)) {
    const Vector z = y - ell->center;
    const Vector w = ell->shape.llt().solve(z);
    const double q = z.dot(w);
    if (q <= 1.0) return true;
    // distance to the boundary along z is |z| (1 - 1/sqrt(q))
    return z.norm() * (1.0 - 1.0 / std::sqrt(q)) <= tol;
  }
  if (const auto* fin = std::get_if<FiniteSet>(&U.shape)) {
    for (const auto& p : fin->points)
      if ((p - y).lpNorm<Eigen::Infinity>() <= tol) return true;
    return false;
  }
  return contains_point(as_polytope(U), y, tol);
}

// ---------------------------------------------------------------------------

Polytope minkowski_sum(const std::vector<ScaledPolytope>& parts, std::size_t cap) {
  if (parts.empty()) throw ConfigError("minkowski_sum: no parts");
  const int n = parts.front().set.dimension();
  Polytope acc = Polytope::point(Vector::Zero(n));
  for (const auto& part : parts) {
    if (part.coeff < 0.0) throw ConfigError("minkowski_sum: negative coefficient");
    part.set.validate();
    if (part.set.dimension() != n) throw DimensionError("minkowski_sum: dimension mismatch");
    if (part.coeff == 0.0) continue;
    const std::size_t count = acc.vertices.size() * part.set.vertices.size();
    if (count > cap)
      throw CombinatorialBlowup("minkowski_sum: " + std::to_string(count) +
                                " generators exceed the cap of " + std::to_string(cap));
    Polytope next;
    next.vertices.reserve(count);
    for (const auto& a : acc.vertices)
      for (const auto& v : part.set.vertices) next.vertices.push_back(a + part.coeff * v);
    next.dedupe();
    next.rays = std::move(acc.rays);
    for (const auto& r : part.set.rays) next.rays.push_back(part.coeff * r);
    acc = std::move(next);
  }
  return acc;
}

// ---------------------------------------------------------------------------

std::optional<StrictWitness> solve_strict_feasibility(const std::vector<LinearIneq>& strict_rows,
                                                      const std::vector<LinearIneq>& weak_rows,
                                                      int n, double strict_tol, double bound) {
  if (n <= 0) throw DimensionError("solve_strict_feasibility: n must be positive");
  if (!(bound > 0.0)) throw ConfigError("solve_strict_feasibility: bound must be positive");
  LinearProgram lp(n + 1);
  for (int k = 0; k < n; ++k) lp.set_bounds(k, -bound, bound);
  lp.set_bounds(n, -kInf, 1.0);
  lp.cost[n] = -1.0;
  for (const auto& r : strict_rows) {
    require_dimension(r.a, n, "strict row");
    Vector row(n + 1);
    row << r.a, 1.0;
    lp.add_row(row, RowSense::LessEqual, r.rhs);
  }
  for (const auto& r : weak_rows) {
    require_dimension(r.a, n, "weak row");
    Vector row(n + 1);
    row << r.a, 0.0;
    lp.add_row(row, RowSense::LessEqual, r.rhs);
  }
  const LpResult res = solve_or_throw(lp);
  if (res.status == LpStatus::Infeasible) return std::nullopt;
  if (res.status != LpStatus::Optimal) throw SolverError("strict feasibility LP failed");
  const double t = res.x[n];
  if (!(t > strict_tol)) return std::nullopt;

  StrictWitness w{res.x.head(n), kInf};
  for (const auto& r : strict_rows) w.margin = std::min(w.margin, r.rhs - r.a.dot(w.x));
  for (const auto& r : weak_rows)
    if (r.a.dot(w.x) > r.rhs + 1e-9) return std::nullopt;
  if (!(w.margin >= strict_tol)) return std::nullopt;
  return w;
}

}  // namespace hirob
