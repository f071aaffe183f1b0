#include "hirob/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hirob/lp.hpp"
#include "hirob/subdiff.hpp"

namespace hirob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kActiveValueTol = 1e-8;
constexpr double kConeEps = 1e-6;
constexpr double kSamePointTol = 1e-12;
constexpr double kKktResidualTol = 1e-9;
constexpr double kRiseTol = 1e-12;
constexpr std::size_t kVertexTupleCap = 100000;

void require_candidate(const UncertainMOP& p, const Vector& xbar, const Tolerances& tol) {
  require_dimension(xbar, p.n, "candidate");
  if (!is_robust_feasible(p, xbar, 1e-8, tol.constraint_resolution))
    throw DomainError("candidate is not robust feasible");
}

bool same_point(const Vector& a, const Vector& b) {
  return (a - b).lpNorm<Eigen::Infinity>() <= kSamePointTol;
}

Scenario zero_scenario(const UncertainMOP& p) { return Scenario(p.p(), Vector::Zero(p.n)); }

double scenario_norm2(const Scenario& u) {
  double s = 0.0;
  for (const auto& ui : u) s += ui.squaredNorm();
  return s;
}

/// a <= b componentwise with some component below by more than tol.
bool dominated_by(const Vector& a, const Vector& b, double tol) {
  bool strict = false;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i] - tol) strict = true;
  }
  return strict;
}

/// Efficient-mode violation for difference vector delta = F(x) - F(xbar).
bool efficient_violation(const Vector& delta, double strict_tol) {
  bool strict = false;
  for (int i = 0; i < delta.size(); ++i) {
    if (delta[i] > 0.0) return false;
    if (delta[i] < -strict_tol) strict = true;
  }
  return strict;
}

std::vector<Polytope> objective_subdiffs(const UncertainMOP& p, const Vector& xbar,
                                         const Tolerances& tol) {
  std::vector<Polytope> out;
  for (const auto& f : p.objectives) out.push_back(subdiff_scalar(f, xbar, tol));
  return out;
}

/// Rows a.d <= 0 over every eps-active constraint generator.
std::vector<Vector> linearization_rows(const UncertainMOP& p, const Vector& xbar,
                                       const Tolerances& tol) {
  std::vector<Vector> rows;
  for (int j = 0; j < p.q(); ++j) {
    const SupResult sup = constraint_sup(p, j, xbar, tol.constraint_resolution, tol);
    if (sup.value < -kConeEps) continue;
    for (double v : active_set(p, j, xbar, kConeEps, tol.constraint_resolution, tol)) {
      for (auto& g : subdiff_constraint(p, j, xbar, v, tol).vertices) {
        bool dup = false;
        for (const auto& r : rows)
          if ((r - g).lpNorm<Eigen::Infinity>() <= 1e-12) dup = true;
        if (!dup) rows.push_back(std::move(g));
      }
    }
  }
  return rows;
}

bool in_cone(const std::vector<Vector>& rows, const Vector& d) {
  for (const auto& a : rows)
    if (a.dot(d) > 1e-12) return false;
  return true;
}

Vector inf_normalized(const Vector& d) {
  const double m = d.lpNorm<Eigen::Infinity>();
  return m > 0.0 ? Vector(d / m) : d;
}

/// Directions with unit infinity norm: angle net in 2-D, Halton in higher
/// dimensions, plus axes and the boundary rays of the linearization cone.
std::vector<Vector> direction_candidates(int n, int count, const std::vector<Vector>& rows) {
  std::vector<Vector> dirs;
  for (int k = 0; k < n; ++k) {
    dirs.push_back(Vector::Unit(n, k));
    dirs.push_back(-Vector::Unit(n, k));
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      Vector d(2);
      d << std::cos(a), std::sin(a);
      dirs.push_back(inf_normalized(d));
    }
    for (const auto& a : rows) {
      Vector perp(2);
      perp << -a[1], a[0];
      if (perp.lpNorm<Eigen::Infinity>() > 0.0) {
        dirs.push_back(inf_normalized(perp));
        dirs.push_back(inf_normalized(-perp));
      }
    }
  } else if (n > 2) {
    for (int t = 1; t <= count; ++t) {
      Vector z = 2.0 * halton(static_cast<std::uint64_t>(t), n) - Vector::Ones(n);
      if (z.lpNorm<Eigen::Infinity>() > 1e-12) dirs.push_back(inf_normalized(z));
    }
  }
  std::vector<Vector> out;
  for (auto& d : dirs)
    if (in_cone(rows, d)) out.push_back(std::move(d));
  return out;
}

/// A point of U_i with <u, d> > target, or nullopt.
std::optional<Vector> point_beyond(const UncertaintySet& U, const Vector& d, double target) {
  const double s = support_value(U, d);
  if (std::isfinite(s)) {
    Vector u = support_point(U, d);
    if (u.dot(d) > target) return u;
    return std::nullopt;
  }
  const auto& poly = std::get<PolytopeSet>(U.shape);
  const Vector* best_ray = nullptr;
  for (const auto& r : poly.rays)
    if (!best_ray || r.dot(d) > best_ray->dot(d)) best_ray = &r;
  Vector w = poly.vertices.front();
  for (const auto& v : poly.vertices)
    if (v.dot(d) > w.dot(d)) w = v;
  const double gamma = std::max(0.0, (target + 1.0 - w.dot(d)) / best_ray->dot(d));
  return Vector(w + gamma * *best_ray);
}

bool bounded_polyhedral(const UncertaintySet& U) {
  if (std::holds_alternative<BoxSet>(U.shape) || std::holds_alternative<FiniteSet>(U.shape))
    return true;
  if (const auto* poly = std::get_if<PolytopeSet>(&U.shape)) return poly->rays.empty();
  return false;
}

Verdict base_verdict(VerdictStatus status) {
  Verdict v;
  v.status = status;
  return v;
}

}  // namespace

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Refuted: return "Refuted";
    case VerdictStatus::Certified: return "Certified";
    case VerdictStatus::ConsistentAtResolution: return "ConsistentAtResolution";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(CertificateKind k) {
  return k == CertificateKind::IsolatedEfficiency ? "IsolatedEfficiency" : "GeneralizedConvexKKT";
}

std::string to_string(EfficiencyMode m) {
  switch (m) {
    case EfficiencyMode::Weak: return "weak";
    case EfficiencyMode::Efficient: return "efficient";
    case EfficiencyMode::Strict: return "strict";
  }
  return "?";
}

// ---------------------------------------------------------------------------

double default_radius(const UncertainMOP& p) {
  if (!p.box_bounds) throw ConfigError("a default radius needs box_bounds");
  return 0.25 * (p.box_bounds->hi - p.box_bounds->lo).norm();
}

FeasibleLattice feasible_lattice(const UncertainMOP& p, const Vector& xbar, double radius,
                                 int grid, const Tolerances& tol) {
  if (!p.box_bounds) throw ConfigError("lattice oracles need box_bounds");
  if (p.n > 3) throw ConfigError("lattice oracles support n <= 3; supply sample lists instead");
  if (grid < 2) throw ConfigError("lattice grid must have at least 2 points per axis");
  if (!(radius > 0.0)) throw ConfigError("lattice radius must be positive");
  require_dimension(xbar, p.n, "candidate");
  const auto& box = *p.box_bounds;
  const int n = p.n;
  Vector lo(n), hi(n);
  for (int k = 0; k < n; ++k) {
    if (!(box.hi[k] > box.lo[k])) throw ConfigError("box_bounds is degenerate; the lattice is empty");
    lo[k] = std::max(box.lo[k], xbar[k] - radius);
    hi[k] = std::min(box.hi[k], xbar[k] + radius);
    if (lo[k] > hi[k]) throw ConfigError("neighbourhood does not meet box_bounds");
  }

  FeasibleLattice lat;
  lat.fbar = eval_objectives(p, xbar);
  std::vector<int> idx(n, 0);
  Vector x(n);
  while (true) {
    for (int k = 0; k < n; ++k)
      x[k] = idx[k] == grid - 1 ? hi[k] : lo[k] + (hi[k] - lo[k]) * idx[k] / (grid - 1);
    if ((x - xbar).norm() <= radius && is_robust_feasible(p, x, tol.feas_tol, tol.constraint_resolution)) {
      lat.points.push_back(x);
      lat.values.push_back(eval_objectives(p, x));
    }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == grid) idx[k--] = 0;
    if (k < 0) break;
  }
  return lat;
}

std::optional<Vector> lattice_violation(const FeasibleLattice& lat, const Vector& xbar,
                                        const Scenario& u, EfficiencyMode mode,
                                        const Tolerances& tol) {
  const int p = static_cast<int>(lat.fbar.size());
  if (static_cast<int>(u.size()) != p) throw DimensionError("scenario size differs from p");
  Vector delta(p);
  for (std::size_t k = 0; k < lat.points.size(); ++k) {
    const Vector& x = lat.points[k];
    if (same_point(x, xbar)) continue;
    const Vector dx = x - xbar;
    for (int i = 0; i < p; ++i) delta[i] = lat.values[k][i] - lat.fbar[i] - u[i].dot(dx);
    bool hit = false;
    switch (mode) {
      case EfficiencyMode::Weak:
        hit = (delta.array() < -tol.strict_tol).all();
        break;
      case EfficiencyMode::Efficient:
        hit = efficient_violation(delta, tol.strict_tol);
        break;
      case EfficiencyMode::Strict:
        hit = (delta.array() <= 0.0).all();
        break;
    }
    if (hit) return x;
  }
  return std::nullopt;
}

std::optional<Vector> grid_efficiency(const UncertainMOP& p, const Vector& xbar,
                                      const Scenario& u, EfficiencyMode mode, double radius,
                                      int grid, const Tolerances& tol) {
  require_candidate(p, xbar, tol);
  return lattice_violation(feasible_lattice(p, xbar, radius, grid, tol), xbar, u, mode, tol);
}

Verdict highly_robust_scan(const UncertainMOP& p, const Vector& xbar, EfficiencyMode mode,
                           const ScenarioSet& scenarios, double radius, int grid,
                           const Tolerances& tol) {
  if (scenarios.empty()) throw ConfigError("scenario set is empty");
  require_candidate(p, xbar, tol);
  const FeasibleLattice lat = feasible_lattice(p, xbar, radius, grid, tol);

  Verdict out = base_verdict(VerdictStatus::ConsistentAtResolution);
  out.resolution = {{"grid", grid},
                    {"radius", radius},
                    {"lattice_points", static_cast<double>(lat.points.size())},
                    {"scenarios", static_cast<double>(scenarios.size())},
                    {"strict_tol", tol.strict_tol}};
  double best_norm = kInf;
  std::size_t refuting = 0;
  for (const auto& s : scenarios.scenarios()) {
    auto x = lattice_violation(lat, xbar, s.u, mode, tol);
    if (!x) continue;
    ++refuting;
    const double nu = scenario_norm2(s.u);
    if (nu < best_norm) {
      best_norm = nu;
      out.status = VerdictStatus::Refuted;
      out.witness = Witness{std::move(x), s.u, std::nullopt, std::nullopt};
    }
  }
  if (refuting) {
    out.resolution["refuting_scenarios"] = static_cast<double>(refuting);
    out.notes.push_back(fmt::format("{} mode violated; witness scenario has least norm", to_string(mode)));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<ActiveConstraint> active_constraints(const UncertainMOP& p, const Vector& xbar,
                                                 const Tolerances& tol) {
  std::vector<ActiveConstraint> out;
  for (int j = 0; j < p.q(); ++j) {
    const SupResult sup = constraint_sup(p, j, xbar, tol.constraint_resolution, tol);
    if (std::abs(sup.value) > kActiveValueTol || sup.arg_set.empty()) continue;
    ActiveConstraint ac;
    ac.j = j;
    ac.value = sup.value;
    ac.v = active_set(p, j, xbar, 0.0, tol.constraint_resolution, tol);
    for (double v : ac.v) {
      for (auto& g : subdiff_constraint(p, j, xbar, v, tol).vertices) {
        bool dup = false;
        for (const auto& h : ac.generators)
          if ((h - g).lpNorm<Eigen::Infinity>() <= 1e-12) dup = true;
        if (!dup) {
          ac.generators.push_back(std::move(g));
          ac.generator_v.push_back(v);
        }
      }
    }
    out.push_back(std::move(ac));
  }
  return out;
}

bool cq2(const UncertainMOP& p, const Vector& xbar, const Tolerances& tol) {
  Polytope hull;
  for (const auto& ac : active_constraints(p, xbar, tol))
    for (const auto& g : ac.generators) hull.vertices.push_back(g);
  if (hull.vertices.empty()) return true;
  return !contains_point(hull, Vector::Zero(p.n), 1e-9);
}

// ---------------------------------------------------------------------------

std::optional<RefutingPair> necessary_refute(const UncertainMOP& p, const Vector& xbar,
                                             int direction_net, const Tolerances& tol) {
  if (direction_net < 1) throw ConfigError("direction net must be positive");
  require_candidate(p, xbar, tol);
  const std::vector<Polytope> df = objective_subdiffs(p, xbar, tol);
  const std::vector<Vector> rows = linearization_rows(p, xbar, tol);

  for (const auto& d : direction_candidates(p.n, direction_net, rows)) {
    Scenario u;
    for (int i = 0; i < p.p(); ++i) {
      const double target = support_value(df[i], d) + tol.strict_tol;
      auto ui = point_beyond(p.uncertainty[i], d, target);
      if (!ui) break;
      u.push_back(std::move(*ui));
    }
    if (static_cast<int>(u.size()) == p.p()) return RefutingPair{d, std::move(u)};
  }

  for (const auto& U : p.uncertainty)
    if (!bounded_polyhedral(U)) return std::nullopt;

  // Exact route: for a fixed vertex tuple w the condition is a homogeneous
  // strict system <x* - w_i, d> < 0 on the linearization cone.
  std::vector<std::vector<Vector>> verts;
  for (const auto& U : p.uncertainty) verts.push_back(as_polytope(U).vertices);
  const int comps = p.diagonal ? 1 : p.p();
  std::size_t total = 1;
  for (int i = 0; i < comps; ++i) {
    total *= verts[i].size();
    if (total > kVertexTupleCap) return std::nullopt;
  }
  std::vector<LinearIneq> weak;
  for (const auto& a : rows) weak.push_back({a, 0.0});
  std::vector<std::size_t> idx(comps, 0);
  for (std::size_t t = 0; t < total; ++t) {
    Scenario u;
    for (int i = 0; i < p.p(); ++i) u.push_back(verts[p.diagonal ? 0 : i][idx[p.diagonal ? 0 : i]]);
    std::vector<LinearIneq> strict;
    for (int i = 0; i < p.p(); ++i)
      for (const auto& xs : df[i].vertices) strict.push_back({xs - u[i], 0.0});
    if (auto w = solve_strict_feasibility(strict, weak, p.n, tol.strict_tol)) {
      return RefutingPair{inf_normalized(w->x), std::move(u)};
    }
    for (int i = comps; i-- > 0;) {
      if (++idx[i] < verts[i].size()) break;
      idx[i] = 0;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

struct KktData {
  std::vector<Polytope> df;
  std::vector<ActiveConstraint> active;
};

KktData kkt_data(const UncertainMOP& p, const Vector& xbar, const Tolerances& tol) {
  return {objective_subdiffs(p, xbar, tol), active_constraints(p, xbar, tol)};
}

std::optional<Multipliers> kkt_solve_with(const UncertainMOP& p, const KktData& data,
                                          const Scenario& u, KktNormalization norm) {
  if (static_cast<int>(u.size()) != p.p()) throw DimensionError("scenario size differs from p");
  const int n = p.n;
  std::vector<std::pair<int, int>> beta_index;  // (i, k)
  for (int i = 0; i < p.p(); ++i)
    for (int k = 0; k < static_cast<int>(data.df[i].vertices.size()); ++k)
      beta_index.emplace_back(i, k);
  std::vector<std::pair<int, int>> gamma_index;  // (active idx, generator)
  for (int a = 0; a < static_cast<int>(data.active.size()); ++a)
    for (int k = 0; k < static_cast<int>(data.active[a].generators.size()); ++k)
      gamma_index.emplace_back(a, k);
  const int nb = static_cast<int>(beta_index.size());
  const int ng = static_cast<int>(gamma_index.size());
  const int s = nb + ng;

  // column c contributes col_vec(c) to the inclusion residual
  auto col_vec = [&](int c) -> Vector {
    if (c < nb) {
      const auto [i, k] = beta_index[c];
      return data.df[i].vertices[k] - u[i];
    }
    const auto [a, k] = gamma_index[c - nb];
    return data.active[a].generators[k];
  };

  LinearProgram lp(s + 1);
  lp.cost[s] = 1.0;
  for (int r = 0; r < n; ++r) {
    Vector row = Vector::Zero(s + 1);
    for (int c = 0; c < s; ++c) row[c] = col_vec(c)[r];
    row[s] = -1.0;
    lp.add_row(row, RowSense::LessEqual, 0.0);
    row[s] = 1.0;
    lp.add_row(row, RowSense::GreaterEqual, 0.0);
  }
  Vector norm_row = Vector::Zero(s + 1);
  norm_row.head(nb).setOnes();
  if (norm == KktNormalization::Joint) norm_row.segment(nb, ng).setOnes();
  lp.add_row(norm_row, RowSense::Equal, 1.0);

  const LpResult res = solve_or_throw(lp);
  if (res.status != LpStatus::Optimal) throw SolverError("KKT LP did not reach an optimum");
  if (res.x[s] > kKktResidualTol) return std::nullopt;

  Multipliers m;
  m.lambda = Vector::Zero(p.p());
  m.mu = Vector::Zero(p.q());
  m.objective_weights.resize(p.p());
  for (int i = 0; i < p.p(); ++i) m.objective_weights[i].assign(data.df[i].vertices.size(), 0.0);
  Vector residual = Vector::Zero(n);
  for (int c = 0; c < nb; ++c) {
    const double w = std::max(0.0, res.x[c]);
    const auto [i, k] = beta_index[c];
    m.lambda[i] += w;
    m.objective_weights[i][k] = w;
    residual += w * col_vec(c);
  }
  for (const auto& ac : data.active) {
    ConstraintWeights cw;
    cw.j = ac.j;
    cw.v = ac.generator_v;
    cw.generators = ac.generators;
    cw.weights.assign(ac.generators.size(), 0.0);
    m.constraint_weights.push_back(std::move(cw));
  }
  for (int c = nb; c < s; ++c) {
    const double w = std::max(0.0, res.x[c]);
    const auto [a, k] = gamma_index[c - nb];
    m.mu[data.active[a].j] += w;
    m.constraint_weights[a].weights[k] = w;
    residual += w * col_vec(c);
  }
  for (int i = 0; i < p.p(); ++i)
    if (m.lambda[i] > 0.0)
      for (auto& w : m.objective_weights[i]) w /= m.lambda[i];
  for (std::size_t a = 0; a < data.active.size(); ++a) {
    const double mu = m.mu[data.active[a].j];
    if (mu > 0.0)
      for (auto& w : m.constraint_weights[a].weights) w /= mu;
  }
  m.residual = residual.lpNorm<Eigen::Infinity>();
  return m;
}

}  // namespace

std::optional<Multipliers> kkt_solve(const UncertainMOP& p, const Vector& xbar, const Scenario& u,
                                     KktNormalization norm, const Tolerances& tol) {
  require_candidate(p, xbar, tol);
  return kkt_solve_with(p, kkt_data(p, xbar, tol), u, norm);
}

Verdict highly_robust_kkt(const UncertainMOP& p, const Vector& xbar, const ScenarioSet& scenarios,
                          KktNormalization norm, const Tolerances& tol) {
  if (scenarios.empty()) throw ConfigError("scenario set is empty");
  require_candidate(p, xbar, tol);
  const KktData data = kkt_data(p, xbar, tol);
  Verdict out = base_verdict(VerdictStatus::ConsistentAtResolution);
  out.resolution = {{"scenarios", static_cast<double>(scenarios.size())},
                    {"constraint_resolution", tol.constraint_resolution},
                    {"residual_tol", kKktResidualTol}};
  out.notes.push_back(norm == KktNormalization::Joint ? "normalization: joint"
                                                      : "normalization: lambda only");
  for (const auto& s : scenarios.scenarios()) {
    if (kkt_solve_with(p, data, s.u, norm)) continue;
    const bool qualified = cq2(p, xbar, tol);
    out.status = qualified ? VerdictStatus::Refuted : VerdictStatus::Inconclusive;
    out.witness = Witness{xbar, s.u, std::nullopt, std::nullopt};
    out.notes.push_back(qualified ? "KKT system infeasible at this scenario with CQ2 satisfied"
                                  : "KKT system infeasible but CQ2 fails");
    return out;
  }
  return out;
}

// ---------------------------------------------------------------------------

ConvexityResult generalized_convexity(const UncertainMOP& p, const Vector& xbar,
                                      const std::vector<Vector>& x_samples,
                                      const ScenarioSet& scenarios, bool strict,
                                      bool include_constraints, const Tolerances& tol) {
  require_dimension(xbar, p.n, "candidate");
  const std::vector<Polytope> df = objective_subdiffs(p, xbar, tol);

  struct ConstraintRow {
    int j;
    double v;
    Vector g;
  };
  std::vector<ConstraintRow> crow;
  if (include_constraints) {
    for (int j = 0; j < p.q(); ++j)
      for (double v : active_set(p, j, xbar, 0.0, tol.constraint_resolution, tol))
        for (auto& g : subdiff_constraint(p, j, xbar, v, tol).vertices)
          crow.push_back({j, v, std::move(g)});
  }
  const Vector fbar = eval_objectives(p, xbar);

  ConvexityResult out;
  for (const auto& x : x_samples) {
    require_dimension(x, p.n, "sample point");
    if (strict && same_point(x, xbar)) continue;
    const Vector fx = eval_objectives(p, x);
    const Vector dx = x - xbar;
    std::vector<LinearIneq> weak;
    for (const auto& r : crow)
      weak.push_back({r.g, p.constraints[r.j].eval(x, r.v) - p.constraints[r.j].eval(xbar, r.v)});
    const double bound = std::max(1.0, 2.0 * dx.lpNorm<Eigen::Infinity>());
    for (const auto& s : scenarios.scenarios()) {
      std::vector<LinearIneq> obj;
      for (int i = 0; i < p.p(); ++i) {
        const double rhs = fx[i] - fbar[i] - s.u[i].dot(dx);
        for (const auto& xs : df[i].vertices) obj.push_back({xs - s.u[i], rhs});
      }
      std::optional<StrictWitness> w;
      if (strict) {
        w = solve_strict_feasibility(obj, weak, p.n, tol.strict_tol, bound);
      } else {
        std::vector<LinearIneq> all = weak;
        all.insert(all.end(), obj.begin(), obj.end());
        w = solve_strict_feasibility({}, all, p.n, tol.strict_tol, bound);
      }
      if (!w) {
        out.holds = false;
        out.x = x;
        out.u = s.u;
        out.d.reset();
        return out;
      }
      out.d = w->x;
    }
  }
  return out;
}

Verdict sufficiency_certificate(const UncertainMOP& p, const Vector& xbar,
                                const ScenarioSet& scenarios, const std::vector<Vector>& x_samples,
                                bool strict, const Tolerances& tol) {
  Verdict kkt = highly_robust_kkt(p, xbar, scenarios, KktNormalization::LambdaOnly, tol);
  if (kkt.status != VerdictStatus::ConsistentAtResolution) {
    kkt.notes.push_back("sufficiency gate: KKT condition");
    return kkt;
  }
  const ConvexityResult gc = generalized_convexity(p, xbar, x_samples, scenarios, strict, true, tol);
  Verdict out = base_verdict(VerdictStatus::Certified);
  out.resolution = kkt.resolution;
  out.resolution["samples"] = static_cast<double>(x_samples.size());
  if (!gc.holds) {
    out.status = VerdictStatus::Inconclusive;
    out.witness = Witness{gc.x, gc.u, std::nullopt, std::nullopt};
    out.notes.push_back(strict ? "strict generalized convexity fails at the reported (x, u)"
                               : "generalized convexity fails at the reported (x, u)");
    return out;
  }
  out.certificate = CertificateKind::GeneralizedConvexKKT;
  out.notes.push_back(strict
                          ? "local highly robust strict efficiency at sampled resolution"
                          : "local highly robust weak efficiency at sampled resolution");
  return out;
}

// ---------------------------------------------------------------------------

IsolatedResult isolated_check(const UncertainMOP& p, const Vector& xbar, double L, double radius,
                              int grid, const Tolerances& tol) {
  if (!(L > 0.0)) throw ConfigError("isolated_check: L must be positive");
  require_candidate(p, xbar, tol);
  const FeasibleLattice lat = feasible_lattice(p, xbar, radius, grid, tol);
  IsolatedResult out;
  out.margin = kInf;
  for (std::size_t k = 0; k < lat.points.size(); ++k) {
    const Vector& x = lat.points[k];
    if (same_point(x, xbar)) continue;
    const double ratio = (lat.values[k] - lat.fbar).maxCoeff() / (x - xbar).norm();
    if (ratio < out.margin) {
      out.margin = ratio;
      out.worst_x = x;
    }
  }
  out.holds = out.margin >= L;
  return out;
}

Verdict isolated_implies_hr(const UncertainMOP& p, const Vector& xbar, double radius, int grid,
                            const Tolerances& tol) {
  double L = 0.0;
  for (const auto& U : p.uncertainty) {
    if (!U.bounded()) throw NotApplicable("isolated-efficiency route needs bounded uncertainty sets");
    L = std::max(L, norm_sup(U).value);
  }
  L += tol.strict_tol;
  const IsolatedResult iso = isolated_check(p, xbar, L, radius, grid, tol);
  Verdict out = base_verdict(iso.holds ? VerdictStatus::Certified : VerdictStatus::Inconclusive);
  out.resolution = {{"grid", grid}, {"radius", radius}, {"L", L},
                    {"margin", iso.margin}};
  if (iso.holds) {
    out.certificate = CertificateKind::IsolatedEfficiency;
    out.notes.push_back("highly robust strict efficiency at lattice resolution");
  } else {
    out.witness = Witness{iso.worst_x, std::nullopt, std::nullopt, std::nullopt};
    out.notes.push_back("isolation modulus below the uncertainty norm bound");
  }
  return out;
}

StrictnessResult strictness_condition(const UncertainMOP& p, const Vector& xbar,
                                      const std::vector<Vector>& x_samples,
                                      const Tolerances& tol) {
  require_dimension(xbar, p.n, "candidate");
  for (const auto& x : x_samples) {
    require_dimension(x, p.n, "sample point");
    if (same_point(x, xbar)) continue;
    const Vector d = x - xbar;
    for (const auto& U : p.uncertainty)
      if (!(support_value(U, d) > tol.strict_tol)) return {false, x};
  }
  return {};
}

// ---------------------------------------------------------------------------

Verdict worst_case_check(const UncertainMOP& p, const Vector& xbar, double radius, int grid,
                         const Tolerances& tol) {
  require_candidate(p, xbar, tol);
  Verdict out = base_verdict(VerdictStatus::ConsistentAtResolution);
  out.resolution = {{"grid", grid}, {"radius", radius}};
  for (const auto& U : p.uncertainty) {
    if (!U.bounded()) {
      out.status = VerdictStatus::Inconclusive;
      out.notes.push_back("worst-case objective is +inf for an unbounded uncertainty set");
      return out;
    }
  }
  const FeasibleLattice lat = feasible_lattice(p, xbar, radius, grid, tol);
  auto worst = [&](const Vector& f, const Vector& x) {
    Vector F = f;
    for (int i = 0; i < p.p(); ++i) F[i] += support_value(p.uncertainty[i], Vector(-x));
    return F;
  };
  const Vector Fbar = worst(lat.fbar, xbar);
  out.resolution["lattice_points"] = static_cast<double>(lat.points.size());
  for (std::size_t k = 0; k < lat.points.size(); ++k) {
    if (same_point(lat.points[k], xbar)) continue;
    const Vector delta = worst(lat.values[k], lat.points[k]) - Fbar;
    if (efficient_violation(delta, tol.strict_tol)) {
      out.status = VerdictStatus::Refuted;
      out.witness = Witness{lat.points[k], std::nullopt, std::nullopt, std::nullopt};
      out.notes.push_back("worst-case objective dominated at the witness");
      return out;
    }
  }
  return out;
}

Verdict set_based_check(const UncertainMOP& p, const Vector& xbar, const ScenarioSet& scenarios,
                        double radius, int grid, const Tolerances& tol) {
  if (scenarios.empty()) throw ConfigError("scenario set is empty");
  require_candidate(p, xbar, tol);
  const FeasibleLattice lat = feasible_lattice(p, xbar, radius, grid, tol);

  std::vector<Vector> fbar_set;
  for (const auto& s : scenarios.scenarios()) fbar_set.push_back(eval_objective_scenario(p, xbar, s.u));
  // Maximal elements of {f(xbar, u')}: a dominating u' can always be replaced
  // by a maximal one.
  Vector top = fbar_set.front();
  for (const auto& f : fbar_set) top = top.cwiseMax(f);
  std::vector<Vector> maximal;
  for (const auto& f : fbar_set)
    if ((f - top).lpNorm<Eigen::Infinity>() == 0.0) {
      maximal.push_back(top);
      break;
    }
  if (maximal.empty()) {
    for (std::size_t a = 0; a < fbar_set.size(); ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < fbar_set.size() && !dominated; ++b)
        dominated = b != a && (fbar_set[b].array() >= fbar_set[a].array()).all() &&
                    (fbar_set[b] != fbar_set[a] || b < a);
      if (!dominated) maximal.push_back(fbar_set[a]);
    }
  }

  Verdict out = base_verdict(VerdictStatus::ConsistentAtResolution);
  out.resolution = {{"grid", grid},
                    {"radius", radius},
                    {"lattice_points", static_cast<double>(lat.points.size())},
                    {"scenarios", static_cast<double>(scenarios.size())}};
  for (std::size_t k = 0; k < lat.points.size(); ++k) {
    const Vector& x = lat.points[k];
    bool all = true;
    for (const auto& s : scenarios.scenarios()) {
      Vector fx = lat.values[k];
      for (int i = 0; i < p.p(); ++i) fx[i] -= s.u[i].dot(x);
      bool any = false;
      for (const auto& m : maximal)
        if (dominated_by(fx, m, tol.strict_tol)) {
          any = true;
          break;
        }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) {
      out.status = VerdictStatus::Refuted;
      out.witness = Witness{x, std::nullopt, std::nullopt, std::nullopt};
      out.notes.push_back("every sampled outcome at the witness is dominated by an outcome at the candidate");
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// max_i over dropping objectives of min_k over rising objectives of drop/rise.
double tradeoff_score(const Vector& f, const Vector& fbar) {
  double best = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double drop = fbar[i] - f[i];
    if (!(drop > kRiseTol)) continue;
    double worst = kInf;
    for (int k = 0; k < f.size(); ++k) {
      const double rise = f[k] - fbar[k];
      if (rise > kRiseTol) worst = std::min(worst, drop / rise);
    }
    // no rising objective: the point dominates and is left to the efficiency check
    if (std::isfinite(worst)) best = std::max(best, worst);
  }
  return best;
}

struct RayProbe {
  double score = 0.0;
  Vector x;
};

class RaySearch {
 public:
  RaySearch(const UncertainMOP& p, const Vector& xbar, const Vector& fbar, double reach,
            const Tolerances& tol)
      : p_(p), xbar_(xbar), fbar_(fbar), reach_(reach), tol_(tol) {}

  bool feasible(const Vector& x) const {
    const auto& box = *p_.box_bounds;
    for (int k = 0; k < x.size(); ++k)
      if (x[k] < box.lo[k] || x[k] > box.hi[k]) return false;
    return is_robust_feasible(p_, x, 0.0, tol_.constraint_resolution);
  }

  /// Scores points xbar + t d for t = t_max 2^-k, t_max the feasible reach.
  RayProbe probe(const Vector& d) const {
    RayProbe best{0.0, xbar_};
    double lo = 0.0, hi = reach_;
    if (!feasible(xbar_ + hi * d)) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(xbar_ + mid * d) ? lo : hi) = mid;
      }
      hi = lo;
    }
    double t = hi;
    for (int k = 0; k < 48 && t > 0.0; ++k, t *= 0.5) {
      const Vector x = xbar_ + t * d;
      const double s = tradeoff_score(eval_objectives(p_, x), fbar_);
      if (s > best.score) best = {s, x};
    }
    return best;
  }

 private:
  const UncertainMOP& p_;
  const Vector& xbar_;
  const Vector& fbar_;
  double reach_;
  const Tolerances& tol_;
};

}  // namespace

Verdict proper_refuter(const UncertainMOP& p, const Vector& xbar, int direction_net,
                       const std::vector<double>& M_list, double radius, int grid,
                       const Tolerances& tol) {
  if (M_list.empty()) throw ConfigError("M list is empty");
  require_candidate(p, xbar, tol);
  const double M_max = *std::max_element(M_list.begin(), M_list.end());
  const FeasibleLattice lat = feasible_lattice(p, xbar, radius, grid, tol);

  Verdict out = base_verdict(VerdictStatus::Inconclusive);
  out.resolution = {{"grid", grid},
                    {"radius", radius},
                    {"direction_net", direction_net},
                    {"M_max", M_max},
                    {"lattice_points", static_cast<double>(lat.points.size())}};

  if (auto x = lattice_violation(lat, xbar, zero_scenario(p), EfficiencyMode::Efficient, tol)) {
    out.witness = Witness{*x, zero_scenario(p), std::nullopt, std::nullopt};
    out.notes.push_back("precondition fails: candidate is not efficient for the nominal problem");
    return out;
  }

  // Step 1: the support-positivity condition on sampled feasible directions.
  std::vector<Vector> dirs;
  for (const auto& x : lat.points)
    if (!same_point(x, xbar)) dirs.push_back((x - xbar).normalized());
  for (const auto& d : direction_candidates(p.n, direction_net, linearization_rows(p, xbar, tol)))
    dirs.push_back(d.normalized());
  for (const auto& d : dirs) {
    for (const auto& U : p.uncertainty) {
      if (!(support_value(U, d) > tol.strict_tol)) {
        out.witness = Witness{std::nullopt, std::nullopt, d, std::nullopt};
        out.notes.push_back("direction condition fails: some uncertainty set has nonpositive support");
        return out;
      }
    }
  }

  // Step 2: tradeoff ratios on the lattice, then along refined rays.
  RayProbe best{0.0, xbar};
  std::vector<std::pair<double, Vector>> seeds;
  for (std::size_t k = 0; k < lat.points.size(); ++k) {
    if (same_point(lat.points[k], xbar)) continue;
    const double s = tradeoff_score(lat.values[k], lat.fbar);
    if (s > best.score) best = {s, lat.points[k]};
    if (s > 0.0) seeds.emplace_back(s, (lat.points[k] - xbar).normalized());
  }
  const double reach = std::isfinite(radius) ? radius : (p.box_bounds->hi - p.box_bounds->lo).norm();
  RaySearch search(p, xbar, lat.fbar, reach, tol);
  const int net = std::min(direction_net, 720);
  for (const auto& d : direction_candidates(p.n, net, {})) {
    const RayProbe r = search.probe(d.normalized());
    if (r.score > 0.0) seeds.emplace_back(r.score, d.normalized());
    if (r.score > best.score) best = r;
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  if (seeds.size() > 3) seeds.resize(3);

  for (auto [score, d] : seeds) {
    double step = 0.1;
    RayProbe cur = search.probe(d);
    for (int it = 0; it < 4000 && step >= 1e-12 && cur.score <= 10.0 * M_max; ++it) {
      bool improved = false;
      for (int k = 0; k < p.n && !improved; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = d + sign * step * Vector::Unit(p.n, k);
          if (trial.norm() == 0.0) continue;
          trial.normalize();
          const RayProbe r = search.probe(trial);
          if (r.score > cur.score) {
            cur = r;
            d = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (cur.score > best.score) best = cur;
    if (best.score > 10.0 * M_max) break;
  }

  out.resolution["tradeoff_score"] = best.score;
  if (best.score > M_max) {
    out.status = VerdictStatus::Refuted;
    out.witness = Witness{best.x, std::nullopt, Vector(best.x - xbar), std::nullopt};
    out.notes.push_back(fmt::format(
        "tradeoff ratio {:.6g} exceeds every M; candidate is not properly efficient, so it is not "
        "highly robust weakly efficient",
        best.score));
  } else {
    out.notes.push_back("tradeoff ratios stay bounded by the largest M");
  }
  return out;
}

}  // namespace hirob
