#include "hirob/scenarios.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <fmt/format.h>

#include "hirob/geometry.hpp"

namespace hirob {

namespace {

std::string gamma_label(double g) { return fmt::format("ray({:g})", g); }

std::string join_labels(const std::vector<const std::string*>& parts) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += '|';
    out += *parts[k];
  }
  return out;
}

struct Component {
  std::vector<Vector> points;
  std::vector<std::string> labels;
};

std::size_t checked_product(const std::vector<Component>& comps, std::size_t cap) {
  std::size_t total = 1;
  for (const auto& c : comps) {
    if (c.points.empty()) return 0;
    if (total > cap / c.points.size())
      throw CombinatorialBlowup(
          "scenario product exceeds the cap of " + std::to_string(cap) +
          "; thin the gamma grid or lower the scenario resolution");
    total *= c.points.size();
  }
  return total;
}

std::vector<LabeledScenario> product(const std::vector<Component>& comps, std::size_t cap) {
  const std::size_t total = checked_product(comps, cap);
  std::vector<LabeledScenario> out;
  out.reserve(total);
  std::vector<std::size_t> idx(comps.size(), 0);
  for (std::size_t t = 0; t < total; ++t) {
    LabeledScenario s;
    std::vector<const std::string*> labels;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      s.u.push_back(comps[i].points[idx[i]]);
      labels.push_back(&comps[i].labels[idx[i]]);
    }
    s.label = join_labels(labels);
    out.push_back(std::move(s));
    for (std::size_t i = comps.size(); i-- > 0;) {
      if (++idx[i] < comps[i].points.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<LabeledScenario> diagonal(const UncertainMOP& p, const Component& c) {
  std::vector<LabeledScenario> out;
  out.reserve(c.points.size());
  for (std::size_t k = 0; k < c.points.size(); ++k)
    out.push_back({Scenario(p.p(), c.points[k]), c.labels[k]});
  return out;
}

void check_component(const UncertaintySet& U, const Component& c) {
  for (const auto& u : c.points)
    if (!contains_point(U, u, 1e-9))
      throw ValidationError("generated scenario component lies outside its set");
}

Component epd_component(const UncertaintySet& U, const std::vector<double>& gamma_grid) {
  if (std::holds_alternative<BallSet>(U.shape) || std::holds_alternative<EllipsoidSet>(U.shape))
    throw NotApplicable("vertex/ray scenarios need a polyhedral set, got " + U.kind_name());
  const Polytope P = as_polytope(U);
  Component c;
  for (const auto& w : P.vertices) {
    c.points.push_back(w);
    c.labels.emplace_back("vertex");
    for (const auto& d : P.rays)
      for (double g : gamma_grid) {
        if (g == 0.0) continue;
        c.points.push_back(w + g * d);
        c.labels.push_back(gamma_label(g));
      }
  }
  return c;
}

/// All k-compositions of `total` into `parts` nonnegative integers.
void compositions(int parts, int total, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int k = total; k >= 0; --k) {
    cur.push_back(k);
    compositions(parts, total - k, cur, emit);
    cur.pop_back();
  }
}

Vector cube_to_ball(const Vector& z) {
  const double n2 = z.norm();
  if (n2 == 0.0) return z;
  return z * (z.lpNorm<Eigen::Infinity>() / n2);
}

}  // namespace

// ---------------------------------------------------------------------------

ScenarioSet::ScenarioSet(const UncertainMOP& p, std::vector<LabeledScenario> scenarios, double tol)
    : scenarios_(std::move(scenarios)) {
  for (const auto& s : scenarios_) {
    if (static_cast<int>(s.u.size()) != p.p())
      throw ValidationError("scenario must have one component per objective");
    for (int i = 0; i < p.p(); ++i) {
      require_dimension(s.u[i], p.n, "scenario component");
      if (!contains_point(p.uncertainty[i], s.u[i], tol))
        throw ValidationError(fmt::format("scenario '{}' component {} lies outside its set",
                                          s.label, i));
      if (p.diagonal && (s.u[i] - s.u[0]).lpNorm<Eigen::Infinity>() > 1e-12)
        throw ValidationError("diagonal problem requires equal scenario components");
    }
  }
}

ScenarioSet ScenarioSet::merged(const ScenarioSet& other) const {
  ScenarioSet out = *this;
  for (const auto& s : other.scenarios_) {
    bool dup = false;
    for (const auto& t : out.scenarios_) {
      bool same = true;
      for (std::size_t i = 0; i < s.u.size() && same; ++i)
        same = (s.u[i] - t.u[i]).lpNorm<Eigen::Infinity>() <= 1e-12;
      if (same) {
        dup = true;
        break;
      }
    }
    if (!dup) out.scenarios_.push_back(s);
  }
  return out;
}

ScenarioSet epd_scenarios(const UncertainMOP& p, const std::vector<double>& gamma_grid,
                          std::size_t cap) {
  if (gamma_grid.empty()) throw ConfigError("gamma grid is empty");
  bool has_zero = false;
  for (double g : gamma_grid) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("gamma grid entries must be >= 0");
    has_zero = has_zero || g == 0.0;
  }
  if (!has_zero) throw ConfigError("gamma grid must contain 0");
  std::vector<Component> comps;
  const int distinct = p.diagonal ? 1 : p.p();
  for (int i = 0; i < distinct; ++i) {
    comps.push_back(epd_component(p.uncertainty[i], gamma_grid));
    check_component(p.uncertainty[i], comps.back());
  }
  if (p.diagonal) return ScenarioSet(ScenarioSet::Checked{}, diagonal(p, comps.front()));
  return ScenarioSet(ScenarioSet::Checked{}, product(comps, cap));
}

Vector halton(std::uint64_t index, int dim) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (dim > static_cast<int>(std::size(kPrimes))) throw ConfigError("halton: dimension too large");
  Vector out(dim);
  for (int k = 0; k < dim; ++k) {
    const int base = kPrimes[k];
    double f = 1.0, r = 0.0;
    for (std::uint64_t i = index; i > 0; i /= base) {
      f /= base;
      r += f * static_cast<double>(i % base);
    }
    out[k] = r;
  }
  return out;
}

std::vector<Vector> sample_set(const UncertaintySet& U, int resolution, std::uint64_t seed) {
  if (resolution < 2) throw ConfigError("scenario resolution must be at least 2");
  const int n = U.dimension();
  std::vector<Vector> out;

  if (const auto* box = std::get_if<BoxSet>(&U.shape)) {
    std::vector<int> idx(n, 0);
    while (true) {
      Vector u(n);
      for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(idx[k]) / (resolution - 1);
        u[k] = idx[k] == resolution - 1 ? box->hi[k] : box->lo[k] + t * (box->hi[k] - box->lo[k]);
      }
      out.push_back(std::move(u));
      int k = n - 1;
      while (k >= 0 && ++idx[k] == resolution) idx[k--] = 0;
      if (k < 0) break;
    }
    Polytope dedup{std::move(out), {}};
    dedup.dedupe();
    return dedup.vertices;
  }

  if (const auto* poly = std::get_if<PolytopeSet>(&U.shape)) {
    const int nv = static_cast<int>(poly->vertices.size());
    const int denom = resolution - 1;
    Polytope lattice;
    std::vector<int> cur;
    compositions(nv, denom, cur, [&](const std::vector<int>& w) {
      Vector u = Vector::Zero(n);
      for (int k = 0; k < nv; ++k)
        if (w[k]) u += (static_cast<double>(w[k]) / denom) * poly->vertices[k];
      lattice.vertices.push_back(std::move(u));
    });
    lattice.dedupe();
    if (poly->rays.empty()) return lattice.vertices;
    for (const auto& base : lattice.vertices) {
      out.push_back(base);
      for (const auto& r : poly->rays)
        for (int k = 1; k <= denom; ++k) out.push_back(base + (8.0 * k / denom) * r);
    }
    return out;
  }

  if (const auto* fin = std::get_if<FiniteSet>(&U.shape)) return fin->points;

  // Ball and ellipsoid: Halton points in the cube mapped radially onto the
  // unit ball, plus the axis extremes.
  std::size_t count = 1;
  for (int k = 0; k < n; ++k) count *= static_cast<std::size_t>(resolution);
  std::vector<Vector> unit;
  unit.push_back(Vector::Zero(n));
  for (int k = 0; k < n; ++k) {
    unit.push_back(Vector::Unit(n, k));
    unit.push_back(-Vector::Unit(n, k));
  }
  for (std::size_t t = 1; t <= count; ++t)
    unit.push_back(cube_to_ball(2.0 * halton(seed + t, n) - Vector::Ones(n)));

  if (const auto* ball = std::get_if<BallSet>(&U.shape)) {
    for (const auto& z : unit) out.push_back(ball->center + ball->radius * z);
    return out;
  }
  const auto& ell = std::get<EllipsoidSet>(U.shape);
  const Matrix L = ell.shape.llt().matrixL();
  for (const auto& z : unit) out.push_back(ell.center + L * z);
  return out;
}

ScenarioSet sample(const UncertainMOP& p, int resolution, std::uint64_t seed, std::size_t cap) {
  auto component = [&](const UncertaintySet& U) {
    Component c;
    c.points = sample_set(U, resolution, seed);
    const bool random = std::holds_alternative<BallSet>(U.shape) ||
                        std::holds_alternative<EllipsoidSet>(U.shape);
    c.labels.assign(c.points.size(), random ? fmt::format("random({})", seed) : "grid");
    check_component(U, c);
    return c;
  };
  if (p.diagonal)
    return ScenarioSet(ScenarioSet::Checked{}, diagonal(p, component(p.uncertainty[0])));
  std::vector<Component> comps;
  for (const auto& U : p.uncertainty) comps.push_back(component(U));
  return ScenarioSet(ScenarioSet::Checked{}, product(comps, cap));
}

std::optional<UncertainMOP> diagonal_reduce(const UncertainMOP& p) {
  for (const auto& U : p.uncertainty)
    if (!(U == p.uncertainty.front())) return std::nullopt;
  UncertainMOP out = p;
  out.diagonal = true;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Vector> direction_net(int n) {
  std::vector<Vector> dirs;
  if (n == 1) return {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
  if (n == 2) {
    for (int k = 0; k < 720; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 720.0;
      Vector d(2);
      d << std::cos(a), std::sin(a);
      dirs.push_back(d);
    }
    return dirs;
  }
  for (int k = 0; k < n; ++k) {
    dirs.push_back(Vector::Unit(n, k));
    dirs.push_back(-Vector::Unit(n, k));
  }
  for (std::uint64_t t = 1; t <= 4000; ++t) {
    Vector z = 2.0 * halton(t, n) - Vector::Ones(n);
    if (z.norm() > 1e-12) dirs.push_back(z.normalized());
  }
  return dirs;
}

}  // namespace

bool contains_zero_interior(const UncertaintySet& U, double margin) {
  if (!(margin > 0.0)) throw ConfigError("contains_zero_interior: margin must be positive");
  const int n = U.dimension();
  if (const auto* box = std::get_if<BoxSet>(&U.shape)) {
    for (int k = 0; k < n; ++k)
      if (box->lo[k] > -margin || box->hi[k] < margin) return false;
    return true;
  }
  if (const auto* ball = std::get_if<BallSet>(&U.shape))
    return ball->center.norm() + margin <= ball->radius;
  if (std::holds_alternative<FiniteSet>(U.shape)) return false;
  if (const auto* ell = std::get_if<EllipsoidSet>(&U.shape)) {
    if (ell->center.lpNorm<Eigen::Infinity>() == 0.0) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(ell->shape);
      return margin <= std::sqrt(es.eigenvalues().minCoeff());
    }
  }
  for (const auto& d : direction_net(n))
    if (support_value(U, d) < margin) return false;
  return true;
}

NormSup norm_sup(const UncertaintySet& U) {
  if (const auto* poly = std::get_if<PolytopeSet>(&U.shape)) {
    if (!poly->rays.empty()) return {std::numeric_limits<double>::infinity(), true};
    double best = 0.0;
    for (const auto& v : poly->vertices) best = std::max(best, v.norm());
    return {best, true};
  }
  if (const auto* box = std::get_if<BoxSet>(&U.shape))
    return {box->lo.cwiseAbs().cwiseMax(box->hi.cwiseAbs()).norm(), true};
  if (const auto* ball = std::get_if<BallSet>(&U.shape))
    return {ball->center.norm() + ball->radius, true};
  if (const auto* ell = std::get_if<EllipsoidSet>(&U.shape)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(ell->shape);
    const double semi = std::sqrt(es.eigenvalues().maxCoeff());
    const bool centered = ell->center.lpNorm<Eigen::Infinity>() == 0.0;
    return {ell->center.norm() + semi, centered};
  }
  double best = 0.0;
  for (const auto& v : std::get<FiniteSet>(U.shape).points) best = std::max(best, v.norm());
  return {best, true};
}

}  // namespace hirob
