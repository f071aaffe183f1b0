#include <doctest.h>

#include "hirob/certify.hpp"
#include "hirob/errors.hpp"
#include "hirob/subdiff.hpp"
#include "instances.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hirob;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Re-checks a scan witness by direct evaluation with the naive evaluator.
bool witness_holds(const UncertainMOP& p, const Vector& xbar, const Witness& w, EfficiencyMode mode,
                   double tol) {
  const Vector fx = oracle::naive_scenario(p, *w.x, *w.u);
  const Vector fb = oracle::naive_scenario(p, xbar, *w.u);
  if (!oracle::naive_feasible(p, *w.x)) return false;
  switch (mode) {
    case EfficiencyMode::Weak: return ((fb - fx).array() >= tol).all();
    case EfficiencyMode::Efficient:
      return ((fx - fb).array() <= tol).all() && ((fb - fx).array() >= tol).any();
    case EfficiencyMode::Strict: return ((fx - fb).array() <= tol).all() && (*w.x - xbar).norm() > 0.0;
  }
  return false;
}

/// 0 in sum_i lambda_i (df_i - u_i) + sum_j mu_j conv(generators_j), via an assembled Minkowski sum.
double assembled_residual(const UncertainMOP& p, const Vector& xbar, const Scenario& u, const Multipliers& m) {
  std::vector<ScaledPolytope> parts;
  for (int i = 0; i < p.p(); ++i)
    parts.push_back({m.lambda[i], subdiff_objective_scenario(p, i, xbar, u[i])});
  for (const auto& cw : m.constraint_weights)
    if (!cw.generators.empty()) parts.push_back({m.mu[cw.j], Polytope{cw.generators, {}}});
  return membership_residual(minkowski_sum(parts), Vector::Zero(p.n));
}

}  // namespace

TEST_CASE("refuted scan witnesses re-validate by direct evaluation") {
  int refuted = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = instances::polyhedral(seed);
    const ScenarioSet scen = sample(inst.problem, 4, seed);
    for (auto mode : {EfficiencyMode::Weak, EfficiencyMode::Efficient, EfficiencyMode::Strict}) {
      const Verdict v = highly_robust_scan(inst.problem, inst.xbar, mode, scen, kInf, 21);
      if (v.status != VerdictStatus::Refuted) continue;
      ++refuted;
      REQUIRE(v.witness);
      CHECK(witness_holds(inst.problem, inst.xbar, *v.witness, mode, Tolerances{}.strict_tol));
    }
  }
  CHECK(refuted > 0);
}

TEST_CASE("enlarging scenarios or the lattice never clears a refutation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = instances::polyhedral(seed);
    const ScenarioSet small = sample(inst.problem, 3, 0);
    const ScenarioSet large = small.merged(sample(inst.problem, 5, 0));
    const Verdict a = highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Weak, small, kInf, 11);
    const Verdict b = highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Weak, large, kInf, 11);
    // 21 points per axis contain the 11-point lattice
    const Verdict c = highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Weak, small, kInf, 21);
    if (a.status == VerdictStatus::Refuted) {
      CHECK(b.status == VerdictStatus::Refuted);
      CHECK(c.status == VerdictStatus::Refuted);
    }
  }
}

TEST_CASE("vertex and ray scenarios decide the weak scan like the full sample") {
  int refuted = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto inst = instances::polyhedral(seed);
    const Verdict full =
        highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Weak, sample(inst.problem, 5, 0), kInf, 21);
    const Verdict epd =
        highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Weak, epd_scenarios(inst.problem), kInf, 21);
    CHECK(full.status == epd.status);
    refuted += full.status == VerdictStatus::Refuted;
  }
  CHECK(refuted > 0);
  CHECK(refuted < 20);
}

TEST_CASE("epd scenarios lie in their sets") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = instances::polyhedral(seed);
    const ScenarioSet epd = epd_scenarios(inst.problem);
    for (const auto& sc : epd.scenarios())
      for (int i = 0; i < 2; ++i) CHECK(contains_point(as_polytope(inst.problem.uncertainty[i]), sc.u[i], 1e-9));
  }
}

TEST_CASE("consistent efficient scans imply worst-case and set-based consistency") {
  int consistent = 0;
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    auto inst = instances::polyhedral(seed);
    for (auto& U : inst.problem.uncertainty) {
      auto& P = std::get<PolytopeSet>(U.shape);
      P.rays.clear();
    }
    const ScenarioSet scen = sample(inst.problem, 4, 0);
    const Verdict hr = highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Efficient, scen, kInf, 21);
    if (hr.status != VerdictStatus::ConsistentAtResolution) continue;
    ++consistent;
    CHECK(worst_case_check(inst.problem, inst.xbar, kInf, 21).status != VerdictStatus::Refuted);
    CHECK(set_based_check(inst.problem, inst.xbar, scen, kInf, 21).status != VerdictStatus::Refuted);
  }
  CHECK(consistent > 0);
}

TEST_CASE("weak and strict scans agree with ball uncertainty") {
  int refuted = 0;
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    const auto inst = instances::random_ball(seed);
    REQUIRE(contains_zero_interior(inst.problem.uncertainty[0], 0.05));
    const ScenarioSet scen = sample(inst.problem, 6, seed);
    const Verdict weak = highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Weak, scen, kInf, 21);
    const Verdict strict = highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Strict, scen, kInf, 21);
    CHECK(weak.status == strict.status);
    refuted += weak.status == VerdictStatus::Refuted;
  }
  MESSAGE("ball instances refuted: " << refuted << " of 20");
}

TEST_CASE("isolated-efficiency certificates are never contradicted by the strict scan") {
  for (std::uint64_t seed = 400; seed < 410; ++seed) {
    const auto inst = instances::isolated_ball(seed);
    const Verdict cert = isolated_implies_hr(inst.problem, inst.xbar, kInf, 21);
    if (cert.status != VerdictStatus::Certified) continue;
    CHECK(highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Strict, sample(inst.problem, 5, seed), kInf, 21)
              .status != VerdictStatus::Refuted);
  }
}

TEST_CASE("kkt multipliers satisfy their invariants") {
  int solved = 0;
  const auto kkt = load_fixture("ex-neckkt").problem;
  std::mt19937_64 rng(77);
  std::vector<std::pair<UncertainMOP, Vector>> cases{{kkt, vec({-1, -1})}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = instances::polyhedral(seed);
    cases.push_back({inst.problem, inst.xbar});
  }
  for (const auto& [p, xbar] : cases) {
    for (int t = 0; t < 8; ++t) {
      Scenario u;
      for (const auto& U : p.uncertainty) {
        const auto pts = sample_set(U, 3, 0);
        u.push_back(pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)]);
      }
      for (auto norm : {KktNormalization::Joint, KktNormalization::LambdaOnly}) {
        const auto m = kkt_solve(p, xbar, u, norm);
        if (!m) continue;
        ++solved;
        CHECK((m->lambda.array() >= -1e-12).all());
        CHECK((m->mu.array() >= -1e-12).all());
        if (norm == KktNormalization::Joint)
          CHECK(std::abs(m->lambda.sum() + m->mu.sum() - 1.0) <= 1e-9);
        else
          CHECK(std::abs(m->lambda.sum() - 1.0) <= 1e-9);
        for (int j = 0; j < static_cast<int>(p.constraints.size()); ++j)
          CHECK(std::abs(m->mu[j] * constraint_sup(p, j, xbar).value) <= 1e-8);
        CHECK(m->residual <= 1e-8);
        CHECK(assembled_residual(p, xbar, u, *m) <= 1e-8);
      }
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("singleton subdifferentials at smooth points match finite differences") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 200) {
    const int n = 1 + checked % 3;
    const ScalarExpr e = oracle::random_expr(rng, n);
    const Vector x = oracle::random_vector(rng, n, -1, 1);
    if (!oracle::smooth_at(e, x, 1e-3)) continue;
    ++checked;
    const Polytope d = subdiff_scalar(e, x);
    REQUIRE(d.vertices.size() == 1);
    const Vector fd = fd_gradient(e, x, 1e-6);
    CHECK((d.vertices[0] - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("Minkowski support additivity to 1e-10") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Polytope a{oracle::random_points(rng, 4, 2, -1, 1), {}};
    const Polytope b{oracle::random_points(rng, 3, 2, -1, 1), {}};
    const Polytope s = minkowski_sum({{0.7, a}, {1.3, b}});
    for (int t = 0; t < 100; ++t) {
      const Vector d = oracle::random_vector(rng, 2, -1, 1);
      CHECK(std::abs(support_value(s, d) - 0.7 * support_value(a, d) - 1.3 * support_value(b, d)) <= 1e-10);
    }
  }
}

TEST_CASE("ex-neckkt closed-form multipliers pass the residual check") {
  const auto p = load_fixture("ex-neckkt").problem;
  const Vector xbar = vec({-1, -1});
  const Polytope df1 = subdiff_scalar(p.objectives[0], xbar);
  const Polytope df2 = subdiff_scalar(p.objectives[1], xbar);
  const Polytope g1 = Polytope{{vec({-1, 0}), vec({0, -1})}, {}};
  const Polytope g2 = Polytope::point(vec({-1, 0}));
  const Polytope g3 = Polytope::point(vec({0, -1}));
  const auto grid = sample_set(p.uncertainty[0], 3, 0);
  int count = 0;
  for (const auto& u1 : grid)
    for (const auto& u2 : grid) {
      ++count;
      const double gamma = 5.0 - (u1.sum() + u2.sum());
      const double l = 1.0 / gamma, mu2 = (1 - u1.sum()) / gamma, mu3 = (1 - u2.sum()) / gamma;
      CHECK(l + l + l + mu2 + mu3 == doctest::Approx(1.0).epsilon(1e-15));
      const Polytope shifted1{{df1.vertices[0] - u1, df1.vertices[1] - u1}, {}};
      const Polytope shifted2{{df2.vertices[0] - u2, df2.vertices[1] - u2}, {}};
      const Polytope sum = minkowski_sum({{l, shifted1}, {l, shifted2}, {l, g1}, {mu2, g2}, {mu3, g3}});
      CHECK(membership_residual(sum, Vector::Zero(2)) <= 1e-9);
    }
  CHECK(count == 81);
}

TEST_CASE("diagonal scans match full scans on equal-set instances") {
  for (std::uint64_t seed = 500; seed < 510; ++seed) {
    auto inst = instances::polyhedral(seed);
    inst.problem.uncertainty[1] = inst.problem.uncertainty[0];
    const auto d = *diagonal_reduce(inst.problem);
    const Verdict full =
        highly_robust_scan(inst.problem, inst.xbar, EfficiencyMode::Weak, sample(inst.problem, 4, 0), kInf, 21);
    const Verdict diag = highly_robust_scan(d, inst.xbar, EfficiencyMode::Weak, sample(d, 4, 0), kInf, 21);
    // a full refuter yields a diagonal one: take the component u_i maximizing <u_i, x - xbar>
    CHECK(full.status == diag.status);
  }
}
