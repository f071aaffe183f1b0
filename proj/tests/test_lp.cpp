#include <doctest.h>

#include <random>

#include "hirob/errors.hpp"
#include "hirob/lp.hpp"
#include "support.hpp"

using namespace hirob;

namespace {

/// Brute-force 2-variable LP over a bounded region: evaluate every pairwise
/// intersection of constraint lines and keep the best feasible one.
std::optional<double> brute_lp2(const Vector& c, const std::vector<std::pair<Vector, double>>& le) {
  std::optional<double> best;
  for (std::size_t a = 0; a < le.size(); ++a) {
    for (std::size_t b = a + 1; b < le.size(); ++b) {
      Eigen::Matrix2d M;
      M.row(0) = le[a].first.transpose();
      M.row(1) = le[b].first.transpose();
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Eigen::Vector2d x = M.partialPivLu().solve(Eigen::Vector2d(le[a].second, le[b].second));
      bool ok = true;
      for (const auto& [row, rhs] : le) ok = ok && row.dot(x) <= rhs + 1e-9;
      if (ok && (!best || c.dot(x) < *best)) best = c.dot(x);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("textbook LP optimum") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  LinearProgram lp(2);
  lp.cost = vec({-3, -5});
  lp.add_row(vec({1, 0}), RowSense::LessEqual, 4);
  lp.add_row(vec({0, 2}), RowSense::LessEqual, 12);
  lp.add_row(vec({3, 2}), RowSense::LessEqual, 18);
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-36));
  CHECK(r.x[0] == doctest::Approx(2));
  CHECK(r.x[1] == doctest::Approx(6));
}

TEST_CASE("equality rows, free variables and finite bounds") {
  LinearProgram lp(3);
  lp.cost = vec({1, 1, 0});
  lp.free_variable(0);
  lp.set_bounds(1, -2, 5);
  lp.set_bounds(2, -std::numeric_limits<double>::infinity(), 3);
  lp.add_row(vec({1, -1, 0}), RowSense::Equal, -1);
  lp.add_row(vec({1, 1, 1}), RowSense::GreaterEqual, -10);
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  // x0 = x1 - 1, minimize 2 x1 - 1 with x1 >= -2 and x2 <= 3
  CHECK(r.x[1] == doctest::Approx(-2));
  CHECK(r.x[0] == doctest::Approx(-3));
  CHECK(r.objective == doctest::Approx(-5));
}

TEST_CASE("infeasible and unbounded programs") {
  LinearProgram inf(1);
  inf.add_row(vec({1}), RowSense::LessEqual, -1);
  CHECK(solve_lp(inf).status == LpStatus::Infeasible);

  LinearProgram unb(2);
  unb.cost = vec({-1, 0});
  unb.add_row(vec({0, 1}), RowSense::LessEqual, 1);
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);

  LinearProgram none(2);
  none.cost = vec({1, 2});
  const LpResult r = solve_lp(none);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == 0.0);
}

TEST_CASE("degenerate cycling example terminates under Bland's rule") {
  // Beale's example: cycles under the textbook largest-coefficient rule.
  LinearProgram lp(4);
  lp.cost = vec({-0.75, 150, -0.02, 6});
  lp.add_row(vec({0.25, -60, -0.04, 9}), RowSense::LessEqual, 0);
  lp.add_row(vec({0.5, -90, -0.02, 3}), RowSense::LessEqual, 0);
  lp.add_row(vec({0, 0, 1, 0}), RowSense::LessEqual, 1);
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-0.05));
}

TEST_CASE("random bounded 2-variable LPs agree with vertex enumeration") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<Vector, double>> rows{
        {vec({1, 0}), 3}, {vec({-1, 0}), 3}, {vec({0, 1}), 3}, {vec({0, -1}), 3}};
    LinearProgram lp(2);
    lp.free_variable(0);
    lp.free_variable(1);
    lp.cost = vec({U(rng), U(rng)});
    for (const auto& [a, b] : rows) lp.add_row(a, RowSense::LessEqual, b);
    for (int k = 0; k < 4; ++k) {
      Vector a = vec({U(rng), U(rng)});
      const double b = U(rng);
      rows.push_back({a, b});
      lp.add_row(a, RowSense::LessEqual, b);
    }
    const auto want = brute_lp2(lp.cost, rows);
    const LpResult got = solve_lp(lp);
    if (!want) {
      CHECK(got.status == LpStatus::Infeasible);
    } else {
      REQUIRE(got.status == LpStatus::Optimal);
      CHECK(got.objective == doctest::Approx(*want).epsilon(1e-7));
    }
  }
}

TEST_CASE("solve_or_throw reports the iteration limit") {
  LinearProgram lp(2);
  lp.cost = vec({-1, -1});
  lp.add_row(vec({1, 2}), RowSense::LessEqual, 4);
  lp.add_row(vec({3, 1}), RowSense::LessEqual, 6);
  LpOptions opts;
  opts.max_iterations = 0;
  CHECK_THROWS_AS(solve_or_throw(lp, opts), SolverError);
}
