#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's evaluation, geometry or LP code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hirob/model.hpp"

namespace oracle {

using hirob::Matrix;
using hirob::Vector;

inline double naive_eval(const hirob::ScalarExpr& e, const Vector& x) {
  const int n = static_cast<int>(x.size());
  auto smooth = [&](double c, const Vector& lin, const std::optional<Matrix>& q) {
    double s = c;
    for (int k = 0; k < n; ++k) s += lin[k] * x[k];
    if (q)
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) s += 0.5 * x[r] * (*q)(r, k) * x[k];
    return s;
  };
  double total = smooth(e.constant, e.linear, e.quad);
  for (const auto& t : e.abs_terms) {
    double r = -t.b;
    for (int k = 0; k < n; ++k) r += t.a[k] * x[k];
    total += t.weight * (r < 0 ? -r : r);
  }
  for (const auto& m : e.max_terms) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& piece : m.pieces) best = std::max(best, smooth(piece.constant, piece.linear, piece.quad));
    total += best;
  }
  for (const auto& s : e.surrogate_terms) {
    double t = -s.b;
    for (int k = 0; k < n; ++k) t += s.a[k] * x[k];
    const double phi = s.kind == hirob::SurrogateKind::Cbrt ? std::cbrt(t)
                       : t == 0.0                          ? 0.0
                                                           : t * t * std::sin(1.0 / t);
    total += s.weight * phi;
  }
  return total;
}

/// f_i(x) - u_i.x written out component by component.
inline Vector naive_scenario(const hirob::UncertainMOP& p, const Vector& x, const hirob::Scenario& u) {
  Vector out(p.p());
  for (int i = 0; i < p.p(); ++i) {
    double dot = 0.0;
    for (int k = 0; k < p.n; ++k) dot += u[i][k] * x[k];
    out[i] = naive_eval(p.objectives[i], x) - dot;
  }
  return out;
}

inline Vector central_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector g(x.size());
  for (int k = 0; k < x.size(); ++k) {
    Vector up = x, down = x;
    up[k] += h;
    down[k] -= h;
    g[k] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

inline double brute_support(const std::vector<Vector>& pts, const Vector& d) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : pts) best = std::max(best, v.dot(d));
  return best;
}

/// Enumerates every weight vector on the simplex grid with spacing 1/steps and
/// reports whether some grid combination reproduces y within tol.
inline bool grid_hull_contains(const std::vector<Vector>& verts, const Vector& y, int steps, double tol) {
  const int k = static_cast<int>(verts.size());
  std::vector<int> w(k, 0);
  bool found = false;
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (found) return;
    if (idx == k - 1) {
      w[idx] = left;
      Vector s = Vector::Zero(y.size());
      for (int j = 0; j < k; ++j) s += (static_cast<double>(w[j]) / steps) * verts[j];
      if ((s - y).cwiseAbs().maxCoeff() <= tol) found = true;
      return;
    }
    for (int c = 0; c <= left && !found; ++c) {
      w[idx] = c;
      rec(idx + 1, left - c);
    }
  };
  rec(0, steps);
  return found;
}

/// Dense grid search for x in [-1,1]^n with a.x < rhs - margin on strict rows
/// and a.x <= rhs on weak rows.
inline bool grid_strict_feasible(const std::vector<std::pair<Vector, double>>& strict,
                                 const std::vector<std::pair<Vector, double>>& weak, int n, double step,
                                 double margin) {
  const int m = static_cast<int>(std::lround(2.0 / step));
  std::vector<int> idx(n, 0);
  Vector x(n);
  while (true) {
    for (int k = 0; k < n; ++k) x[k] = -1.0 + idx[k] * step;
    bool ok = true;
    for (const auto& [a, b] : strict) ok = ok && a.dot(x) < b - margin;
    for (const auto& [a, b] : weak) ok = ok && a.dot(x) <= b + 1e-12;
    if (ok) return true;
    int k = n - 1;
    while (k >= 0 && ++idx[k] > m) idx[k--] = 0;
    if (k < 0) return false;
  }
}

// ---------------------------------------------------------------------------
// Random instances

inline Vector random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  Vector v(n);
  for (int k = 0; k < n; ++k) v[k] = U(rng);
  return v;
}

inline Matrix random_symmetric(std::mt19937_64& rng, int n, double scale) {
  Matrix A(n, n);
  std::uniform_real_distribution<double> U(-scale, scale);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) A(r, k) = U(rng);
  return 0.5 * (A + A.transpose());
}

/// PSD matrix B'B scaled so entries stay moderate.
inline Matrix random_psd(std::mt19937_64& rng, int n, double scale) {
  Matrix B(n, n);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) B(r, k) = U(rng);
  return scale * B.transpose() * B;
}

inline hirob::SmoothPiece random_piece(std::mt19937_64& rng, int n, bool quad) {
  hirob::SmoothPiece s;
  s.constant = random_vector(rng, 1, -1, 1)[0];
  s.linear = random_vector(rng, n, -2, 2);
  if (quad) s.quad = random_symmetric(rng, n, 1.0);
  return s;
}

/// Expression in the supported class with a random mix of parts.
inline hirob::ScalarExpr random_expr(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> count(0, 2);
  std::bernoulli_distribution coin(0.5);
  hirob::ScalarExpr e;
  e.constant = random_vector(rng, 1, -1, 1)[0];
  e.linear = random_vector(rng, n, -2, 2);
  if (coin(rng)) e.quad = random_symmetric(rng, n, 1.0);
  for (int k = count(rng); k > 0; --k)
    e.abs_terms.push_back({random_vector(rng, 1, 0.1, 2)[0], random_vector(rng, n, -1, 1),
                           random_vector(rng, 1, -0.5, 0.5)[0]});
  for (int k = count(rng); k > 0; --k) {
    hirob::MaxTerm m;
    const int pieces = 1 + count(rng);
    for (int r = 0; r < pieces; ++r) m.pieces.push_back(random_piece(rng, n, coin(rng)));
    e.max_terms.push_back(std::move(m));
  }
  return e;
}

/// No abs kink within `margin` and a unique max piece by `margin`.
inline bool smooth_at(const hirob::ScalarExpr& e, const Vector& x, double margin) {
  for (const auto& t : e.abs_terms)
    if (std::abs(t.a.dot(x) - t.b) <= margin) return false;
  for (const auto& m : e.max_terms) {
    std::vector<double> vals;
    for (const auto& piece : m.pieces) {
      double s = piece.constant + piece.linear.dot(x);
      if (piece.quad) s += 0.5 * x.dot(*piece.quad * x);
      vals.push_back(s);
    }
    std::sort(vals.rbegin(), vals.rend());
    if (vals.size() > 1 && vals[0] - vals[1] <= margin) return false;
  }
  return true;
}

/// Analytic gradient of a smooth-at-x expression, computed part by part.
inline Vector analytic_gradient(const hirob::ScalarExpr& e, const Vector& x) {
  Vector g = e.linear;
  if (e.quad) g += *e.quad * x;
  for (const auto& t : e.abs_terms) g += (t.a.dot(x) - t.b > 0 ? t.weight : -t.weight) * t.a;
  for (const auto& m : e.max_terms) {
    double best = -std::numeric_limits<double>::infinity();
    Vector grad;
    for (const auto& piece : m.pieces) {
      double s = piece.constant + piece.linear.dot(x);
      if (piece.quad) s += 0.5 * x.dot(*piece.quad * x);
      if (s > best) {
        best = s;
        grad = piece.linear;
        if (piece.quad) grad += *piece.quad * x;
      }
    }
    g += grad;
  }
  return g;
}

inline std::vector<Vector> random_points(std::mt19937_64& rng, int count, int n, double lo, double hi) {
  std::vector<Vector> out;
  for (int k = 0; k < count; ++k) out.push_back(random_vector(rng, n, lo, hi));
  return out;
}

inline double naive_coeff(const hirob::CoeffFunction& f, double v) {
  double total = 0.0;
  for (const auto& t : f.terms)
    for (std::size_t k = 0; k < t.coeffs.size(); ++k) {
      const double kv = static_cast<double>(k) * v;
      switch (t.basis) {
        case hirob::CoeffBasis::Poly: total += t.coeffs[k] * std::pow(v, static_cast<double>(k)); break;
        case hirob::CoeffBasis::Sin: total += t.coeffs[k] * std::sin(kv); break;
        case hirob::CoeffBasis::Cos: total += t.coeffs[k] * std::cos(kv); break;
      }
    }
  return total;
}

/// Box bounds plus every constraint on its finite labels or a 2001-point grid of the domain closure.
inline bool naive_feasible(const hirob::UncertainMOP& p, const Vector& x, double tol = 1e-9) {
  if (p.box_bounds)
    for (int k = 0; k < p.n; ++k)
      if (x[k] < p.box_bounds->lo[k] - tol || x[k] > p.box_bounds->hi[k] + tol) return false;
  for (const auto& c : p.constraints) {
    if (const auto* fin = std::get_if<hirob::FiniteScenarios>(&c.kind)) {
      for (const auto& s : fin->scenarios)
        if (naive_eval(s.expr, x) > tol) return false;
      continue;
    }
    const auto& g = std::get<hirob::AffineInX>(c.kind);
    std::vector<double> vs;
    if (const auto* iv = std::get_if<hirob::IntervalDomain>(&c.domain)) {
      for (int k = 0; k <= 2000; ++k) vs.push_back(iv->lo + (iv->hi - iv->lo) * k / 2000.0);
    } else {
      vs = std::get<hirob::FiniteDomain>(c.domain).values;
    }
    for (double v : vs) {
      double val = -naive_coeff(g.b, v);
      for (int k = 0; k < p.n; ++k) val += naive_coeff(g.a[k], v) * x[k];
      if (val > tol) return false;
    }
  }
  return true;
}

}  // namespace oracle
