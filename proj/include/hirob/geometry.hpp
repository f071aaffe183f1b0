#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hirob/model.hpp"

namespace hirob {

/// V-representation: conv(vertices) + cone(rays).
struct Polytope {
  std::vector<Vector> vertices;
  std::vector<Vector> rays;

  static Polytope point(const Vector& y);
  static Polytope segment(const Vector& a, const Vector& b);

  int dimension() const;
  bool bounded() const { return rays.empty(); }
  /// Nonempty vertex list, equal dimensions, finite entries.
  void validate() const;
  /// Removes vertices within 1e-12 (infinity norm) of an earlier one.
  void dedupe(double tol = 1e-12);
  Polytope translated(const Vector& shift) const;
};

/// sup_{s in P} d.s; +inf when a ray has d.r > 1e-12.
double support_value(const Polytope& P, const Vector& d);
double support_value(const UncertaintySet& U, const Vector& d);

/// A point of U attaining support_value(U, d). Requires a finite support.
Vector support_point(const UncertaintySet& U, const Vector& d);

/// Generator polytope of a polyhedral set (polytope, box corners, finite
/// points). Throws NotApplicable for balls and ellipsoids.
Polytope as_polytope(const UncertaintySet& U);

/// min over representations of y of the infinity-norm residual.
double membership_residual(const Polytope& P, const Vector& y);
bool contains_point(const Polytope& P, const Vector& y, double tol);
bool contains_point(const UncertaintySet& U, const Vector& y, double tol);

struct ScaledPolytope {
  double coeff = 1.0;
  Polytope set;
};

/// sum_k coeff_k * P_k as a generator product. A zero coefficient
/// contributes {0} (rays included).
Polytope minkowski_sum(const std::vector<ScaledPolytope>& parts,
                       std::size_t cap = 200000);

struct LinearIneq {
  Vector a;
  double rhs = 0.0;
};

struct StrictWitness {
  Vector x;
  double margin = 0.0;  // min over strict rows of rhs - a.x, by substitution
};

/// max t s.t. a.x + t <= rhs (strict rows), a.x <= rhs (weak rows),
/// |x_k| <= bound, t <= 1. Returns a witness iff t* > strict_tol and the
/// substituted margin also clears strict_tol.
std::optional<StrictWitness> solve_strict_feasibility(const std::vector<LinearIneq>& strict_rows,
                                                      const std::vector<LinearIneq>& weak_rows,
                                                      int n, double strict_tol = 1e-9,
                                                      double bound = 1.0);

}  // namespace hirob
