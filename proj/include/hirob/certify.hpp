#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hirob/geometry.hpp"
#include "hirob/model.hpp"
#include "hirob/scenarios.hpp"

namespace hirob {

enum class VerdictStatus { Refuted, Certified, ConsistentAtResolution, Inconclusive };
enum class CertificateKind { IsolatedEfficiency, GeneralizedConvexKKT };
enum class EfficiencyMode { Weak, Efficient, Strict };

std::string to_string(VerdictStatus s);
std::string to_string(CertificateKind k);
std::string to_string(EfficiencyMode m);

/// Convex weights of one constraint's multiplier over its active generators.
struct ConstraintWeights {
  int j = 0;
  std::vector<double> v;           // parameter value of each generator
  std::vector<Vector> generators;  // d_x g_j(xbar, v) generators
  std::vector<double> weights;     // sum to 1 when mu_j > 0
};

struct Multipliers {
  Vector lambda;
  Vector mu;
  /// Per objective, convex weights over the generators of df_i(xbar).
  std::vector<std::vector<double>> objective_weights;
  std::vector<ConstraintWeights> constraint_weights;
  /// Infinity norm of the assembled inclusion residual, by substitution.
  double residual = 0.0;
};

struct Witness {
  std::optional<Vector> x;
  std::optional<Scenario> u;
  std::optional<Vector> d;
  std::optional<Multipliers> multipliers;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::optional<Witness> witness;
  std::optional<CertificateKind> certificate;
  std::map<std::string, double> resolution;
  std::vector<std::string> notes;
};

// ---------------------------------------------------------------------------
// Lattices

inline constexpr double kGlobalRadius = std::numeric_limits<double>::infinity();

/// Robust-feasible lattice points over box_bounds ∩ ball(xbar, radius), with
/// their nominal objective values. `grid` points per axis; n <= 3.
struct FeasibleLattice {
  std::vector<Vector> points;
  std::vector<Vector> values;
  Vector fbar;  // f(xbar)
};

FeasibleLattice feasible_lattice(const UncertainMOP& p, const Vector& xbar, double radius,
                                 int grid, const Tolerances& tol = {});

/// Default "local" radius: a quarter of the box_bounds diameter.
double default_radius(const UncertainMOP& p);

// ---------------------------------------------------------------------------
// Scenario oracles

/// First lattice point violating the mode's inequality for f(., u) against
/// f(xbar, u).
std::optional<Vector> grid_efficiency(const UncertainMOP& p, const Vector& xbar,
                                      const Scenario& u, EfficiencyMode mode, double radius,
                                      int grid, const Tolerances& tol = {});

/// Same test on a prebuilt lattice.
std::optional<Vector> lattice_violation(const FeasibleLattice& lat, const Vector& xbar,
                                        const Scenario& u, EfficiencyMode mode,
                                        const Tolerances& tol = {});

/// Refuted when some scenario admits a violator; the reported scenario is the
/// refuting one of least norm.
Verdict highly_robust_scan(const UncertainMOP& p, const Vector& xbar, EfficiencyMode mode,
                           const ScenarioSet& scenarios, double radius, int grid,
                           const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Active constraints and CQ

struct ActiveConstraint {
  int j = 0;
  double value = 0.0;  // G_j(xbar)
  std::vector<double> v;
  std::vector<Vector> generators;  // union of d_x g_j(xbar, v), v in V_j(xbar)
  std::vector<double> generator_v;
};

/// Constraints with |G_j(xbar)| <= 1e-8 and a nonempty active set (eps = 0).
std::vector<ActiveConstraint> active_constraints(const UncertainMOP& p, const Vector& xbar,
                                                 const Tolerances& tol = {});

/// 0 is not in the convex hull of the active constraint generators.
bool cq2(const UncertainMOP& p, const Vector& xbar, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Necessary conditions and KKT

struct RefutingPair {
  Vector d;
  Scenario u;
};

/// Searches the linearization cone for d with sigma_{U_i}(d) > sigma_{df_i}(d)
/// for every i. Polyhedral bounded sets also get an exact LP per vertex tuple.
std::optional<RefutingPair> necessary_refute(const UncertainMOP& p, const Vector& xbar,
                                             int direction_net = 720,
                                             const Tolerances& tol = {});

enum class KktNormalization { Joint, LambdaOnly };

std::optional<Multipliers> kkt_solve(const UncertainMOP& p, const Vector& xbar, const Scenario& u,
                                     KktNormalization norm = KktNormalization::Joint,
                                     const Tolerances& tol = {});

Verdict highly_robust_kkt(const UncertainMOP& p, const Vector& xbar, const ScenarioSet& scenarios,
                          KktNormalization norm = KktNormalization::LambdaOnly,
                          const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Sufficiency

struct ConvexityResult {
  bool holds = true;
  std::optional<Vector> x;
  std::optional<Scenario> u;
  std::optional<Vector> d;  // last successful d when holds
};

ConvexityResult generalized_convexity(const UncertainMOP& p, const Vector& xbar,
                                      const std::vector<Vector>& x_samples,
                                      const ScenarioSet& scenarios, bool strict,
                                      bool include_constraints, const Tolerances& tol = {});

Verdict sufficiency_certificate(const UncertainMOP& p, const Vector& xbar,
                                const ScenarioSet& scenarios, const std::vector<Vector>& x_samples,
                                bool strict = false, const Tolerances& tol = {});

struct IsolatedResult {
  bool holds = false;
  double margin = 0.0;
  std::optional<Vector> worst_x;
};

IsolatedResult isolated_check(const UncertainMOP& p, const Vector& xbar, double L, double radius,
                              int grid, const Tolerances& tol = {});

/// Throws NotApplicable when some U_i is unbounded.
Verdict isolated_implies_hr(const UncertainMOP& p, const Vector& xbar, double radius, int grid,
                            const Tolerances& tol = {});

struct StrictnessResult {
  bool holds = true;
  std::optional<Vector> x;
};

StrictnessResult strictness_condition(const UncertainMOP& p, const Vector& xbar,
                                      const std::vector<Vector>& x_samples,
                                      const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Robustness notions

Verdict worst_case_check(const UncertainMOP& p, const Vector& xbar, double radius, int grid,
                         const Tolerances& tol = {});

Verdict set_based_check(const UncertainMOP& p, const Vector& xbar, const ScenarioSet& scenarios,
                        double radius, int grid, const Tolerances& tol = {});

inline const std::vector<double> kDefaultMList{1e1, 1e2, 1e3, 1e4};

Verdict proper_refuter(const UncertainMOP& p, const Vector& xbar, int direction_net,
                       const std::vector<double>& M_list, double radius, int grid,
                       const Tolerances& tol = {});

}  // namespace hirob
