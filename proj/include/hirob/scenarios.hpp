#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hirob/model.hpp"

namespace hirob {

inline const std::vector<double> kDefaultGammaGrid{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
inline constexpr std::size_t kScenarioCap = 1000000;

struct LabeledScenario {
  Scenario u;
  std::string label;  // "vertex", "ray(g)", "grid", "random(seed)", "given"
};

/// Scenarios whose components have been checked against the problem's sets.
class ScenarioSet {
 public:
  ScenarioSet() = default;
  /// Validates u_i in U_i within tol for every scenario; throws ValidationError.
  ScenarioSet(const UncertainMOP& p, std::vector<LabeledScenario> scenarios, double tol = 1e-9);

  const std::vector<LabeledScenario>& scenarios() const { return scenarios_; }
  std::size_t size() const { return scenarios_.size(); }
  bool empty() const { return scenarios_.empty(); }

  /// Union, keeping the first copy of duplicated scenarios.
  ScenarioSet merged(const ScenarioSet& other) const;

 private:
  struct Checked {};
  ScenarioSet(Checked, std::vector<LabeledScenario> scenarios) : scenarios_(std::move(scenarios)) {}
  friend ScenarioSet epd_scenarios(const UncertainMOP&, const std::vector<double>&, std::size_t);
  friend ScenarioSet sample(const UncertainMOP&, int, std::uint64_t, std::size_t);

  std::vector<LabeledScenario> scenarios_;
};


/// Vertex-plus-scaled-ray scenarios, product across objectives.
ScenarioSet epd_scenarios(const UncertainMOP& p,
                          const std::vector<double>& gamma_grid = kDefaultGammaGrid,
                          std::size_t cap = kScenarioCap);

/// Deterministic lattice / low-discrepancy discretization of U.
ScenarioSet sample(const UncertainMOP& p, int resolution, std::uint64_t seed,
                   std::size_t cap = kScenarioCap);

/// Per-set component of sample().
std::vector<Vector> sample_set(const UncertaintySet& U, int resolution, std::uint64_t seed);

/// Diagonal restriction when every U_i is the same set; nullopt otherwise.
std::optional<UncertainMOP> diagonal_reduce(const UncertainMOP& p);

/// Ball of radius margin around the origin lies inside U.
bool contains_zero_interior(const UncertaintySet& U, double margin);

struct NormSup {
  double value = 0.0;
  bool exact = true;  // false when value is only an upper bound
};

NormSup norm_sup(const UncertaintySet& U);

/// Halton point in [0,1)^dim; index 0 is skipped by callers.
Vector halton(std::uint64_t index, int dim);

}  // namespace hirob
