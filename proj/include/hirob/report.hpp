#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hirob/certify.hpp"
#include "hirob/problem_io.hpp"

namespace hirob {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Suites: highly-robust, necessary, sufficiency, robustness, proper, all.
struct CheckConfig {
  std::vector<std::string> suites{"highly-robust"};
  int grid = 101;
  int scenario_res = 5;
  /// nullopt selects default_radius(); +inf means the whole box.
  std::optional<double> radius;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::vector<double> gamma_grid = kDefaultGammaGrid;
  int direction_net = 720;
  /// Cap on lattice points per axis used as sample lists by the sufficiency checks.
  int sample_grid = 21;
};

/// Check names in execution order; throws ConfigError on an unknown suite.
std::vector<std::string> expand_suites(const std::vector<std::string>& suites);

struct CheckRecord {
  std::string name;
  /// A VerdictStatus name, "NotApplicable" or "Error".
  std::string status;
  std::optional<Verdict> verdict;
  std::string message;
};

struct Report {
  std::string problem_hash;
  NamedPoint candidate;
  std::uint64_t seed = 0;
  Json settings;
  std::vector<CheckRecord> checks;
};

Report run_check(const ProblemFile& file, const std::string& candidate, const CheckConfig& config);

/// 1 if some check is Refuted, otherwise 2 if some check errored, otherwise 0.
int exit_code(const Report& report);
int exit_code_from_statuses(const std::vector<std::string>& statuses);

Json report_to_json(const Report& report);
std::string report_text(const Report& report);

/// Writes the canonical serialization plus a trailing newline; throws Error on IO failure.
void emit_report(const Report& report, const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json verdict_to_json(const Verdict& v);

}  // namespace hirob
