#include "hirob/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

#include "hirob/errors.hpp"
#include "hirob/scenarios.hpp"

namespace hirob {

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>>& suite_table() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table{
      {"highly-robust", {"hr-scan-weak", "hr-scan-efficient", "hr-scan-strict"}},
      {"necessary", {"necessary-condition", "kkt"}},
      {"sufficiency", {"sufficiency-kkt", "isolated-efficiency", "strictness-condition"}},
      {"robustness", {"worst-case", "set-based"}},
      {"proper", {"proper-efficiency"}},
  };
  return table;
}

bool polyhedral(const UncertaintySet& U) {
  return !std::holds_alternative<BallSet>(U.shape) && !std::holds_alternative<EllipsoidSet>(U.shape);
}

Json scenario_to_json(const Scenario& u) {
  Json out = Json::array();
  for (const auto& ui : u) out.push_back(vector_to_json(ui));
  return out;
}

Json multipliers_to_json(const Multipliers& m) {
  Json cw = Json::array();
  for (const auto& c : m.constraint_weights) {
    Json gens = Json::array();
    for (const auto& g : c.generators) gens.push_back(vector_to_json(g));
    cw.push_back({{"j", c.j}, {"v", c.v}, {"generators", gens}, {"weights", c.weights}});
  }
  return {{"lambda", vector_to_json(m.lambda)},
          {"mu", vector_to_json(m.mu)},
          {"objective_weights", m.objective_weights},
          {"constraint_weights", cw},
          {"residual", m.residual}};
}

/// Everything a check needs, built lazily and shared across checks.
class Context {
 public:
  Context(const ProblemFile& file, const Vector& xbar, const CheckConfig& config)
      : p_(file.problem), xbar_(xbar), config_(config) {
    tol_.strict_tol = config.tol;
  }

  const UncertainMOP& problem() const { return p_; }
  const Vector& xbar() const { return xbar_; }
  const Tolerances& tol() const { return tol_; }
  const CheckConfig& config() const { return config_; }

  double radius() const { return config_.radius ? *config_.radius : default_radius(p_); }

  const ScenarioSet& scenarios() {
    if (!scenarios_) {
      ScenarioSet s = sample(p_, config_.scenario_res, config_.seed);
      if (std::all_of(p_.uncertainty.begin(), p_.uncertainty.end(), polyhedral))
        s = s.merged(epd_scenarios(p_, config_.gamma_grid));
      scenarios_ = std::move(s);
    }
    return *scenarios_;
  }

  const std::vector<Vector>& samples() {
    if (!samples_) {
      const int g = std::min(config_.grid, config_.sample_grid);
      samples_ = feasible_lattice(p_, xbar_, radius(), g, tol_).points;
    }
    return *samples_;
  }

 private:
  const UncertainMOP& p_;
  Vector xbar_;
  const CheckConfig& config_;
  Tolerances tol_;
  std::optional<ScenarioSet> scenarios_;
  std::optional<std::vector<Vector>> samples_;
};

Verdict scan(Context& c, EfficiencyMode mode) {
  return highly_robust_scan(c.problem(), c.xbar(), mode, c.scenarios(), c.radius(), c.config().grid,
                            c.tol());
}

Verdict necessary(Context& c) {
  auto pair = necessary_refute(c.problem(), c.xbar(), c.config().direction_net, c.tol());
  Verdict v;
  v.resolution = {{"direction_net", c.config().direction_net}};
  if (pair) {
    v.status = VerdictStatus::Refuted;
    v.witness = Witness{std::nullopt, pair->u, pair->d, std::nullopt};
    v.notes.push_back("support of some scenario exceeds every subdifferential support along d");
  } else {
    v.status = VerdictStatus::ConsistentAtResolution;
    v.notes.push_back("no refuting direction found");
  }
  return v;
}

Verdict kkt(Context& c) {
  Verdict v = highly_robust_kkt(c.problem(), c.xbar(), c.scenarios(), KktNormalization::LambdaOnly, c.tol());
  v.notes.push_back(cq2(c.problem(), c.xbar(), c.tol()) ? "CQ2 holds" : "CQ2 fails");
  return v;
}

Verdict sufficiency(Context& c) {
  Verdict v = sufficiency_certificate(c.problem(), c.xbar(), c.scenarios(), c.samples(), false, c.tol());
  v.resolution["sample_grid"] = std::min(c.config().grid, c.config().sample_grid);
  return v;
}

Verdict isolated(Context& c) {
  return isolated_implies_hr(c.problem(), c.xbar(), c.radius(), c.config().grid, c.tol());
}

Verdict strictness(Context& c) {
  const StrictnessResult r = strictness_condition(c.problem(), c.xbar(), c.samples(), c.tol());
  Verdict v;
  v.resolution = {{"samples", static_cast<double>(c.samples().size())}};
  if (r.holds) {
    v.status = VerdictStatus::ConsistentAtResolution;
    v.notes.push_back("every support along sampled feasible directions is positive");
  } else {
    v.status = VerdictStatus::Inconclusive;
    v.witness = Witness{r.x, std::nullopt, std::nullopt, std::nullopt};
    v.notes.push_back("some uncertainty set has nonpositive support along the witness direction");
  }
  return v;
}

Verdict run_named(Context& c, const std::string& name) {
  if (name == "hr-scan-weak") return scan(c, EfficiencyMode::Weak);
  if (name == "hr-scan-efficient") return scan(c, EfficiencyMode::Efficient);
  if (name == "hr-scan-strict") return scan(c, EfficiencyMode::Strict);
  if (name == "necessary-condition") return necessary(c);
  if (name == "kkt") return kkt(c);
  if (name == "sufficiency-kkt") return sufficiency(c);
  if (name == "isolated-efficiency") return isolated(c);
  if (name == "strictness-condition") return strictness(c);
  if (name == "worst-case") return worst_case_check(c.problem(), c.xbar(), c.radius(), c.config().grid, c.tol());
  if (name == "set-based")
    return set_based_check(c.problem(), c.xbar(), c.scenarios(), c.radius(), c.config().grid, c.tol());
  if (name == "proper-efficiency")
    return proper_refuter(c.problem(), c.xbar(), c.config().direction_net, kDefaultMList, c.radius(),
                          c.config().grid, c.tol());
  throw ConfigError("unknown check \"" + name + "\"");
}

Json settings_json(const CheckConfig& config, const std::vector<std::string>& checks, double radius) {
  return {{"suites", config.suites},
          {"checks", checks},
          {"grid", config.grid},
          {"scenario_res", config.scenario_res},
          {"radius", radius},
          {"tol", config.tol},
          {"gamma_grid", config.gamma_grid},
          {"direction_net", config.direction_net},
          {"sample_grid", config.sample_grid}};
}

}  // namespace

std::vector<std::string> expand_suites(const std::vector<std::string>& suites) {
  if (suites.empty()) throw ConfigError("no suite selected");
  std::vector<std::string> out;
  auto add = [&](const std::vector<std::string>& names) {
    for (const auto& n : names)
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (const auto& s : suites) {
    if (s == "all") {
      for (const auto& [name, checks] : suite_table()) add(checks);
      continue;
    }
    auto it = std::find_if(suite_table().begin(), suite_table().end(),
                           [&](const auto& e) { return e.first == s; });
    if (it == suite_table().end()) throw ConfigError("unknown suite \"" + s + "\"");
    add(it->second);
  }
  return out;
}

Report run_check(const ProblemFile& file, const std::string& candidate, const CheckConfig& config) {
  const std::vector<std::string> checks = expand_suites(config.suites);
  if (config.grid < 2) throw ConfigError("--grid must be at least 2");
  if (config.scenario_res < 1) throw ConfigError("--scenario-res must be positive");
  if (!(config.tol > 0.0)) throw ConfigError("--tol must be positive");

  Report report;
  report.candidate = file.candidate(candidate);
  report.problem_hash = problem_hash(file);
  report.seed = config.seed;
  Context ctx(file, report.candidate.x, config);
  double radius = std::numeric_limits<double>::quiet_NaN();
  try {
    radius = ctx.radius();
  } catch (const ConfigError&) {
    // lattice checks will report the missing box_bounds individually
  }
  report.settings = settings_json(config, checks, radius);

  for (const auto& name : checks) {
    CheckRecord rec;
    rec.name = name;
    try {
      rec.verdict = run_named(ctx, name);
      rec.status = to_string(rec.verdict->status);
    } catch (const NotApplicable& e) {
      rec.status = "NotApplicable";
      rec.message = e.what();
    } catch (const Error& e) {
      rec.status = "Error";
      rec.message = e.what();
    }
    report.checks.push_back(std::move(rec));
  }
  return report;
}

int exit_code_from_statuses(const std::vector<std::string>& statuses) {
  if (std::find(statuses.begin(), statuses.end(), "Refuted") != statuses.end()) return 1;
  if (std::find(statuses.begin(), statuses.end(), "Error") != statuses.end()) return 2;
  return 0;
}

int exit_code(const Report& report) {
  std::vector<std::string> statuses;
  for (const auto& c : report.checks) statuses.push_back(c.status);
  return exit_code_from_statuses(statuses);
}

Json verdict_to_json(const Verdict& v) {
  Json j{{"status", to_string(v.status)}, {"notes", v.notes}};
  Json res = Json::object();
  for (const auto& [k, val] : v.resolution) res[k] = val;
  j["resolution"] = res;
  if (v.certificate) j["certificate"] = to_string(*v.certificate);
  if (v.witness) {
    Json w = Json::object();
    if (v.witness->x) w["x"] = vector_to_json(*v.witness->x);
    if (v.witness->u) w["u"] = scenario_to_json(*v.witness->u);
    if (v.witness->d) w["d"] = vector_to_json(*v.witness->d);
    if (v.witness->multipliers) w["multipliers"] = multipliers_to_json(*v.witness->multipliers);
    j["witness"] = w;
  }
  return j;
}

Json report_to_json(const Report& report) {
  Json checks = Json::array();
  std::map<std::string, int> counts;
  for (const auto& c : report.checks) {
    Json j = c.verdict ? verdict_to_json(*c.verdict) : Json{{"status", c.status}};
    j["name"] = c.name;
    j["status"] = c.status;
    if (!c.message.empty()) j["message"] = c.message;
    checks.push_back(j);
    ++counts[c.status];
  }
  return {{"toolkit", {{"name", "hirob"}, {"version", kToolkitVersion}}},
          {"problem_hash", report.problem_hash},
          {"candidate", {{"name", report.candidate.name}, {"x", vector_to_json(report.candidate.x)}}},
          {"seed", report.seed},
          {"settings", report.settings},
          {"checks", checks},
          {"summary", {{"counts", counts}, {"exit_code", exit_code(report)}}}};
}

std::string report_text(const Report& report) { return canonical_dump(report_to_json(report)) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing " + path);
}

void emit_report(const Report& report, const std::string& path) { write_text_file(path, report_text(report)); }

}  // namespace hirob
