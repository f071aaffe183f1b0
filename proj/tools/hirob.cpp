#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hirob/errors.hpp"
#include "hirob/ingest.hpp"
#include "hirob/problem_io.hpp"
#include "hirob/report.hpp"
#include "hirob/scenarios.hpp"

namespace {

using namespace hirob;

struct CheckArgs {
  std::string problem;
  std::string candidate = "xbar";
  std::vector<std::string> suites;
  int grid = 101;
  int scenario_res = 5;
  std::string radius = "local";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string gamma_grid;
  std::string out;
};

void add_check_options(CLI::App* cmd, CheckArgs& a, bool with_suite) {
  cmd->add_option("problem", a.problem, "problem file (JSON)")->required();
  cmd->add_option("--candidate", a.candidate, "candidate name from the problem file")->capture_default_str();
  if (with_suite)
    cmd->add_option("--suite", a.suites,
                    "highly-robust | necessary | sufficiency | robustness | proper | all (repeatable)");
  cmd->add_option("--grid", a.grid, "lattice points per axis")->capture_default_str();
  cmd->add_option("--scenario-res", a.scenario_res, "scenario sampling resolution")->capture_default_str();
  cmd->add_option("--radius", a.radius, "neighbourhood radius: a number, 'local' or 'global'")
      ->capture_default_str();
  cmd->add_option("--tol", a.tol, "strict-inequality margin")->capture_default_str();
  cmd->add_option("--seed", a.seed, "seed for low-discrepancy sampling")->capture_default_str();
  cmd->add_option("--gamma-grid", a.gamma_grid, "comma-separated ray scalings, must contain 0");
  cmd->add_option("--out", a.out, "report path (stdout when omitted)");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(Json(item), "--gamma-grid"));
  return out;
}

CheckConfig make_config(const CheckArgs& a, std::vector<std::string> default_suites) {
  CheckConfig c;
  c.suites = a.suites.empty() ? std::move(default_suites) : a.suites;
  c.grid = a.grid;
  c.scenario_res = a.scenario_res;
  c.tol = a.tol;
  c.seed = a.seed;
  if (!a.gamma_grid.empty()) c.gamma_grid = parse_list(a.gamma_grid);
  if (a.radius == "global") c.radius = kGlobalRadius;
  else if (a.radius != "local") c.radius = parse_number(Json(a.radius), "--radius");
  return c;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
}

int run_check_command(const CheckArgs& a, std::vector<std::string> default_suites) {
  const ProblemFile file = parse_problem_file(a.problem);
  const Report report = run_check(file, a.candidate, make_config(a, std::move(default_suites)));
  const std::string text = report_text(report);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    emit_report(report, a.out);
    for (const auto& c : report.checks) std::cerr << c.name << ": " << c.status << '\n';
  }
  return exit_code(report);
}

int run_report_command(const std::string& path, const std::string& out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("", std::string("malformed report: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("checks") || !doc["checks"].is_array())
    throw ParseError("/checks", "report has no check list");
  std::vector<std::string> statuses;
  std::ostringstream summary;
  for (std::size_t k = 0; k < doc["checks"].size(); ++k) {
    const Json& c = doc["checks"][k];
    if (!c.contains("name") || !c.contains("status"))
      throw ParseError("/checks/" + std::to_string(k), "check needs name and status");
    const std::string status = c["status"].get<std::string>();
    statuses.push_back(status);
    summary << c["name"].get<std::string>() << ": " << status << '\n';
  }
  std::cout << summary.str();
  if (!out.empty()) write_text_file(out, canonical_dump(doc) + "\n");
  return exit_code_from_statuses(statuses);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hirob: certificates and refutations for highly robust efficiency"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "run certification suites on a candidate");
  add_check_options(check, check_args, true);

  CheckArgs wc_args;
  auto* worstcase = app.add_subcommand("worstcase", "worst-case and set-based robustness checks");
  add_check_options(worstcase, wc_args, false);

  std::string reduce_in, reduce_out;
  auto* reduce = app.add_subcommand("reduce", "diagonal reduction for equal uncertainty sets");
  reduce->add_option("problem", reduce_in, "problem file (JSON)")->required();
  reduce->add_option("--out", reduce_out, "output problem path (stdout when omitted)");

  std::string csv, set_type = "box", ingest_out;
  int window = 0;
  double budget = 1.0;
  auto* ingest = app.add_subcommand("ingest", "build a portfolio problem from a returns CSV");
  ingest->add_option("csv", csv, "returns CSV with a header row")->required();
  ingest->add_option("--window", window, "trailing rows to estimate from")->required();
  ingest->add_option("--set-type", set_type, "box | ball | ellipsoid")->capture_default_str();
  ingest->add_option("--budget", budget, "budget E in sum x <= E")->capture_default_str();
  ingest->add_option("--out", ingest_out, "output problem path (stdout when omitted)");

  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "summarize a report and return its exit code");
  report->add_option("report", report_in, "report file")->required();
  report->add_option("--out", report_out, "rewrite the report canonically to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return run_check_command(check_args, {"highly-robust"});
    if (*worstcase) return run_check_command(wc_args, {"robustness"});
    if (*reduce) {
      ProblemFile file = parse_problem_file(reduce_in);
      auto reduced = diagonal_reduce(file.problem);
      if (!reduced) throw ConfigError("uncertainty sets differ; no diagonal reduction");
      file.problem = std::move(*reduced);
      emit(canonical_dump(problem_to_json(file)) + "\n", reduce_out);
      return 0;
    }
    if (*ingest) {
      const ProblemFile file = ingest_returns_file(csv, window, parse_ingest_set(set_type), budget);
      emit(canonical_dump(problem_to_json(file)) + "\n", ingest_out);
      return 0;
    }
    if (*report) return run_report_command(report_in, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
