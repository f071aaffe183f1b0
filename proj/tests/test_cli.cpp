#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "hirob/errors.hpp"
#include "hirob/ingest.hpp"
#include "hirob/problem_io.hpp"
#include "hirob/report.hpp"
#include "support.hpp"

using namespace hirob;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("hirob-cli-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const std::string cmd = std::string(HIROB_EXE) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(HIROB_FIXTURE_DIR) + "/" + name + ".json";
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

}  // namespace

TEST_CASE("problem files round-trip through emit and parse") {
  for (const char* name : {"exhrob", "ex1-nec1", "ex2-nec1", "ex-neckkt"}) {
    const auto first = load_fixture(name);
    const Json emitted = problem_to_json(first);
    const auto second = parse_problem(emitted);
    CHECK(canonical_dump(problem_to_json(second)) == canonical_dump(emitted));
    CHECK(problem_hash(second) == problem_hash(first));
  }
}

TEST_CASE("problem parsing errors") {
  CHECK_THROWS_AS(parse_problem_text("{"), ParseError);
  CHECK_THROWS_AS(parse_problem_text(R"({"dimension": 1, "objectives": [], "uncertainty": [], "bogus": 1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(R"({"dimension": 1,
    "objectives": [{"linear": [1]}, {"linear": [1, 2]}],
    "uncertainty": [{"kind": "finite", "points": [[0]]}, {"kind": "finite", "points": [[0]]}]})"),
                  std::exception);
  CHECK_THROWS_AS(load_fixture("exhrob").candidate("missing"), ConfigError);
  CHECK(parse_number(Json("-pi/2"), "/x") == doctest::Approx(-1.5707963267948966));
  CHECK(parse_number(Json("3*pi/4"), "/x") == doctest::Approx(2.356194490192345));
  CHECK(std::isinf(parse_number(Json("inf"), "/x")));
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exit code aggregation") {
  CHECK(exit_code_from_statuses({"ConsistentAtResolution", "Certified"}) == 0);
  CHECK(exit_code_from_statuses({"Inconclusive", "NotApplicable"}) == 0);
  CHECK(exit_code_from_statuses({"Error", "ConsistentAtResolution"}) == 2);
  CHECK(exit_code_from_statuses({"Error", "Refuted"}) == 1);
}

TEST_CASE("check on exhrob succeeds and writes a report") {
  const fs::path out = scratch_dir() / "exhrob-report.json";
  const RunResult r = run("check " + fixture("exhrob") + " --scenario-res 11 --grid 201 --radius global --out " +
                          out.string());
  CHECK(r.code == 0);
  const Json report = Json::parse(slurp(out));
  CHECK(report["candidate"]["name"] == "xbar");
  CHECK(report["summary"]["exit_code"] == 0);
  for (const auto& c : report["checks"]) CHECK(c["status"] == "ConsistentAtResolution");
  CHECK(run("report " + out.string()).code == 0);
}

TEST_CASE("check on ex2-nec1 is refuted") {
  const RunResult r = run("check " + fixture("ex2-nec1") + " --suite highly-robust");
  CHECK(r.code == 1);
  const Json report = Json::parse(r.out);
  bool refuted = false;
  for (const auto& c : report["checks"]) {
    if (c["status"] != "Refuted") continue;
    refuted = true;
    const auto& u = c["witness"]["u"];
    CHECK(std::abs(u[0][0].get<double>()) <= 0.5);
    CHECK(std::abs(u[1][0].get<double>() + 1.0) <= 0.5);
  }
  CHECK(refuted);
  const std::string path = write_file("refuted.json", r.out);
  CHECK(run("report " + path).code == 1);
}

TEST_CASE("seeded reports are byte-identical") {
  const std::string args = "check " + fixture("ex1-nec1") + " --suite all --seed 7 --grid 41";
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.code == b.code);
  CHECK(!a.out.empty());
  CHECK(a.out == b.out);
}

TEST_CASE("configuration and I/O errors exit with 2") {
  CHECK(run("check " + fixture("exhrob") + " --suite nonsense").code == 2);
  CHECK(run("check " + fixture("exhrob") + " --candidate nobody").code == 2);
  CHECK(run("check /nonexistent/problem.json").code == 2);
  CHECK(run("check " + fixture("exhrob") + " --out /nonexistent-dir/sub/report.json").code == 2);
  CHECK(run("check " + fixture("exhrob") + " --grid notanumber").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("worstcase and reduce subcommands") {
  const RunResult wc = run("worstcase " + fixture("exhrob"));
  CHECK(wc.code == 0);
  const Json report = Json::parse(wc.out);
  std::vector<std::string> names;
  for (const auto& c : report["checks"]) names.push_back(c["name"]);
  CHECK(names == std::vector<std::string>{"worst-case", "set-based"});

  const RunResult red = run("reduce " + fixture("ex1-nec1"));
  CHECK(red.code == 0);
  const auto reduced = parse_problem_text(red.out);
  CHECK(reduced.problem.diagonal);
  CHECK(run("reduce " + fixture("exhrob")).code == 2);
}

TEST_CASE("ingest: constant returns give a singleton uncertainty set") {
  const std::string csv = write_file("const.csv", "a,b\n0.01,0.02\n0.01,0.02\n0.01,0.02\n");
  const auto file = ingest_returns_file(csv, 3, IngestSet::Box, 1.0);
  const auto& U = file.problem.uncertainty[0];
  REQUIRE(std::holds_alternative<FiniteSet>(U.shape));
  CHECK(std::get<FiniteSet>(U.shape).points.size() == 1);
  CHECK(file.problem.objectives[0].linear[0] == doctest::Approx(-0.01));
  CHECK(file.candidate("equal_weight").x[1] == doctest::Approx(0.5));
}

TEST_CASE("ingest: sample covariance and uncertainty sizing") {
  // uncorrelated columns with sample variance 4/3
  const std::string csv = write_file("id.csv", "\"x\",y\r\n1,1\r\n-1,1\r\n1,-1\r\n-1,-1\r\n");
  const auto file = ingest_returns_file(csv, 4, IngestSet::Ball, 2.0);
  const Matrix Q = *file.problem.objectives[1].quad;
  CHECK(Q(0, 0) == doctest::Approx(2.0 * 4.0 / 3.0));
  CHECK(Q(0, 1) == doctest::Approx(0.0));
  const auto& ball = std::get<BallSet>(file.problem.uncertainty[0].shape);
  const double se = std::sqrt((4.0 / 3.0) / 4.0);
  CHECK(ball.radius == doctest::Approx(std::sqrt(2.0) * 2.0 * se));

  const auto via_cli = run("ingest " + csv + " --window 4 --set-type ball --budget 2");
  CHECK(via_cli.code == 0);
  CHECK(problem_hash(parse_problem_text(via_cli.out)) == problem_hash(file));
}

TEST_CASE("ingest errors") {
  const std::string csv = write_file("short.csv", "a,b\n1,2\n3,4\n");
  CHECK_THROWS_AS(ingest_returns_file(csv, 5, IngestSet::Box, 1.0), IngestError);
  CHECK(run("ingest " + csv + " --window 5").code == 2);
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(read_returns_csv(ragged), IngestError);
  std::istringstream text("a,b\n1,zz\n");
  CHECK_THROWS_AS(read_returns_csv(text), IngestError);
  CHECK_THROWS_AS(parse_ingest_set("cone"), ConfigError);
}
