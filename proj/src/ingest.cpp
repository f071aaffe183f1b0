#include "hirob/ingest.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "hirob/errors.hpp"

namespace hirob {

namespace {

std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw IngestError(fmt::format("line {}: unterminated quoted field", line_no));
  fields.push_back(cur);
  return fields;
}

double parse_cell(const std::string& s, std::size_t line_no, std::size_t col) {
  std::size_t start = s.find_first_not_of(" \t");
  std::size_t end = s.find_last_not_of(" \t");
  const std::string t = start == std::string::npos ? "" : s.substr(start, end - start + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v))
    throw IngestError(fmt::format("line {}, column {}: non-numeric cell \"{}\"", line_no, col + 1, s));
  return v;
}

ScalarExpr coordinate(int n, int k, double sign, double constant) {
  Vector lin = Vector::Zero(n);
  lin[k] = sign;
  return ScalarExpr::affine(lin, constant);
}

}  // namespace

IngestSet parse_ingest_set(const std::string& name) {
  if (name == "box") return IngestSet::Box;
  if (name == "ball") return IngestSet::Ball;
  if (name == "ellipsoid") return IngestSet::Ellipsoid;
  throw ConfigError("unknown set type \"" + name + "\" (box|ball|ellipsoid)");
}

ReturnTable read_returns_csv(std::istream& in) {
  ReturnTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_record(line, line_no);
    if (table.assets.empty()) {
      table.assets = std::move(fields);
      continue;
    }
    if (fields.size() != table.assets.size())
      throw IngestError(fmt::format("line {}: expected {} fields, found {}", line_no, table.assets.size(),
                                    fields.size()));
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) row.push_back(parse_cell(fields[c], line_no, c));
    table.rows.push_back(std::move(row));
  }
  if (table.assets.empty()) throw IngestError("missing header row");
  return table;
}

ProblemFile ingest_returns(const ReturnTable& table, int window, IngestSet set_type, double budget) {
  const int n = static_cast<int>(table.assets.size());
  if (n < 1) throw IngestError("no assets in header");
  if (window < 2) throw IngestError("window must contain at least 2 rows");
  if (static_cast<int>(table.rows.size()) < window)
    throw IngestError(fmt::format("history has {} rows, window needs {}", table.rows.size(), window));
  if (!(budget > 0.0) || !std::isfinite(budget)) throw IngestError("budget must be positive");

  Matrix R(window, n);
  const std::size_t first = table.rows.size() - static_cast<std::size_t>(window);
  for (int r = 0; r < window; ++r)
    for (int c = 0; c < n; ++c) R(r, c) = table.rows[first + r][c];
  const Vector mean = R.colwise().mean().transpose();
  const Matrix centered = R.rowwise() - mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / static_cast<double>(window - 1);
  const Vector se = (cov.diagonal() / static_cast<double>(window)).cwiseSqrt();
  const Vector half = 2.0 * se;

  ProblemFile file;
  UncertainMOP& p = file.problem;
  p.n = n;
  p.objectives.push_back(ScalarExpr::affine(-mean, 0.0));
  ScalarExpr risk = ScalarExpr::zero(n);
  risk.quad = 2.0 * cov;
  p.objectives.push_back(risk);

  const UncertaintySet origin{FiniteSet{{Vector::Zero(n)}}};
  const bool all_zero = half.maxCoeff() == 0.0;
  std::string set_note;
  if (all_zero) {
    p.uncertainty.push_back(origin);
    set_note = "zero standard error: return uncertainty is the single point 0";
  } else if (set_type == IngestSet::Box) {
    p.uncertainty.push_back({BoxSet{-half, half}});
    set_note = "return uncertainty: box of +-2 standard errors";
  } else if (set_type == IngestSet::Ball) {
    p.uncertainty.push_back({BallSet{Vector::Zero(n), half.norm()}});
    set_note = "return uncertainty: ball of radius 2 |se|";
  } else if (half.minCoeff() > 0.0) {
    p.uncertainty.push_back({EllipsoidSet{Vector::Zero(n), half.array().square().matrix().asDiagonal()}});
    set_note = "return uncertainty: axis ellipsoid with semi-axes 2 se";
  } else {
    p.uncertainty.push_back({BoxSet{-half, half}});
    set_note = "some standard error is zero: ellipsoid replaced by the box of +-2 standard errors";
  }
  p.uncertainty.push_back(origin);

  std::vector<LabeledExpr> nonneg;
  for (int k = 0; k < n; ++k) nonneg.push_back({static_cast<double>(k), coordinate(n, k, -1.0, 0.0)});
  p.constraints.push_back(ParamConstraint::finite(std::move(nonneg)));
  p.constraints.push_back(ParamConstraint::finite({{0.0, ScalarExpr::affine(Vector::Ones(n), -budget)}}));
  p.box_bounds = BoxBounds{Vector::Zero(n), Vector::Constant(n, budget)};
  p.validate();

  file.candidates.push_back({"equal_weight", Vector::Constant(n, budget / n)});
  std::string assets;
  for (int k = 0; k < n; ++k) assets += (k ? "," : "") + table.assets[k];
  file.comments = {
      "portfolio problem ingested from historical returns",
      "assets: " + assets,
      fmt::format("window: {} trailing rows of {}", window, table.rows.size()),
      "objective 0: negative expected return; objective 1: variance with the covariance estimate held fixed",
      set_note,
      "covariance uncertainty is not modelled: only the return vector enters as a linear perturbation",
  };
  return file;
}

ProblemFile ingest_returns_file(const std::string& csv_path, int window, IngestSet set_type, double budget) {
  std::ifstream in(csv_path);
  if (!in) throw IngestError("cannot open " + csv_path);
  return ingest_returns(read_returns_csv(in), window, set_type, budget);
}

}  // namespace hirob
