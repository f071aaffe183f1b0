#include "hirob/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "hirob/errors.hpp"

namespace hirob {

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return ptr + "/" + escaped;
}

std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

double parse_factor(const std::string& s, const std::string& ptr) {
  if (s == "pi") return std::numbers::pi;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError(ptr, "cannot read number from \"" + s + "\"");
  }
  if (used != s.size()) throw ParseError(ptr, "cannot read number from \"" + s + "\"");
  return v;
}

double parse_numeric_string(std::string s, const std::string& ptr) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ParseError(ptr, "empty number string");
  double sign = 1.0;
  if (s[0] == '-' || s[0] == '+') {
    if (s[0] == '-') sign = -1.0;
    s.erase(0, 1);
  }
  double value = 1.0;
  char op = '*';
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k < s.size() && s[k] != '*' && s[k] != '/') continue;
    const double f = parse_factor(s.substr(start, k - start), ptr);
    value = op == '*' ? value * f : value / f;
    if (k < s.size()) op = s[k];
    start = k + 1;
  }
  return sign * value;
}

const Json& require(const Json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw ParseError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(ptr, key), "missing required key");
  return *it;
}

const Json* optional_key(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& ptr) {
  if (!obj.is_object()) throw ParseError(ptr, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ParseError(child(ptr, it.key()), "unknown key");
  }
}

const Json& require_array(const Json& v, const std::string& ptr) {
  if (!v.is_array()) throw ParseError(ptr, "expected an array");
  return v;
}

std::string require_string(const Json& v, const std::string& ptr) {
  if (!v.is_string()) throw ParseError(ptr, "expected a string");
  return v.get<std::string>();
}

bool require_bool(const Json& v, const std::string& ptr) {
  if (!v.is_boolean()) throw ParseError(ptr, "expected a boolean");
  return v.get<bool>();
}

Vector parse_vector(const Json& v, const std::string& ptr, int n = -1) {
  require_array(v, ptr);
  if (n >= 0 && static_cast<int>(v.size()) != n)
    throw ParseError(ptr, fmt::format("expected {} entries, found {}", n, v.size()));
  Vector out(static_cast<int>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<int>(k)] = parse_number(v[k], child(ptr, k));
  return out;
}

std::vector<Vector> parse_vector_list(const Json& v, const std::string& ptr, int n) {
  require_array(v, ptr);
  std::vector<Vector> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(parse_vector(v[k], child(ptr, k), n));
  return out;
}

Matrix parse_matrix(const Json& v, const std::string& ptr, int n) {
  require_array(v, ptr);
  if (static_cast<int>(v.size()) != n) throw ParseError(ptr, fmt::format("expected {} rows", n));
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) m.row(r) = parse_vector(v[r], child(ptr, r), n).transpose();
  return m;
}

SmoothPiece parse_piece(const Json& v, const std::string& ptr, int n) {
  check_keys(v, {"constant", "linear", "quad"}, ptr);
  SmoothPiece s;
  s.linear = Vector::Zero(n);
  if (const Json* c = optional_key(v, "constant")) s.constant = parse_number(*c, child(ptr, "constant"));
  if (const Json* l = optional_key(v, "linear")) s.linear = parse_vector(*l, child(ptr, "linear"), n);
  if (const Json* q = optional_key(v, "quad")) s.quad = parse_matrix(*q, child(ptr, "quad"), n);
  return s;
}

SurrogateKind parse_surrogate_kind(const Json& v, const std::string& ptr) {
  const std::string k = require_string(v, ptr);
  if (k == "cbrt") return SurrogateKind::Cbrt;
  if (k == "square_sin_inverse") return SurrogateKind::SquareSinInverse;
  throw ParseError(ptr, "unknown surrogate kind \"" + k + "\"");
}

ScalarExpr parse_expr(const Json& v, const std::string& ptr, int n) {
  check_keys(v, {"constant", "linear", "quad", "abs_terms", "max_terms", "surrogate_terms"}, ptr);
  const SmoothPiece base = parse_piece(
      Json{{"constant", v.value("constant", Json(0))},
           {"linear", v.contains("linear") ? v["linear"] : Json(std::vector<double>(n, 0.0))}},
      ptr, n);
  ScalarExpr e;
  e.constant = base.constant;
  e.linear = base.linear;
  if (const Json* q = optional_key(v, "quad")) e.quad = parse_matrix(*q, child(ptr, "quad"), n);
  if (const Json* a = optional_key(v, "abs_terms")) {
    const std::string ap = child(ptr, "abs_terms");
    require_array(*a, ap);
    for (std::size_t k = 0; k < a->size(); ++k) {
      const std::string tp = child(ap, k);
      const Json& t = (*a)[k];
      check_keys(t, {"weight", "a", "b"}, tp);
      AbsTerm term;
      if (const Json* w = optional_key(t, "weight")) term.weight = parse_number(*w, child(tp, "weight"));
      term.a = parse_vector(require(t, "a", tp), child(tp, "a"), n);
      if (const Json* b = optional_key(t, "b")) term.b = parse_number(*b, child(tp, "b"));
      e.abs_terms.push_back(std::move(term));
    }
  }
  if (const Json* m = optional_key(v, "max_terms")) {
    const std::string mp = child(ptr, "max_terms");
    require_array(*m, mp);
    for (std::size_t k = 0; k < m->size(); ++k) {
      const std::string tp = child(mp, k);
      check_keys((*m)[k], {"pieces"}, tp);
      const Json& pieces = require_array(require((*m)[k], "pieces", tp), child(tp, "pieces"));
      if (pieces.empty()) throw ParseError(child(tp, "pieces"), "max term needs at least one piece");
      MaxTerm term;
      for (std::size_t r = 0; r < pieces.size(); ++r)
        term.pieces.push_back(parse_piece(pieces[r], child(child(tp, "pieces"), r), n));
      e.max_terms.push_back(std::move(term));
    }
  }
  if (const Json* s = optional_key(v, "surrogate_terms")) {
    const std::string sp = child(ptr, "surrogate_terms");
    require_array(*s, sp);
    for (std::size_t k = 0; k < s->size(); ++k) {
      const std::string tp = child(sp, k);
      const Json& t = (*s)[k];
      check_keys(t, {"kind", "weight", "a", "b", "anchor", "subgradients"}, tp);
      SurrogateTerm term;
      term.kind = parse_surrogate_kind(require(t, "kind", tp), child(tp, "kind"));
      if (const Json* w = optional_key(t, "weight")) term.weight = parse_number(*w, child(tp, "weight"));
      term.a = parse_vector(require(t, "a", tp), child(tp, "a"), n);
      if (const Json* b = optional_key(t, "b")) term.b = parse_number(*b, child(tp, "b"));
      if (const Json* an = optional_key(t, "anchor")) term.anchor = parse_vector(*an, child(tp, "anchor"), n);
      if (const Json* g = optional_key(t, "subgradients"))
        term.subgradients = parse_vector_list(*g, child(tp, "subgradients"), n);
      e.surrogate_terms.push_back(std::move(term));
    }
  }
  return e;
}

CoeffTerm parse_coeff_term(const Json& v, const std::string& ptr) {
  check_keys(v, {"basis", "coeffs"}, ptr);
  CoeffTerm t;
  const std::string basis = require_string(require(v, "basis", ptr), child(ptr, "basis"));
  if (basis == "poly") t.basis = CoeffBasis::Poly;
  else if (basis == "sin") t.basis = CoeffBasis::Sin;
  else if (basis == "cos") t.basis = CoeffBasis::Cos;
  else throw ParseError(child(ptr, "basis"), "unknown basis \"" + basis + "\"");
  const Vector c = parse_vector(require(v, "coeffs", ptr), child(ptr, "coeffs"));
  t.coeffs.assign(c.data(), c.data() + c.size());
  return t;
}

/// A number, one {basis, coeffs} descriptor, or an array of descriptors summed.
CoeffFunction parse_coeff(const Json& v, const std::string& ptr) {
  if (v.is_number() || v.is_string()) return CoeffFunction::constant(parse_number(v, ptr));
  CoeffFunction f;
  if (v.is_object()) {
    f.terms.push_back(parse_coeff_term(v, ptr));
  } else if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) f.terms.push_back(parse_coeff_term(v[k], child(ptr, k)));
  } else {
    throw ParseError(ptr, "expected a number or coefficient descriptor");
  }
  return f;
}

ParamDomain parse_domain(const Json& v, const std::string& ptr) {
  const std::string kind = require_string(require(v, "kind", ptr), child(ptr, "kind"));
  if (kind == "interval") {
    check_keys(v, {"kind", "lo", "hi", "lo_closed", "hi_closed"}, ptr);
    IntervalDomain d;
    d.lo = parse_number(require(v, "lo", ptr), child(ptr, "lo"));
    d.hi = parse_number(require(v, "hi", ptr), child(ptr, "hi"));
    if (const Json* c = optional_key(v, "lo_closed")) d.lo_closed = require_bool(*c, child(ptr, "lo_closed"));
    if (const Json* c = optional_key(v, "hi_closed")) d.hi_closed = require_bool(*c, child(ptr, "hi_closed"));
    return d;
  }
  if (kind == "finite") {
    check_keys(v, {"kind", "values"}, ptr);
    const Vector vals = parse_vector(require(v, "values", ptr), child(ptr, "values"));
    return FiniteDomain{std::vector<double>(vals.data(), vals.data() + vals.size())};
  }
  throw ParseError(child(ptr, "kind"), "unknown domain kind \"" + kind + "\"");
}

ParamConstraint parse_constraint(const Json& v, const std::string& ptr, int n) {
  const std::string kind = require_string(require(v, "kind", ptr), child(ptr, "kind"));
  if (kind == "affine_in_x") {
    check_keys(v, {"kind", "a", "b", "domain"}, ptr);
    AffineInX g;
    const Json& a = require_array(require(v, "a", ptr), child(ptr, "a"));
    if (static_cast<int>(a.size()) != n)
      throw ParseError(child(ptr, "a"), fmt::format("expected {} coefficient functions", n));
    for (std::size_t k = 0; k < a.size(); ++k) g.a.push_back(parse_coeff(a[k], child(child(ptr, "a"), k)));
    g.b = v.contains("b") ? parse_coeff(v["b"], child(ptr, "b")) : CoeffFunction::constant(0.0);
    return ParamConstraint::affine(std::move(g), parse_domain(require(v, "domain", ptr), child(ptr, "domain")));
  }
  if (kind == "finite_scenarios") {
    check_keys(v, {"kind", "scenarios"}, ptr);
    const std::string sp = child(ptr, "scenarios");
    const Json& list = require_array(require(v, "scenarios", ptr), sp);
    if (list.empty()) throw ParseError(sp, "finite_scenarios needs at least one scenario");
    std::vector<LabeledExpr> scenarios;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string ep = child(sp, k);
      check_keys(list[k], {"v", "expr"}, ep);
      LabeledExpr le;
      le.v = parse_number(require(list[k], "v", ep), child(ep, "v"));
      le.expr = parse_expr(require(list[k], "expr", ep), child(ep, "expr"), n);
      for (const auto& prev : scenarios)
        if (prev.v == le.v) throw ParseError(child(ep, "v"), "duplicate scenario label");
      scenarios.push_back(std::move(le));
    }
    return ParamConstraint::finite(std::move(scenarios));
  }
  throw ParseError(child(ptr, "kind"), "unknown constraint kind \"" + kind + "\"");
}

UncertaintySet parse_set(const Json& v, const std::string& ptr, int n) {
  const std::string kind = require_string(require(v, "kind", ptr), child(ptr, "kind"));
  if (kind == "polytope") {
    check_keys(v, {"kind", "vertices", "rays"}, ptr);
    PolytopeSet s;
    s.vertices = parse_vector_list(require(v, "vertices", ptr), child(ptr, "vertices"), n);
    if (const Json* r = optional_key(v, "rays")) s.rays = parse_vector_list(*r, child(ptr, "rays"), n);
    return {s};
  }
  if (kind == "box") {
    check_keys(v, {"kind", "lo", "hi"}, ptr);
    return {BoxSet{parse_vector(require(v, "lo", ptr), child(ptr, "lo"), n),
                   parse_vector(require(v, "hi", ptr), child(ptr, "hi"), n)}};
  }
  if (kind == "ball") {
    check_keys(v, {"kind", "center", "radius"}, ptr);
    return {BallSet{parse_vector(require(v, "center", ptr), child(ptr, "center"), n),
                    parse_number(require(v, "radius", ptr), child(ptr, "radius"))}};
  }
  if (kind == "ellipsoid") {
    check_keys(v, {"kind", "center", "shape"}, ptr);
    return {EllipsoidSet{parse_vector(require(v, "center", ptr), child(ptr, "center"), n),
                         parse_matrix(require(v, "shape", ptr), child(ptr, "shape"), n)}};
  }
  if (kind == "finite") {
    check_keys(v, {"kind", "points"}, ptr);
    return {FiniteSet{parse_vector_list(require(v, "points", ptr), child(ptr, "points"), n)}};
  }
  throw ParseError(child(ptr, "kind"), "unknown uncertainty set kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

Json vectors_to_json(const std::vector<Vector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(vector_to_json(v));
  return out;
}

Json piece_to_json(double constant, const Vector& linear, const std::optional<Matrix>& quad) {
  Json j{{"constant", constant}, {"linear", vector_to_json(linear)}};
  if (quad) j["quad"] = matrix_to_json(*quad);
  return j;
}

Json expr_to_json(const ScalarExpr& e) {
  Json j = piece_to_json(e.constant, e.linear, e.quad);
  if (!e.abs_terms.empty()) {
    Json a = Json::array();
    for (const auto& t : e.abs_terms) a.push_back({{"weight", t.weight}, {"a", vector_to_json(t.a)}, {"b", t.b}});
    j["abs_terms"] = a;
  }
  if (!e.max_terms.empty()) {
    Json m = Json::array();
    for (const auto& t : e.max_terms) {
      Json pieces = Json::array();
      for (const auto& p : t.pieces) pieces.push_back(piece_to_json(p.constant, p.linear, p.quad));
      m.push_back({{"pieces", pieces}});
    }
    j["max_terms"] = m;
  }
  if (!e.surrogate_terms.empty()) {
    Json s = Json::array();
    for (const auto& t : e.surrogate_terms) {
      Json o{{"kind", t.kind == SurrogateKind::Cbrt ? "cbrt" : "square_sin_inverse"},
             {"weight", t.weight},
             {"a", vector_to_json(t.a)},
             {"b", t.b}};
      if (t.anchor) o["anchor"] = vector_to_json(*t.anchor);
      if (!t.subgradients.empty()) o["subgradients"] = vectors_to_json(t.subgradients);
      s.push_back(o);
    }
    j["surrogate_terms"] = s;
  }
  return j;
}

Json coeff_to_json(const CoeffFunction& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) {
    const char* basis = t.basis == CoeffBasis::Poly ? "poly" : t.basis == CoeffBasis::Sin ? "sin" : "cos";
    terms.push_back({{"basis", basis}, {"coeffs", t.coeffs}});
  }
  return terms;
}

Json domain_to_json(const ParamDomain& d) {
  if (const auto* i = std::get_if<IntervalDomain>(&d))
    return {{"kind", "interval"}, {"lo", i->lo}, {"hi", i->hi}, {"lo_closed", i->lo_closed},
            {"hi_closed", i->hi_closed}};
  return {{"kind", "finite"}, {"values", std::get<FiniteDomain>(d).values}};
}

Json constraint_to_json(const ParamConstraint& c) {
  if (const auto* g = std::get_if<AffineInX>(&c.kind)) {
    Json a = Json::array();
    for (const auto& f : g->a) a.push_back(coeff_to_json(f));
    return {{"kind", "affine_in_x"}, {"a", a}, {"b", coeff_to_json(g->b)}, {"domain", domain_to_json(c.domain)}};
  }
  Json list = Json::array();
  for (const auto& s : std::get<FiniteScenarios>(c.kind).scenarios)
    list.push_back({{"v", s.v}, {"expr", expr_to_json(s.expr)}});
  return {{"kind", "finite_scenarios"}, {"scenarios", list}};
}

Json set_to_json(const UncertaintySet& U) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolytopeSet>) {
          Json j{{"kind", "polytope"}, {"vertices", vectors_to_json(s.vertices)}};
          if (!s.rays.empty()) j["rays"] = vectors_to_json(s.rays);
          return j;
        } else if constexpr (std::is_same_v<T, BoxSet>) {
          return {{"kind", "box"}, {"lo", vector_to_json(s.lo)}, {"hi", vector_to_json(s.hi)}};
        } else if constexpr (std::is_same_v<T, BallSet>) {
          return {{"kind", "ball"}, {"center", vector_to_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, EllipsoidSet>) {
          return {{"kind", "ellipsoid"}, {"center", vector_to_json(s.center)}, {"shape", matrix_to_json(s.shape)}};
        } else {
          return {{"kind", "finite"}, {"points", vectors_to_json(s.points)}};
        }
      },
      U.shape);
}

void dump_canonical(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map keeps keys sorted
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ',';
        dump_canonical(v[k], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isnan(d)) out += "\"nan\"";
      else if (std::isinf(d)) out += d > 0 ? "\"inf\"" : "\"-inf\"";
      else out += fmt::format("{:.17g}", d == 0.0 ? 0.0 : d);
      break;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

double parse_number(const Json& value, const std::string& pointer) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_numeric_string(value.get<std::string>(), pointer);
  throw ParseError(pointer, "expected a number");
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

const NamedPoint& ProblemFile::candidate(const std::string& name) const {
  for (const auto& c : candidates)
    if (c.name == name) return c;
  throw ConfigError("no candidate named \"" + name + "\"");
}

ProblemFile parse_problem(const Json& doc) {
  const std::string root;
  check_keys(doc, {"dimension", "objectives", "uncertainty", "constraints", "box_bounds", "candidates",
                   "diagonal", "comments"},
             root);
  const Json& dim = require(doc, "dimension", root);
  if (!dim.is_number_integer() || dim.get<int>() < 1) throw ParseError("/dimension", "expected a positive integer");
  const int n = dim.get<int>();

  ProblemFile file;
  UncertainMOP& p = file.problem;
  p.n = n;
  const Json& objs = require_array(require(doc, "objectives", root), "/objectives");
  for (std::size_t k = 0; k < objs.size(); ++k) p.objectives.push_back(parse_expr(objs[k], child("/objectives", k), n));
  const Json& sets = require_array(require(doc, "uncertainty", root), "/uncertainty");
  for (std::size_t k = 0; k < sets.size(); ++k) p.uncertainty.push_back(parse_set(sets[k], child("/uncertainty", k), n));
  if (const Json* cs = optional_key(doc, "constraints")) {
    require_array(*cs, "/constraints");
    for (std::size_t k = 0; k < cs->size(); ++k)
      p.constraints.push_back(parse_constraint((*cs)[k], child("/constraints", k), n));
  }
  if (const Json* bb = optional_key(doc, "box_bounds")) {
    check_keys(*bb, {"lo", "hi"}, "/box_bounds");
    p.box_bounds = BoxBounds{parse_vector(require(*bb, "lo", "/box_bounds"), "/box_bounds/lo", n),
                             parse_vector(require(*bb, "hi", "/box_bounds"), "/box_bounds/hi", n)};
  }
  if (const Json* d = optional_key(doc, "diagonal")) p.diagonal = require_bool(*d, "/diagonal");
  if (const Json* cands = optional_key(doc, "candidates")) {
    require_array(*cands, "/candidates");
    for (std::size_t k = 0; k < cands->size(); ++k) {
      const std::string cp = child("/candidates", k);
      check_keys((*cands)[k], {"name", "x"}, cp);
      NamedPoint np{require_string(require((*cands)[k], "name", cp), child(cp, "name")),
                    parse_vector(require((*cands)[k], "x", cp), child(cp, "x"), n)};
      for (const auto& prev : file.candidates)
        if (prev.name == np.name) throw ParseError(child(cp, "name"), "duplicate candidate name");
      file.candidates.push_back(std::move(np));
    }
  }
  if (const Json* cm = optional_key(doc, "comments")) {
    require_array(*cm, "/comments");
    for (std::size_t k = 0; k < cm->size(); ++k)
      file.comments.push_back(require_string((*cm)[k], child("/comments", k)));
  }
  p.validate();
  return file;
}

ProblemFile parse_problem_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemFile parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

Json problem_to_json(const ProblemFile& file) {
  const UncertainMOP& p = file.problem;
  Json doc;
  doc["dimension"] = p.n;
  doc["objectives"] = Json::array();
  for (const auto& f : p.objectives) doc["objectives"].push_back(expr_to_json(f));
  doc["uncertainty"] = Json::array();
  for (const auto& U : p.uncertainty) doc["uncertainty"].push_back(set_to_json(U));
  doc["constraints"] = Json::array();
  for (const auto& c : p.constraints) doc["constraints"].push_back(constraint_to_json(c));
  if (p.box_bounds) doc["box_bounds"] = {{"lo", vector_to_json(p.box_bounds->lo)}, {"hi", vector_to_json(p.box_bounds->hi)}};
  if (p.diagonal) doc["diagonal"] = true;
  doc["candidates"] = Json::array();
  for (const auto& c : file.candidates) doc["candidates"].push_back({{"name", c.name}, {"x", vector_to_json(c.x)}});
  if (!file.comments.empty()) doc["comments"] = file.comments;
  return doc;
}

std::string canonical_dump(const Json& value) {
  std::string out;
  dump_canonical(value, out);
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

std::string problem_hash(const ProblemFile& file) { return sha256_hex(canonical_dump(problem_to_json(file))); }

}  // namespace hirob
