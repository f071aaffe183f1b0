#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hirob/model.hpp"

namespace hirob {

using Json = nlohmann::json;

/// A problem file: the model, its named candidate points and free-text comments.
struct ProblemFile {
  UncertainMOP problem;
  std::vector<NamedPoint> candidates;
  std::vector<std::string> comments;

  const NamedPoint& candidate(const std::string& name) const;
};

/// Throws ParseError (with a JSON pointer) on schema violations and
/// ValidationError on model invariant breaches.
ProblemFile parse_problem(const Json& doc);
ProblemFile parse_problem_file(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);

Json problem_to_json(const ProblemFile& file);

/// Reads a number that may also be written as a string such as "pi",
/// "-pi/2", "3*pi/4" or "inf".
double parse_number(const Json& value, const std::string& pointer);

/// Sorted keys, no whitespace, finite floats at 17 significant digits and
/// non-finite floats as the strings "inf", "-inf", "nan".
std::string canonical_dump(const Json& value);

std::string sha256_hex(const std::string& bytes);

/// sha256 of the canonical serialization of the parsed problem.
std::string problem_hash(const ProblemFile& file);

Json vector_to_json(const Vector& v);

}  // namespace hirob
