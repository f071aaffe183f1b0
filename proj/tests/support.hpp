#pragma once

#include <string>

#include "hirob/problem_io.hpp"

inline hirob::ProblemFile load_fixture(const std::string& name) {
  return hirob::parse_problem_file(std::string(HIROB_FIXTURE_DIR) + "/" + name + ".json");
}

inline hirob::Vector vec(std::initializer_list<double> xs) {
  hirob::Vector v(static_cast<int>(xs.size()));
  int k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}
