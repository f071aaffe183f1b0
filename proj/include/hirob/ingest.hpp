#pragma once

#include <istream>
#include <string>
#include <vector>

#include "hirob/problem_io.hpp"

namespace hirob {

enum class IngestSet { Box, Ball, Ellipsoid };

IngestSet parse_ingest_set(const std::string& name);

struct ReturnTable {
  std::vector<std::string> assets;
  std::vector<std::vector<double>> rows;
};

/// Header row of asset names followed by numeric rows (RFC 4180 subset:
/// quoted fields, doubled quotes, CRLF tolerated). Throws IngestError.
ReturnTable read_returns_csv(std::istream& in);

/// Mean-risk portfolio problem over the trailing `window` rows:
/// objectives -rbar.x and x' Sigma x, constraints x >= 0 and sum x <= budget,
/// return uncertainty sized by the per-asset standard error.
ProblemFile ingest_returns(const ReturnTable& table, int window, IngestSet set_type, double budget);
ProblemFile ingest_returns_file(const std::string& csv_path, int window, IngestSet set_type,
                                double budget);

}  // namespace hirob
