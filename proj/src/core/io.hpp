#pragma once

#include <string>

#include <json.hpp>

#include "exact.hpp"
#include "region.hpp"
#include "spectral.hpp"

namespace densilab {

// {"dim": d, "rows": [[...], ...]} or the inline form "2,0;0,4".
// Throws ParseError.
Mat parse_matrix(const std::string& text);

// Reads `arg` as a file when one exists at that path, else parses it inline.
Mat load_matrix(const std::string& arg);

// Throws PreconditionViolated when an entry is not an exact integer.
IntMatrix to_int_matrix(const Mat& m);

nlohmann::json matrix_json(const Mat& m);

// Region descriptor, e.g. {"type": "ealpha", "alpha": 3}. Subspaces are
// given as lists of column vectors. Throws ParseError or BadParameter.
Region parse_region(const nlohmann::json& j, int dim);

}  // namespace densilab
