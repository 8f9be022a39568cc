#pragma once

#include <string>

#include "ineqlab/estimators.hpp"
#include "ineqlab/metric_space.hpp"
#include "ineqlab/young.hpp"
#include "json.hpp"

namespace ineqlab {

using Json = nlohmann::json;

// Parses JSON text; errors carry the line and column.
Json parse_json(const std::string& text, const std::string& origin);
Json load_json_file(const std::string& path);

// {"labels": [...], "dist": [[...]]} or
// {"generator": "path" | "cycle" | "grid1d", "count": n, "spacing": h, "origin": x0}
// with an optional "neighbors": [[...]] adjacency.  A string is a file path.
FiniteMetricSpace load_space(const Json& spec);

// "uniform", "dirac:i", "weights:w0,w1,...", "density:<expr>", or the objects
// {"weights": [...]}, {"density": "<expr>"}.  Density variables: x (coordinate,
// or index when the space has none), i, n.  Weights must sum to 1 within 1e-12.
ProbMeasure load_measure(const Json& spec, const FiniteMetricSpace& space);

// "power:p1,p2", "quadratic", "table:<path>".
YoungFunction parse_alpha(const std::string& spec);

// Comma separated numbers.
std::vector<double> parse_list(const std::string& text, const std::string& field);

// Search budgets from starts, iterations, fd_step, clamp, f_box, dense, seed.
SearchOptions search_options(const Json& cfg);

}  // namespace ineqlab
