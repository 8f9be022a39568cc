#pragma once

#include <string>

#include "ineqlab/config.hpp"
#include "ineqlab/infconv.hpp"
#include "ineqlab/transport.hpp"
#include "ineqlab/verify.hpp"

namespace ineqlab {

inline constexpr int kReportSchema = 1;

// Finite numbers as JSON numbers; inf, -inf and nan as strings.
Json json_number(double x);
Json json_numbers(const std::vector<double>& xs);

Json to_json(const SearchOptions& o);
Json to_json(const Estimate& e);
Json to_json(const ChainStep& s);
Json to_json(const VerificationReport& r);
Json to_json(const ConstantBundle& b);
Json to_json(const TransportPlan& p);
Json to_json(const LemmaBoundsReport& r);
Json to_json(const DualReport& r);
Json to_json(const DualThreshold& t);
Json to_json(const ConcentrationReport& r);
Json to_json(const HolleyStroockResult& h);

// {"schema": 1, "command", "verdict", "seed", "config", "result"}.
Json envelope(const std::string& command, const Json& config, const Json& result,
              Verdict verdict);

// Flattened "key  value" lines, keys aligned; long arrays summarized.
std::string render_text(const Json& report);

// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace ineqlab
