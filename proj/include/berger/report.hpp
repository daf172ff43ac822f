#pragma once

// JSON and CSV serialization of check reports. Output is deterministic: keys keep
// insertion order and every floating-point number is written with 17 significant digits.

#include "berger/verify.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace berger {

using Json = nlohmann::ordered_json;

/// Like Json::dump(2), but floats as %.17g and non-finite floats as null.
std::string dump_json(const Json& j);

Json to_json(const CheckReport& r);
Json to_json(const std::vector<CheckReport>& reports);

/// Counts of pass/fail/inapplicable.
Json summarize(const std::vector<CheckReport>& reports);

/// check,residual,status,max_abs,integral,tolerance,integral_tolerance; one row per check
/// followed by its sub-residuals.
void write_checks_csv(std::ostream& os, const std::vector<CheckReport>& reports);

/// Writes `content` to `path`; throws std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace berger
