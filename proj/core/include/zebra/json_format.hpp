#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace zebra {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal string that parses back to exactly `value`.
// Integral values keep a trailing ".0" so readers see a float.
// Throws ValidationError for NaN and infinities (not representable in JSON).
std::string format_double(double value);

// Compact single-line serialization with insertion-ordered keys and
// shortest round-trip floats. Output is byte-stable for equal inputs.
std::string dump_canonical(const ordered_json& value);

// Same, with two-space indentation for human-facing report files.
std::string dump_pretty(const ordered_json& value);

}  // namespace zebra
