// Report serialization. Reports are nlohmann::ordered_json trees (insertion
// order is the key order) written with every floating-point number at 17
// significant digits.

#pragma once

#include <string>

#include <json.hpp>

namespace weakval::cli {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv };

std::string format_double(double x);

/// Pretty JSON with %.17g numbers; non-finite numbers become null.
std::string dump_json(const Json& j);

/// One "path,value" row per leaf, keyed by JSON pointer.
std::string dump_csv(const Json& j);

std::string render(const Json& j, Format f);

}  // namespace weakval::cli
