#pragma once

// Minimal comma-separated reading/writing shared by the table formats.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kinex::csv {

/// Header comment written as the first line of every emitted table.
inline constexpr std::string_view kSchemaLine = "# kinex-schema v1";

/// Splits one line into fields. Double-quoted fields may contain commas and
/// "" escapes. Unquoted fields are trimmed of surrounding whitespace.
/// Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_line(std::string_view line);

/// Quotes a field if it contains a comma, quote or leading/trailing space.
std::string quote(std::string_view field);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Strict full-field parse of a finite double.
std::optional<double> parse_double(std::string_view s);

}  // namespace kinex::csv
