#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace floodml::csv {

/// Splits one CSV line on commas. Double-quoted fields may contain commas and
/// "" escapes. A trailing '\r' (CRLF input) is stripped first.
std::vector<std::string> split_line(std::string_view line);

/// Reads the next line, stripping a trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

std::string_view trim(std::string_view s);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);

/// Strict integer parse of the whole (trimmed) token.
std::optional<long long> parse_int(std::string_view token);

/// Strict floating-point parse of the whole (trimmed) token.
std::optional<double> parse_double(std::string_view token);

} // namespace floodml::csv
