#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scalebench::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);

/// Splits on `sep` and trims each piece. Empty input yields one empty piece.
std::vector<std::string> split_trimmed(std::string_view s, char sep);

/// Locale-independent strict parse of a whole string as a double.
bool parse_double(std::string_view s, double& out);

/// Fixed notation with `decimals` digits, locale-independent.
std::string fixed(double value, int decimals);

/// Shortest text that parses back to exactly `value`.
std::string shortest(double value);

}  // namespace scalebench::text
