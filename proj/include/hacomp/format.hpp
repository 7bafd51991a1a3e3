#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace hacomp {

// Shortest decimal that parses back to the same double.
std::string format_shortest(double v);

// Rounds to `digits` significant digits (the value a "%.{digits}g" print
// would show) and returns it as a double.
double round_significant(double v, int digits = 6);

// "%.{digits}g" with "-0" normalised to "0".
std::string format_significant(double v, int digits = 6);

// Strict plain decimal: optional sign, digits, optional fraction and exponent,
// surrounding blanks allowed. No thousands separators, no hex, no inf/nan words.
std::optional<double> parse_plain_number(std::string_view text);

// RFC 4180 quoting when the field needs it.
std::string csv_field(std::string_view s);

}  // namespace hacomp
