#pragma once

#include <string>
#include <string_view>

namespace kdaco {

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

// Strict: the whole of `text` must be a number. Throws ParseError.
double parse_real(std::string_view text);

}  // namespace kdaco
