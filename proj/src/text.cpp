#include "kdaco/text.hpp"

#include <charconv>
#include <system_error>

#include "kdaco/error.hpp"

namespace kdaco {

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace kdaco
