#include "polfid/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace polfid {

std::string format_shortest(double x) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return {buf.data(), result.ptr};
}

std::string format_g17(double x) {
  std::array<char, 64> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return {buf.data(), static_cast<std::size_t>(len)};
}

}  // namespace polfid
