#pragma once

#include <string>

namespace polfid {

/// Shortest decimal string that round-trips to the same double.
std::string format_shortest(double x);

/// 17 significant digits ("%.17g"); the CSV rendering.
std::string format_g17(double x);

}  // namespace polfid
