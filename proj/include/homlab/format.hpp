#pragma once

#include <string>

namespace homlab {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double x);

}  // namespace homlab
