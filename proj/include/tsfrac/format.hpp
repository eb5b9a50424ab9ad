#pragma once

#include <string>

namespace tsfrac {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace tsfrac
