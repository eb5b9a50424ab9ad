#include "tsfrac/format.hpp"

#include <charconv>

namespace tsfrac {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0.0
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace tsfrac
