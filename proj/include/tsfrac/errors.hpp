#pragma once

#include <stdexcept>
#include <string>

namespace tsfrac {

enum class errc {
  point_not_in_scale,
  not_in_kappa,
  no_point_on_side,
  pow_undefined,
  domain_error,
  parse_error,
  degenerate_denominator,
  limit_not_converged,
  side_disagreement,
  higher_order_unavailable,
  zero_at_point,
  empty_point_list,
  invalid_scale,
  invalid_argument,
};

const char* to_string(errc code) noexcept;

// Input errors mean the caller handed us something malformed (bad grammar,
// point outside the scale); everything else is a numeric failure of the
// computation itself. The CLI maps these to exit codes 2 and 3.
bool is_input_error(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace tsfrac
