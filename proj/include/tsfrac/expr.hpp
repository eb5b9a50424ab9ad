#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace tsfrac {

// Real-valued function of the single variable t, parsed from a small
// arithmetic grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' number)?          exponents are numeric constants
//   atom   := number | 't' | '(' expr ')' | '-' atom
// '^' binds tighter than unary minus, so "-t^2" is -(t^2).
//
// Values are immutable and cheap to copy; eval is pure.
class expr {
 public:
  static expr parse(std::string_view src);  // throws parse_error with byte offset

  static expr number(double value);
  static expr variable();
  static expr pow(expr base, double exponent);

  expr operator-() const;
  friend expr operator+(expr a, expr b);
  friend expr operator-(expr a, expr b);
  friend expr operator*(expr a, expr b);
  friend expr operator/(expr a, expr b);

  // Integer constant exponents of negative bases go through repeated
  // multiplication (so (-2)^2 == 4); a non-integer exponent of a negative
  // base, division by zero, or a non-finite result is a domain_error.
  double eval(double t) const;

  std::string str() const;
  bool same_structure(const expr& other) const;

  struct node;  // defined in expr.cpp

 private:
  explicit expr(std::shared_ptr<const node> root) : root_(std::move(root)) {}

  std::shared_ptr<const node> root_;
};

}  // namespace tsfrac
