#include "tsfrac/expr.hpp"

#include <charconv>
#include <cmath>
#include <utility>

#include "tsfrac/errors.hpp"
#include "tsfrac/format.hpp"

namespace tsfrac {

enum class node_kind { number, variable, negate, add, sub, mul, div, pow };

struct expr::node {
  node_kind kind;
  double value = 0.0;  // number payload, or pow exponent
  std::shared_ptr<const node> lhs;
  std::shared_ptr<const node> rhs;
};

namespace {

using node_ptr = std::shared_ptr<const expr::node>;

node_ptr make_node(node_kind kind, double value, node_ptr lhs = nullptr, node_ptr rhs = nullptr) {
  auto n = std::make_shared<expr::node>();
  n->kind = kind;
  n->value = value;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_integer(double v) {
  return v == std::floor(v) && std::abs(v) <= 1e15;
}

double int_pow(double base, long long n) {
  if (n < 0) {
    if (base == 0.0) raise(errc::domain_error, "0 raised to a negative exponent");
    return 1.0 / int_pow(base, -n);
  }
  double acc = 1.0;
  double b = base;
  while (n > 0) {
    if (n & 1) acc *= b;
    n >>= 1;
    if (n > 0) b *= b;
  }
  return acc;
}

double eval_node(const expr::node& n, double t) {
  switch (n.kind) {
    case node_kind::number: return n.value;
    case node_kind::variable: return t;
    case node_kind::negate: return -eval_node(*n.lhs, t);
    case node_kind::add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case node_kind::sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case node_kind::mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case node_kind::div: {
      double num = eval_node(*n.lhs, t);
      double den = eval_node(*n.rhs, t);
      if (den == 0.0) raise(errc::domain_error, "division by zero");
      return num / den;
    }
    case node_kind::pow: {
      double base = eval_node(*n.lhs, t);
      double p = n.value;
      if (is_integer(p)) return int_pow(base, static_cast<long long>(p));
      if (base < 0.0)
        raise(errc::domain_error, "negative base " + format_double(base) +
                                      " under non-integer exponent " + format_double(p));
      if (base == 0.0 && p <= 0.0)
        raise(errc::domain_error, "0 raised to a non-positive exponent");
      return std::pow(base, p);
    }
  }
  raise(errc::domain_error, "corrupt expression node");
}

// Precedence levels for printing: higher binds tighter.
int precedence(node_kind k) {
  switch (k) {
    case node_kind::add:
    case node_kind::sub: return 1;
    case node_kind::negate: return 2;
    case node_kind::mul:
    case node_kind::div: return 3;
    case node_kind::pow: return 4;
    default: return 5;
  }
}

void print_node(const expr::node& n, std::string& out, int parent_prec, bool rhs_of_binary) {
  int prec = precedence(n.kind);
  bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_binary);
  // A negative literal printed bare would re-parse as a negate node.
  if (n.kind == node_kind::number && n.value < 0.0) parens = true;
  if (parens) out += '(';
  switch (n.kind) {
    case node_kind::number: out += format_double(n.value); break;
    case node_kind::variable: out += 't'; break;
    case node_kind::negate:
      // The grammar's unary minus takes an atom (or a power), so anything
      // looser than '^' must be parenthesized to survive a round trip.
      out += '-';
      print_node(*n.lhs, out, precedence(node_kind::pow), false);
      break;
    case node_kind::add:
      print_node(*n.lhs, out, prec, false);
      out += '+';
      print_node(*n.rhs, out, prec, true);
      break;
    case node_kind::sub:
      print_node(*n.lhs, out, prec, false);
      out += '-';
      print_node(*n.rhs, out, prec, true);
      break;
    case node_kind::mul:
      print_node(*n.lhs, out, prec, false);
      out += '*';
      print_node(*n.rhs, out, prec, true);
      break;
    case node_kind::div:
      print_node(*n.lhs, out, prec, false);
      out += '/';
      print_node(*n.rhs, out, prec, true);
      break;
    case node_kind::pow:
      print_node(*n.lhs, out, prec + 1, false);
      out += '^';
      out += format_double(n.value);
      break;
  }
  if (parens) out += ')';
}

bool same_node(const expr::node& a, const expr::node& b) {
  if (a.kind != b.kind) return false;
  if ((a.kind == node_kind::number || a.kind == node_kind::pow) && a.value != b.value)
    return false;
  if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
  if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !same_node(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !same_node(*a.rhs, *b.rhs)) return false;
  return true;
}

class parser {
 public:
  explicit parser(std::string_view src) : src_(src) {}

  node_ptr run() {
    node_ptr root = parse_expr();
    skip_spaces();
    if (pos_ != src_.size()) fail("end of input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) {
    raise(errc::parse_error,
          "expected " + expected + " at offset " + std::to_string(pos_));
  }

  void skip_spaces() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
  }

  bool eat(char c) {
    skip_spaces();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_spaces();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  double parse_number_token(bool allow_sign) {
    skip_spaces();
    std::size_t start = pos_;
    if (allow_sign && pos_ < src_.size() && src_[pos_] == '-') ++pos_;
    double v = 0.0;
    auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (res.ec != std::errc{} || res.ptr == src_.data() + pos_) {
      pos_ = start;
      fail("a number");
    }
    pos_ = static_cast<std::size_t>(res.ptr - src_.data());
    return src_[start] == '-' ? -v : v;
  }

  node_ptr parse_expr() {
    node_ptr lhs = parse_term();
    for (;;) {
      if (eat('+'))
        lhs = make_node(node_kind::add, 0.0, lhs, parse_term());
      else if (eat('-'))
        lhs = make_node(node_kind::sub, 0.0, lhs, parse_term());
      else
        return lhs;
    }
  }

  node_ptr parse_term() {
    node_ptr lhs = parse_factor();
    for (;;) {
      if (eat('*'))
        lhs = make_node(node_kind::mul, 0.0, lhs, parse_factor());
      else if (eat('/'))
        lhs = make_node(node_kind::div, 0.0, lhs, parse_factor());
      else
        return lhs;
    }
  }

  node_ptr parse_factor() {
    node_ptr base = parse_atom();
    if (eat('^')) return make_node(node_kind::pow, parse_number_token(true), base);
    return base;
  }

  node_ptr parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      node_ptr inner = parse_expr();
      if (!eat(')')) fail("')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      // '^' binds tighter than unary minus: -t^2 parses as -(t^2).
      node_ptr operand = parse_atom();
      if (eat('^')) operand = make_node(node_kind::pow, parse_number_token(true), operand);
      return make_node(node_kind::negate, 0.0, operand);
    }
    if (c == 't') {
      ++pos_;
      return make_node(node_kind::variable, 0.0);
    }
    if ((c >= '0' && c <= '9') || c == '.')
      return make_node(node_kind::number, parse_number_token(false));
    fail("a number, 't', '(' or '-'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

expr expr::parse(std::string_view src) { return expr(parser(src).run()); }

expr expr::number(double value) { return expr(make_node(node_kind::number, value)); }

expr expr::variable() { return expr(make_node(node_kind::variable, 0.0)); }

expr expr::pow(expr base, double exponent) {
  return expr(make_node(node_kind::pow, exponent, base.root_));
}

expr expr::operator-() const { return expr(make_node(node_kind::negate, 0.0, root_)); }

expr operator+(expr a, expr b) {
  return expr(make_node(node_kind::add, 0.0, a.root_, b.root_));
}

expr operator-(expr a, expr b) {
  return expr(make_node(node_kind::sub, 0.0, a.root_, b.root_));
}

expr operator*(expr a, expr b) {
  return expr(make_node(node_kind::mul, 0.0, a.root_, b.root_));
}

expr operator/(expr a, expr b) {
  return expr(make_node(node_kind::div, 0.0, a.root_, b.root_));
}

double expr::eval(double t) const {
  double v = eval_node(*root_, t);
  if (!std::isfinite(v)) raise(errc::domain_error, "expression evaluated to a non-finite value");
  return v;
}

std::string expr::str() const {
  std::string out;
  print_node(*root_, out, 0, false);
  return out;
}

bool expr::same_structure(const expr& other) const { return same_node(*root_, *other.root_); }

}  // namespace tsfrac
