#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsfrac/cpow.hpp"
#include "tsfrac/expr.hpp"
#include "tsfrac/fracderiv.hpp"
#include "tsfrac/timescale.hpp"

namespace tsfrac {

// Closed-form right-hand sides of the calculus rules, usable as fast paths on
// their branch-validity domains and as subjects of residual checks against
// the direct derivative.
enum class rule {
  constant_multiple,
  product,
  reciprocal,
  quotient,
  power,
  sum_counterexample,
  increment,
};

const char* to_string(rule r) noexcept;
std::optional<rule> rule_from_string(std::string_view name);

// (lambda*f)^{da} = lambda^a * f^{da}. Exact on the principal branch for
// lambda > 0 (any f); lambda <= 0 is outside the validity domain.
cvalue constant_multiple_rhs(const expr& f, double lambda, const time_scale& T, double t,
                             double alpha, const deriv_config& cfg = {});

// Both symmetric forms of the product rule; they must agree.
struct product_forms {
  cvalue via_g_at_t;      // f^{da}(t) g^a(t) + f^a(sigma(t)) g^{da}(t)
  cvalue via_g_at_sigma;  // f^{da}(t) g^a(sigma(t)) + f^a(t) g^{da}(t)
};

product_forms product_rhs(const expr& f, const expr& g, const time_scale& T, double t,
                          double alpha, const deriv_config& cfg = {});

// (1/f)^{da} = -f^{da} / (f^a(sigma(t)) f^a(t)); throws zero_at_point when
// f(t) f(sigma(t)) == 0. Matches the direct derivative only when f(t) and
// f(sigma(t)) are both positive.
cvalue reciprocal_rhs(const expr& f, const time_scale& T, double t, double alpha,
                      const deriv_config& cfg = {});

// (f/g)^{da} = (f^{da} g^a(t) - f^a(t) g^{da}) / (g^a(sigma(t)) g^a(t)).
cvalue quotient_rhs(const expr& f, const expr& g, const time_scale& T, double t, double alpha,
                    const deriv_config& cfg = {});

// (t^m)^{da} = sum_{k=0}^{m-1} (t^a)^{m-k-1} (sigma(t)^a)^k, m >= 1.
cvalue power_rule(const time_scale& T, double t, double alpha, int m);

struct rule_point {
  double t = 0.0;
  cvalue lhs;
  cvalue rhs;
  double residual = 0.0;
};

struct rule_report {
  rule checked = rule::product;
  std::vector<rule_point> points;
  double max_residual = 0.0;
  int domain_skips = 0;
};

struct rule_request {
  rule checked = rule::product;
  std::optional<expr> f;
  std::optional<expr> g;
  std::optional<double> lambda;
  std::optional<int> m;
};

// Residuals of a rule over a grid: lhs is the direct derivative of the
// composite function, rhs the rule formula. Points failing a rule's sign or
// nonzero preconditions (or erroring during evaluation) are counted in
// domain_skips rather than reported as errors; an empty grid is an error.
rule_report check_rule(const rule_request& req, const time_scale& T,
                       const std::vector<double>& points, double alpha,
                       const deriv_config& cfg = {});

std::string to_json(const rule_report& report);

}  // namespace tsfrac
