#include "tsfrac/rules.hpp"

#include <cmath>

#include <json.hpp>

#include "tsfrac/errors.hpp"
#include "tsfrac/format.hpp"

namespace tsfrac {

const char* to_string(rule r) noexcept {
  switch (r) {
    case rule::constant_multiple: return "constant-multiple";
    case rule::product: return "product";
    case rule::reciprocal: return "reciprocal";
    case rule::quotient: return "quotient";
    case rule::power: return "power";
    case rule::sum_counterexample: return "sum-counterexample";
    case rule::increment: return "increment";
  }
  return "?";
}

std::optional<rule> rule_from_string(std::string_view name) {
  for (rule r : {rule::constant_multiple, rule::product, rule::reciprocal, rule::quotient,
                 rule::power, rule::sum_counterexample, rule::increment})
    if (name == to_string(r)) return r;
  return std::nullopt;
}

cvalue constant_multiple_rhs(const expr& f, double lambda, const time_scale& T, double t,
                             double alpha, const deriv_config& cfg) {
  if (!(lambda > 0.0))
    raise(errc::invalid_argument, "constant-multiple rule needs lambda > 0");
  return cpow(lambda, alpha) * deriv(f, T, t, alpha, cfg).value;
}

product_forms product_rhs(const expr& f, const expr& g, const time_scale& T, double t,
                          double alpha, const deriv_config& cfg) {
  double ts = T.snap(t);
  double sig = T.sigma(ts);
  cvalue df = deriv(f, T, ts, alpha, cfg).value;
  cvalue dg = deriv(g, T, ts, alpha, cfg).value;
  product_forms out;
  out.via_g_at_t = df * alpha_lift(g, ts, alpha) + alpha_lift(f, sig, alpha) * dg;
  out.via_g_at_sigma = df * alpha_lift(g, sig, alpha) + alpha_lift(f, ts, alpha) * dg;
  return out;
}

cvalue reciprocal_rhs(const expr& f, const time_scale& T, double t, double alpha,
                      const deriv_config& cfg) {
  double ts = T.snap(t);
  double sig = T.sigma(ts);
  if (f.eval(ts) * f.eval(sig) == 0.0)
    raise(errc::zero_at_point, "f vanishes at t or sigma(t)");
  cvalue df = deriv(f, T, ts, alpha, cfg).value;
  return -df / (alpha_lift(f, sig, alpha) * alpha_lift(f, ts, alpha));
}

cvalue quotient_rhs(const expr& f, const expr& g, const time_scale& T, double t, double alpha,
                    const deriv_config& cfg) {
  double ts = T.snap(t);
  double sig = T.sigma(ts);
  if (g.eval(ts) * g.eval(sig) == 0.0)
    raise(errc::zero_at_point, "g vanishes at t or sigma(t)");
  cvalue df = deriv(f, T, ts, alpha, cfg).value;
  cvalue dg = deriv(g, T, ts, alpha, cfg).value;
  return (df * alpha_lift(g, ts, alpha) - alpha_lift(f, ts, alpha) * dg) /
         (alpha_lift(g, sig, alpha) * alpha_lift(g, ts, alpha));
}

cvalue power_rule(const time_scale& T, double t, double alpha, int m) {
  if (m < 1) raise(errc::invalid_argument, "power rule needs m >= 1");
  double ts = T.snap(t);
  if (!T.in_kappa(ts))
    raise(errc::not_in_kappa, format_double(ts) + " is a left-scattered maximum");
  cvalue ta = cpow(ts, alpha);
  cvalue sa = cpow(T.sigma(ts), alpha);
  cvalue sum{0.0, 0.0};
  for (int k = 0; k < m; ++k) sum += ipow(ta, m - k - 1) * ipow(sa, k);
  return sum;
}

namespace {

const expr& required(const std::optional<expr>& e, const char* flag) {
  if (!e) raise(errc::invalid_argument, std::string("rule needs ") + flag);
  return *e;
}

// Branch-validity domain of a rule at the pair (t, sigma(t)); false => skip.
bool in_rule_domain(const rule_request& req, const time_scale& T, double ts, double alpha) {
  (void)alpha;
  double sig = T.sigma(ts);
  switch (req.checked) {
    case rule::constant_multiple:
      return req.lambda && *req.lambda > 0.0;
    case rule::product: {
      double f_t = required(req.f, "--f").eval(ts), f_s = required(req.f, "--f").eval(sig);
      double g_t = required(req.g, "--g").eval(ts), g_s = required(req.g, "--g").eval(sig);
      // (fg)^a = f^a g^a fails on the principal branch only when both
      // factors are strictly negative.
      return !(f_t < 0.0 && g_t < 0.0) && !(f_s < 0.0 && g_s < 0.0);
    }
    case rule::reciprocal: {
      double f_t = required(req.f, "--f").eval(ts), f_s = required(req.f, "--f").eval(sig);
      return f_t > 0.0 && f_s > 0.0;
    }
    case rule::quotient: {
      double g_t = required(req.g, "--g").eval(ts), g_s = required(req.g, "--g").eval(sig);
      return g_t > 0.0 && g_s > 0.0;
    }
    case rule::power:
      return ts > 0.0 && sig > 0.0;
    case rule::sum_counterexample:
    case rule::increment:
      return true;
  }
  return false;
}

rule_point evaluate_point(const rule_request& req, const time_scale& T, double ts, double alpha,
                          const deriv_config& cfg) {
  rule_point pt;
  pt.t = ts;
  switch (req.checked) {
    case rule::constant_multiple: {
      const expr& f = required(req.f, "--f");
      pt.lhs = deriv(expr::number(*req.lambda) * f, T, ts, alpha, cfg).value;
      pt.rhs = constant_multiple_rhs(f, *req.lambda, T, ts, alpha, cfg);
      break;
    }
    case rule::product: {
      const expr& f = required(req.f, "--f");
      const expr& g = required(req.g, "--g");
      pt.lhs = deriv(f * g, T, ts, alpha, cfg).value;
      pt.rhs = product_rhs(f, g, T, ts, alpha, cfg).via_g_at_t;
      break;
    }
    case rule::reciprocal: {
      const expr& f = required(req.f, "--f");
      pt.lhs = deriv(expr::number(1.0) / f, T, ts, alpha, cfg).value;
      pt.rhs = reciprocal_rhs(f, T, ts, alpha, cfg);
      break;
    }
    case rule::quotient: {
      const expr& f = required(req.f, "--f");
      const expr& g = required(req.g, "--g");
      pt.lhs = deriv(f / g, T, ts, alpha, cfg).value;
      pt.rhs = quotient_rhs(f, g, T, ts, alpha, cfg);
      break;
    }
    case rule::power: {
      if (!req.m) raise(errc::invalid_argument, "power rule needs --m");
      pt.lhs = deriv(expr::pow(expr::variable(), *req.m), T, ts, alpha, cfg).value;
      pt.rhs = power_rule(T, ts, alpha, *req.m);
      break;
    }
    case rule::sum_counterexample: {
      const expr& f = required(req.f, "--f");
      const expr& g = required(req.g, "--g");
      pt.lhs = deriv(f + g, T, ts, alpha, cfg).value;
      pt.rhs = deriv(f, T, ts, alpha, cfg).value + deriv(g, T, ts, alpha, cfg).value;
      break;
    }
    case rule::increment: {
      const expr& f = required(req.f, "--f");
      double sig = T.sigma(ts);
      pt.lhs = alpha_lift(f, sig, alpha);
      pt.rhs = alpha_lift(f, ts, alpha) +
               cpow_diff(sig, ts, alpha) * deriv(f, T, ts, alpha, cfg).value;
      break;
    }
  }
  pt.residual = std::abs(pt.lhs - pt.rhs);
  return pt;
}

}  // namespace

rule_report check_rule(const rule_request& req, const time_scale& T,
                       const std::vector<double>& points, double alpha,
                       const deriv_config& cfg) {
  if (points.empty()) raise(errc::empty_point_list, "rule check needs at least one point");

  rule_report report;
  report.checked = req.checked;
  for (double t : points) {
    double ts = T.snap(t);
    if (!T.in_kappa(ts))
      raise(errc::not_in_kappa, format_double(ts) + " is a left-scattered maximum of " + T.str());
    if (!in_rule_domain(req, T, ts, alpha)) {
      ++report.domain_skips;
      continue;
    }
    try {
      report.points.push_back(evaluate_point(req, T, ts, alpha, cfg));
    } catch (const error& e) {
      if (e.code() == errc::point_not_in_scale || e.code() == errc::not_in_kappa ||
          e.code() == errc::empty_point_list || e.code() == errc::invalid_argument)
        throw;
      ++report.domain_skips;  // evaluation failed inside the rule's domain guard
      continue;
    }
    report.max_residual = std::max(report.max_residual, report.points.back().residual);
  }
  return report;
}

std::string to_json(const rule_report& report) {
  nlohmann::ordered_json j;
  j["rule"] = to_string(report.checked);
  j["points"] = nlohmann::ordered_json::array();
  for (const rule_point& p : report.points) {
    nlohmann::ordered_json pj;
    pj["t"] = p.t;
    pj["lhs"] = {{"re", p.lhs.real()}, {"im", p.lhs.imag()}};
    pj["rhs"] = {{"re", p.rhs.real()}, {"im", p.rhs.imag()}};
    pj["residual"] = p.residual;
    j["points"].push_back(std::move(pj));
  }
  j["max_residual"] = report.max_residual;
  j["domain_skips"] = report.domain_skips;
  return j.dump();
}

}  // namespace tsfrac
