#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsfrac/errors.hpp"
#include "tsfrac/format.hpp"
#include "tsfrac/fracderiv.hpp"
#include "tsfrac/rules.hpp"
#include "tsfrac/timescale.hpp"

namespace {

using namespace tsfrac;
using ordered_json = nlohmann::ordered_json;

struct common_options {
  std::string scale_spec;
  std::string f_src;
  double alpha = 0.5;
  std::optional<double> tol;
  std::optional<double> h0;
  std::optional<int> max_halvings;
  std::optional<double> agreement_tol;
  bool order_n = false;
};

void add_config_flags(CLI::App* cmd, common_options& opt) {
  cmd->add_option("--tol", opt.tol, "limit convergence tolerance (default 1e-8)");
  cmd->add_option("--h0", opt.h0, "initial probe step (default 1e-2*max(1,|t|))");
  cmd->add_option("--max-halvings", opt.max_halvings, "probe cap per side (default 40)");
  cmd->add_option("--agreement-tol", opt.agreement_tol,
                  "cross-side agreement tolerance (default 1e-6)");
  cmd->add_flag("--order-n", opt.order_n,
                "enable the higher-order composition path (required for alpha > 1)");
}

deriv_config make_config(const common_options& opt) {
  deriv_config cfg;
  if (opt.tol) cfg.tol = *opt.tol;
  if (opt.h0) cfg.h0 = *opt.h0;
  if (opt.max_halvings) cfg.max_halvings = *opt.max_halvings;
  if (opt.agreement_tol) cfg.agreement_tol = *opt.agreement_tol;
  return cfg;
}

deriv_result run_deriv(const expr& f, const time_scale& T, double t, const common_options& opt,
                       const deriv_config& cfg) {
  if (opt.order_n) return deriv_higher(f, T, t, opt.alpha, cfg);
  if (opt.alpha > 1.0)
    raise(errc::invalid_argument, "alpha > 1 needs --order-n");
  return deriv(f, T, t, opt.alpha, cfg);
}

double drop_negative_zero(double v) { return v == 0.0 ? 0.0 : v; }

ordered_json record_json(const time_scale& T, double ts, double alpha, const deriv_result* res,
                         const char* error_code) {
  ordered_json j;
  j["t"] = ts;
  j["sigma_t"] = T.sigma(ts);
  j["mu_t"] = T.graininess(ts);
  std::string cls = to_string(T.classify(ts));
  if (error_code) cls += std::string(";error=") + error_code;
  j["classification"] = cls;
  j["alpha"] = alpha;
  if (res) {
    j["value_re"] = drop_negative_zero(res->value.real());
    j["value_im"] = drop_negative_zero(res->value.imag());
    j["method"] = to_string(res->method);
    if (res->method == deriv_method::quotient_formula)
      j["residual"] = nullptr;
    else
      j["residual"] = res->diagnostics.last_residual;
  } else {
    j["value_re"] = nullptr;
    j["value_im"] = nullptr;
    j["method"] = nullptr;
    j["residual"] = nullptr;
  }
  return j;
}

std::string csv_row(const time_scale& T, double ts, double alpha, const deriv_result* res,
                    const char* error_code) {
  std::string cls = to_string(T.classify(ts));
  if (error_code) cls += std::string(";error=") + error_code;
  std::string row = format_double(ts) + "," + format_double(T.sigma(ts)) + "," +
                    format_double(T.graininess(ts)) + "," + cls + "," + format_double(alpha) + ",";
  if (res) {
    row += format_double(res->value.real()) + "," + format_double(res->value.imag()) + "," +
           to_string(res->method);
  } else {
    row += ",,";
  }
  return row;
}

// Evaluation grid for `table` and `check --from/--to`: discrete scales
// enumerate their members, continuum pieces are sampled with --step (interval
// endpoints always included).
std::vector<double> enumerate_grid(const time_scale& T, double from, double to,
                                   std::optional<double> step) {
  if (!(from <= to)) raise(errc::invalid_argument, "empty range: --from exceeds --to");
  if (step && !(*step > 0.0)) raise(errc::invalid_argument, "--step must be positive");
  double eps = 1e-9 * std::max(1.0, std::abs(to));

  auto stepped = [&](double lo, double hi, std::vector<double>& out) {
    if (lo > hi) return;
    if (lo == hi) {
      out.push_back(lo);
      return;
    }
    if (!step)
      raise(errc::invalid_argument, "--step is required for continuum scales");
    double last = lo;
    for (int i = 0;; ++i) {
      double t = lo + i * *step;
      if (t > hi + eps) break;
      t = std::min(t, hi);
      out.push_back(t);
      last = t;
    }
    if (last < hi - eps) out.push_back(hi);
  };

  std::vector<double> out;
  struct visitor {
    double from, to, eps;
    std::optional<double> step;
    std::vector<double>& out;
    decltype(stepped)& sample;

    void operator()(const reals_scale&) const { sample(from, to, out); }
    void operator()(const integers_scale&) const { lattice(1.0, 0.0); }
    void operator()(const hstep_scale& s) const { lattice(s.h, s.offset); }
    void lattice(double h, double offset) const {
      long long k0 = static_cast<long long>(std::ceil((from - offset) / h - 1e-9));
      long long k1 = static_cast<long long>(std::floor((to - offset) / h + 1e-9));
      for (long long k = k0; k <= k1; ++k) out.push_back(offset + static_cast<double>(k) * h);
    }
    void operator()(const qscale& s) const {
      if (!(from > 0.0))
        raise(errc::invalid_argument,
              "qZ grids need --from > 0 (members accumulate at 0; use `deriv --t 0` there)");
      double lq = std::log(s.q);
      long long k0 = static_cast<long long>(std::ceil(std::log(from) / lq - 1e-9));
      long long k1 = static_cast<long long>(std::floor(std::log(to) / lq + 1e-9));
      for (long long k = k0; k <= k1; ++k) out.push_back(std::pow(s.q, static_cast<double>(k)));
    }
    void operator()(const finite_set_scale& s) const {
      for (double p : s.points)
        if (p >= from - eps && p <= to + eps) out.push_back(p);
    }
    void operator()(const interval_union_scale& s) const {
      for (const auto& p : s.parts) {
        double lo = std::max(p.lo, from);
        double hi = std::min(p.hi, to);
        if (lo > hi + eps) continue;
        sample(lo, std::max(lo, hi), out);
      }
    }
  };
  std::visit(visitor{from, to, eps, step, out, stepped}, T.rep());
  if (out.empty()) raise(errc::invalid_argument, "empty range: no points of the scale inside");
  return out;
}

int cmd_deriv(const common_options& opt, double t) {
  time_scale T = time_scale::parse(opt.scale_spec);
  expr f = expr::parse(opt.f_src);
  deriv_config cfg = make_config(opt);
  double ts = T.snap(t);
  deriv_result res = run_deriv(f, T, ts, opt, cfg);
  std::cout << record_json(T, ts, opt.alpha, &res, nullptr).dump() << "\n";
  return 0;
}

int cmd_table(const common_options& opt, double from, double to, std::optional<double> step,
              const std::string& format) {
  time_scale T = time_scale::parse(opt.scale_spec);
  expr f = expr::parse(opt.f_src);
  deriv_config cfg = make_config(opt);

  std::vector<double> grid = enumerate_grid(T, from, to, step);
  int successes = 0;
  errc last_failure = errc::invalid_argument;
  ordered_json rows = ordered_json::array();
  std::string csv = "t,sigma,mu,class,alpha,re,im,method\n";

  for (double t : grid) {
    double ts = T.snap(t);
    try {
      deriv_result res = run_deriv(f, T, ts, opt, cfg);
      rows.push_back(record_json(T, ts, opt.alpha, &res, nullptr));
      csv += csv_row(T, ts, opt.alpha, &res, nullptr) + "\n";
      ++successes;
    } catch (const error& e) {
      rows.push_back(record_json(T, ts, opt.alpha, nullptr, to_string(e.code())));
      csv += csv_row(T, ts, opt.alpha, nullptr, to_string(e.code())) + "\n";
      last_failure = e.code();
    }
  }

  if (format == "json")
    std::cout << rows.dump() << "\n";
  else
    std::cout << csv;
  if (successes > 0) return 0;
  return is_input_error(last_failure) ? 2 : 3;
}

int cmd_check(const common_options& opt, const std::string& rule_name,
              const std::optional<std::string>& g_src, std::optional<double> lambda,
              std::optional<int> m, const std::optional<std::string>& points_csv,
              std::optional<double> from, std::optional<double> to, std::optional<double> step,
              double pass_tol) {
  auto r = rule_from_string(rule_name);
  if (!r) raise(errc::invalid_argument, "unknown rule '" + rule_name + "'");

  time_scale T = time_scale::parse(opt.scale_spec);
  rule_request req;
  req.checked = *r;
  if (!opt.f_src.empty()) req.f = expr::parse(opt.f_src);
  if (g_src) req.g = expr::parse(*g_src);
  req.lambda = lambda;
  req.m = m;

  std::vector<double> points;
  if (points_csv) {
    std::size_t start = 0;
    const std::string& s = *points_csv;
    while (start <= s.size()) {
      std::size_t comma = s.find(',', start);
      std::string item = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start);
      try {
        points.push_back(std::stod(item));
      } catch (const std::exception&) {
        raise(errc::invalid_argument, "bad --points entry '" + item + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else if (from && to) {
    points = enumerate_grid(T, *from, *to, step);
  } else {
    raise(errc::invalid_argument, "check needs --points or --from/--to");
  }

  rule_report report = check_rule(req, T, points, opt.alpha, make_config(opt));
  std::cout << to_json(report) << "\n";

  if (req.checked == rule::sum_counterexample) {
    // The failure of additivity is the expected outcome here.
    if (report.points.empty()) return 3;
    for (const rule_point& p : report.points)
      if (!(p.residual > 0.5)) return 3;
    return 0;
  }
  return report.max_residual <= pass_tol ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional delta derivatives on time scales"};
  app.require_subcommand(1);

  common_options opt;
  double t = 0.0;
  double from = 0.0, to = 0.0;
  std::optional<double> step;
  std::string format = "csv";
  std::string rule_name;
  std::optional<std::string> g_src;
  std::optional<double> lambda;
  std::optional<int> m;
  std::optional<std::string> points_csv;
  std::optional<double> check_from, check_to;
  double pass_tol = 1e-8;

  CLI::App* deriv_cmd = app.add_subcommand("deriv", "derivative at a single point (JSON)");
  deriv_cmd->add_option("--scale", opt.scale_spec, "time scale spec, e.g. Z, R, hZ:0.5, [0,1]u{2}")
      ->required();
  deriv_cmd->add_option("--f", opt.f_src, "function of t, e.g. \"t^2\"")->required();
  deriv_cmd->add_option("--alpha", opt.alpha, "derivative order")->required();
  deriv_cmd->add_option("--t", t, "evaluation point")->required();
  add_config_flags(deriv_cmd, opt);

  CLI::App* table_cmd = app.add_subcommand("table", "derivative over a grid (CSV or JSON)");
  table_cmd->add_option("--scale", opt.scale_spec)->required();
  table_cmd->add_option("--f", opt.f_src)->required();
  table_cmd->add_option("--alpha", opt.alpha)->required();
  table_cmd->add_option("--from", from)->required();
  table_cmd->add_option("--to", to)->required();
  table_cmd->add_option("--step", step, "grid step (continuum scales only)");
  table_cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  add_config_flags(table_cmd, opt);

  CLI::App* check_cmd = app.add_subcommand("check", "residuals of a calculus rule (JSON)");
  check_cmd
      ->add_option("--rule", rule_name,
                   "constant-multiple|product|reciprocal|quotient|power|sum-counterexample|"
                   "increment")
      ->required();
  check_cmd->add_option("--scale", opt.scale_spec)->required();
  check_cmd->add_option("--f", opt.f_src);
  check_cmd->add_option("--g", g_src);
  check_cmd->add_option("--lambda", lambda);
  check_cmd->add_option("--m", m);
  check_cmd->add_option("--alpha", opt.alpha)->required();
  check_cmd->add_option("--points", points_csv, "comma-separated evaluation points");
  check_cmd->add_option("--from", check_from);
  check_cmd->add_option("--to", check_to);
  check_cmd->add_option("--step", step);
  check_cmd->add_option("--pass-tol", pass_tol, "max residual for exit 0 (default 1e-8)");
  add_config_flags(check_cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (deriv_cmd->parsed()) return cmd_deriv(opt, t);
    if (table_cmd->parsed()) return cmd_table(opt, from, to, step, format);
    return cmd_check(opt, rule_name, g_src, lambda, m, points_csv, check_from, check_to, step,
                     pass_tol);
  } catch (const tsfrac::error& e) {
    std::cerr << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}
