// Acceptance suite: one pass/fail line per criterion, exit 0 only if all pass.
// Usage: acceptance <path-to-cli>

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsfrac/errors.hpp"
#include "tsfrac/fracderiv.hpp"
#include "tsfrac/rules.hpp"
#include "tsfrac/timescale.hpp"

using namespace tsfrac;
using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_cli;

struct criterion {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

void report(int number, const std::string& title, const criterion& c) {
  if (c.ok) {
    std::printf("[PASS] criterion %2d: %s%s\n", number, title.c_str(),
                c.note.empty() ? "" : (" -- " + c.note).c_str());
  } else {
    ++g_failures;
    std::printf("[FAIL] criterion %2d: %s -- %s\n", number, title.c_str(), c.note.c_str());
  }
}

bool close(cvalue a, cvalue b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

double poly_eval(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}

struct scattered_config {
  time_scale T;
  double t;
};

scattered_config random_scattered(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  switch (static_cast<int>(uni(rng) * 5.0) % 5) {
    case 0: {
      double t = std::floor(uni(rng) * 41.0) - 20.0;
      return {time_scale::integers(), t};
    }
    case 1: {
      double h = std::pow(10.0, -2.0 + 2.7 * uni(rng));
      double offset = 6.0 * uni(rng) - 3.0;
      double t = offset + h * (std::floor(uni(rng) * 31.0) - 15.0);
      time_scale T = time_scale::h_step(h, offset);
      return {T, T.snap(t)};
    }
    case 2: {
      double q = 1.2 + 1.8 * uni(rng);
      time_scale T = time_scale::q_scale(q);
      double t = std::pow(q, std::floor(uni(rng) * 11.0) - 5.0);
      return {T, T.snap(t)};
    }
    case 3: {
      int n = 3 + static_cast<int>(uni(rng) * 6.0);
      std::vector<double> pts;
      double x = -10.0 + 5.0 * uni(rng);
      for (int i = 0; i < n; ++i) {
        pts.push_back(x);
        x += 0.05 + 3.0 * uni(rng);
      }
      time_scale T = time_scale::finite_set(pts);
      std::size_t idx = static_cast<std::size_t>(uni(rng) * (n - 1)) % (n - 1);
      return {T, pts[idx]};
    }
    default: {
      double a = -5.0 * uni(rng);
      double b = a + 0.5 + 2.5 * uni(rng);
      double c = b + 0.5 + 2.5 * uni(rng);
      time_scale T = time_scale::interval_union({{a, b}, {c, c}});
      return {T, b};  // right-scattered, left-dense edge
    }
  }
}

expr positive_poly_expr(std::mt19937& rng) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> shift(0.1, 2.0);
  std::uniform_int_distribution<int> deg(0, 2);
  expr p = expr::number(coef(rng));
  int d = deg(rng);
  for (int i = 0; i < d; ++i) p = p * expr::variable() + expr::number(coef(rng));
  return expr::pow(p, 2.0) + expr::number(shift(rng));
}

// --- criteria -------------------------------------------------------------

criterion golden_suite() {
  criterion c;
  const expr t_expr = expr::variable();
  const expr t2 = expr::pow(expr::variable(), 2.0);
  const time_scale Z = time_scale::integers();
  const time_scale R = time_scale::reals();

  for (double lambda : {7.0, -4.0, 0.5}) {
    expr f = expr::number(lambda);
    c.require(std::abs(deriv(f, Z, 3.0, 0.5).value) <= 1e-12, "constant on Z");
    c.require(std::abs(deriv(f, R, 1.5, 0.5).value) <= 1e-12, "constant on R");
    c.require(std::abs(deriv(f, time_scale::h_step(0.5), 2.0, 0.5).value) <= 1e-12,
              "constant on hZ");
    c.require(std::abs(deriv(f, time_scale::finite_set({0, 1, 4}), 1.0, 0.5).value) <= 1e-12,
              "constant on a finite set");
  }

  for (double t : {-2.0, 0.0, 5.0})
    c.require(close(deriv(t_expr, Z, t, 0.5).value, {1.0, 0.0}, 1e-12), "identity on Z");
  c.require(close(deriv(t_expr, time_scale::h_step(0.5, 0.25), 1.25, 0.5).value, {1.0, 0.0},
                  1e-12),
            "identity on hZ");
  for (double t : {0.0, 1.0})
    c.require(close(deriv(t_expr, time_scale::finite_set({0, 1, 4}), t, 0.5).value, {1.0, 0.0},
                    1e-12),
              "identity on a finite set");
  for (double t : {1.0, 4.0, 9.0})
    c.require(close(deriv(t_expr, R, t, 0.5).value, {1.0, 0.0}, 1e-6), "identity on R (dense)");
  c.require(close(deriv(t_expr, time_scale::interval_union({{0, 1}}), 1.0, 0.5).value,
                  {1.0, 0.0}, 1e-6),
            "identity at a left-dense maximum");

  expr inv = expr::parse("1/t");
  for (double t : {1.0, 2.0, 3.0, -3.0, -2.0}) {
    double prod = t * (t + 1.0);
    cvalue expected(-1.0 / std::pow(prod, 0.5), 0.0);
    c.require(close(deriv(inv, Z, t, 0.5).value, expected,
                    1e-12),
              "1/t on Z at t=" + std::to_string(t));
  }

  for (double t : {1.0, 2.0, 5.0}) {
    cvalue expected(std::pow(t + 1.0, 0.5) + std::pow(t, 0.5), 0.0);
    c.require(close(deriv(t2, Z, t, 0.5).value, expected, 1e-12), "t^2 on Z");
  }
  c.require(close(deriv(t2, R, 4.0, 0.5).value, {4.0, 0.0}, 1e-6), "t^2 on R (dense)");

  cvalue ex7 = deriv(expr::parse("(t-3)^2"), time_scale::h_step(1.0), 2.0, 0.5).value;
  c.require(close(ex7, {-(std::sqrt(3.0) + std::sqrt(2.0)), 0.0}, 1e-12), "hZ golden value");

  c.require(close(power_rule(Z, 2.0, 0.5, 3), {5.0 + std::sqrt(6.0), 0.0}, 1e-12),
            "m=3 power value");
  return c;
}

criterion complex_value_check() {
  criterion c;
  cvalue v = deriv(expr::pow(expr::variable(), 2.0), time_scale::integers(), -1.0, 0.5).value;
  c.require(std::abs(v.real()) <= 1e-12, "value should be purely imaginary");
  c.require(std::abs(std::abs(v) - 1.0) <= 1e-12, "modulus should be 1");
  c.require(std::abs(v - cvalue(0.0, -1.0)) <= 1e-12, "definition quotient gives -i");
  cvalue closed = cpow(0.0, 0.5) + cpow(-1.0, 0.5);
  c.require(std::abs(closed - cvalue(0.0, 1.0)) <= 1e-12, "closed form gives +i");
  c.note = "definition yields -i; real-power closed form sigma^a+t^a yields +i (branch artifact, gap " +
           std::to_string(std::abs(v - closed)) + ")";
  return c;
}

criterion increment_identity() {
  criterion c;
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);

  for (int i = 0; i < 500 && c.ok; ++i) {
    scattered_config sc = random_scattered(rng);
    std::vector<double> coeffs(1 + static_cast<std::size_t>(uni(rng) * 4.0));
    for (double& cf : coeffs) cf = coef(rng);
    real_fn f = [coeffs](double t) { return poly_eval(coeffs, t); };
    double alpha = 0.05 + 0.95 * uni(rng);

    cvalue value = deriv(f, sc.T, sc.t, alpha).value;
    double sig = sc.T.sigma(sc.t);
    cvalue fa_sig = alpha_lift(f, sig, alpha);
    cvalue fa_t = alpha_lift(f, sc.t, alpha);
    cvalue step = cpow_diff(sig, sc.t, alpha);
    cvalue rhs = fa_t + step * value;
    double norm = std::max({1.0, std::abs(fa_sig), std::abs(fa_t), std::abs(step * value)});
    c.require(std::abs(fa_sig - rhs) <= 1e-12 * norm,
              "config " + std::to_string(i) + " on " + sc.T.str());
  }
  return c;
}

criterion rule_properties() {
  criterion c;
  std::mt19937 rng(211);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int skips = 0;

  for (rule r : {rule::product, rule::reciprocal, rule::quotient, rule::constant_multiple}) {
    for (int i = 0; i < 200 && c.ok; ++i) {
      scattered_config sc = random_scattered(rng);
      double alpha = 0.05 + 0.95 * uni(rng);
      rule_request req;
      req.checked = r;
      req.f = positive_poly_expr(rng);
      req.g = positive_poly_expr(rng);
      req.lambda = 0.1 + 4.0 * uni(rng);

      rule_report rep = check_rule(req, sc.T, {sc.t}, alpha);
      skips += rep.domain_skips;
      for (const rule_point& p : rep.points) {
        c.require(p.residual <= 1e-9 * (1.0 + std::abs(p.lhs)),
                  std::string(to_string(r)) + " residual " + std::to_string(p.residual) +
                      " at t=" + std::to_string(p.t) + " on " + sc.T.str());
      }
      if (r == rule::product && c.ok) {
        product_forms pf = product_rhs(*req.f, *req.g, sc.T, sc.t, alpha);
        c.require(std::abs(pf.via_g_at_t - pf.via_g_at_sigma) <=
                      1e-10 * (1.0 + std::abs(pf.via_g_at_t)),
                  "product symmetric forms disagree");
      }
    }
  }
  if (c.ok) c.note = "domain_skips=" + std::to_string(skips);
  return c;
}

criterion power_rule_criterion() {
  criterion c;
  const time_scale Z = time_scale::integers();
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    for (int m = 1; m <= 6 && c.ok; ++m) {
      for (double t : {1.0, 2.0, 5.0}) {
        cvalue direct = deriv(expr::pow(expr::variable(), m), Z, t, alpha).value;
        c.require(close(power_rule(Z, t, alpha, m), direct, 1e-10),
                  "power vs direct, m=" + std::to_string(m));
      }
      cvalue d2 = deriv(expr::pow(expr::variable(), m), time_scale::h_step(0.5), 1.5, alpha).value;
      c.require(close(power_rule(time_scale::h_step(0.5), 1.5, alpha, m), d2, 1e-10),
                "power vs direct on hZ");
      for (double t : {-5.0, -2.0, -1.0, 0.0, 1.0, 4.0}) {
        cvalue next = power_rule(Z, t, alpha, m + 1);
        cvalue rec = ipow(cpow(t, alpha), m) + cpow(t + 1.0, alpha) * power_rule(Z, t, alpha, m);
        c.require(std::abs(next - rec) <= 1e-12 * (1.0 + std::abs(next)),
                  "recurrence at t=" + std::to_string(t) + ", m=" + std::to_string(m));
      }
    }
  }
  return c;
}

criterion sum_counterexample() {
  criterion c;
  rule_request req;
  req.checked = rule::sum_counterexample;
  req.f = expr::variable();
  req.g = expr::number(2.0) * expr::variable();
  rule_report rep = check_rule(req, time_scale::integers(), {1.0, 2.0, 3.0}, 0.5);
  double expected = std::abs(std::sqrt(3.0) - (1.0 + std::sqrt(2.0)));
  c.require(rep.points.size() == 3, "three points evaluated");
  for (const rule_point& p : rep.points) {
    c.require(std::abs(p.residual - expected) <= 1e-12, "residual equals |sqrt3 - (1+sqrt2)|");
    c.require(p.residual > 0.5, "the additivity failure must not average away");
  }
  if (c.ok) c.note = "gap " + std::to_string(expected);
  return c;
}

criterion dense_estimator() {
  criterion c;
  deriv_config cfg;
  cfg.tol = 5e-8;  // two-consecutive stopping needs headroom over the roundoff floor
  for (int m : {1, 2, 3}) {
    for (double alpha : {0.25, 0.5, 0.75}) {
      for (double t : {1.0, 4.0, 9.0}) {
        deriv_result r =
            deriv_dense(expr::pow(expr::variable(), m), time_scale::reals(), t, alpha, cfg);
        double expected = m * std::pow(t, alpha * (m - 1));
        c.require(close(r.value, {expected, 0.0}, 1e-6),
                  "m=" + std::to_string(m) + " t=" + std::to_string(t));
        c.require(r.diagnostics.probes_used <= 40, "probe budget");
      }
    }
  }
  return c;
}

criterion hilger_reduction() {
  criterion c;
  std::mt19937 rng(307);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);

  for (int i = 0; i < 200 && c.ok; ++i) {
    scattered_config sc = random_scattered(rng);
    std::vector<double> coeffs(1 + static_cast<std::size_t>(uni(rng) * 4.0));
    for (double& cf : coeffs) cf = coef(rng);
    real_fn f = [coeffs](double t) { return poly_eval(coeffs, t); };

    double mu = sc.T.graininess(sc.t);
    double hilger = (f(sc.T.sigma(sc.t)) - f(sc.t)) / mu;
    cvalue v = deriv(f, sc.T, sc.t, 1.0).value;
    c.require(std::abs(v - cvalue(hilger, 0.0)) <= 1e-10 * (1.0 + std::abs(hilger)),
              "config " + std::to_string(i) + " on " + sc.T.str());
  }
  return c;
}

criterion higher_order() {
  criterion c;
  deriv_result a = deriv_higher(expr::parse("t^3"), time_scale::reals(), 3.0, 1.5);
  c.require(close(a.value, {6.0, 0.0}, 1e-5), "(t^3)^{d^1.5} at 3 on R");
  deriv_result b =
      deriv_higher(expr::pow(expr::variable(), 2.0), time_scale::integers(), 4.0, 2.0);
  c.require(close(b.value, {2.0, 0.0}, 1e-10), "(t^2)^{d^2} on Z");
  return c;
}

// --- criterion 10: CLI contract -------------------------------------------

struct run_result {
  int code = -1;
  std::string out;
};

run_result run_cli(const std::string& args) {
  run_result r;
  std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

criterion cli_contract() {
  criterion c;
  if (g_cli.empty()) {
    c.require(false, "no CLI path given (usage: acceptance <path-to-cli>)");
    return c;
  }

  std::string first = "deriv --scale Z --f 't^2' --alpha 0.5 --t 3";
  run_result a = run_cli(first);
  c.require(a.code == 0, "scattered deriv exit code");
  if (a.code == 0) {
    json j = json::parse(a.out, nullptr, false);
    c.require(!j.is_discarded(), "scattered deriv emits JSON");
    if (!j.is_discarded()) {
      c.require(std::abs(j["value_re"].get<double>() - 3.7320508075688772) < 1e-12,
                "sigma^a + t^a value");
      c.require(j["value_im"].get<double>() == 0.0, "real value");
      c.require(j["method"] == "QuotientFormula", "method tag");
    }
    c.require(run_cli(first).out == a.out, "byte-stable output");
  }

  run_result b = run_cli("deriv --scale R --f 't^2' --alpha 0.5 --t 4");
  c.require(b.code == 0, "dense deriv exit code");
  if (b.code == 0) {
    json j = json::parse(b.out, nullptr, false);
    c.require(!j.is_discarded() && std::abs(j["value_re"].get<double>() - 4.0) < 1e-6,
              "dense value near 4");
    c.require(j["method"] == "NumericLimit", "dense method tag");
  }

  run_result d = run_cli("deriv --scale '{0,1,4}' --f t --alpha 0.5 --t 4");
  c.require(d.code == 2, "kappa-domain violation exits 2");

  run_result e =
      run_cli("check --rule sum-counterexample --scale Z --f t --g '2*t' --alpha 0.5 --points 1");
  c.require(e.code == 0, "sum counterexample exits 0");
  if (e.code == 0) {
    json j = json::parse(e.out, nullptr, false);
    double expected = std::abs(std::sqrt(3.0) - 1.0 - std::sqrt(2.0));
    c.require(!j.is_discarded() &&
                  std::abs(j["points"][0]["residual"].get<double>() - expected) < 1e-12,
              "counterexample residual");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];

  report(1, "golden closed-form suite", golden_suite());
  report(2, "complex value at t=-1 on Z", complex_value_check());
  report(3, "increment identity, 500 random scattered configs", increment_identity());
  report(4, "calculus-rule residual suite, 200 configs per rule", rule_properties());
  report(5, "power rule vs direct + recurrence", power_rule_criterion());
  report(6, "sum-rule counterexample", sum_counterexample());
  report(7, "dense-limit estimator on R", dense_estimator());
  report(8, "alpha=1 Hilger reduction, 200 configs", hilger_reduction());
  report(9, "higher-order composition", higher_order());
  report(10, "CLI contract", cli_contract());

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
