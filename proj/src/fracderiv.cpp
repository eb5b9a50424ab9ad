#include "tsfrac/fracderiv.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tsfrac/errors.hpp"
#include "tsfrac/format.hpp"

namespace tsfrac {

double deriv_config::initial_step(double t) const {
  return h0.value_or(1e-2 * std::max(1.0, std::abs(t)));
}

void deriv_config::validate() const {
  if (!(tol > 0.0)) raise(errc::invalid_argument, "tol must be positive");
  if (h0 && !(*h0 > 0.0)) raise(errc::invalid_argument, "h0 must be positive");
  if (max_halvings < 4) raise(errc::invalid_argument, "max_halvings must be at least 4");
  if (!(agreement_tol > 0.0)) raise(errc::invalid_argument, "agreement_tol must be positive");
  if (!(denom_floor > 0.0)) raise(errc::invalid_argument, "denom_floor must be positive");
}

const char* to_string(deriv_method m) noexcept {
  switch (m) {
    case deriv_method::quotient_formula: return "QuotientFormula";
    case deriv_method::numeric_limit: return "NumericLimit";
    case deriv_method::higher_order_composition: return "HigherOrderComposition";
  }
  return "?";
}

namespace {

void require_order_unit(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    raise(errc::invalid_argument, "order alpha must lie in (0,1]; got " + format_double(alpha));
}

// (x^a - y^a) as a divisor, guarded against underflow to zero.
cvalue guarded_denominator(double x, double y, double alpha, double floor) {
  cvalue den = cpow_diff(x, y, alpha);
  if (std::abs(den) < floor)
    raise(errc::degenerate_denominator, "sigma(t)^a - t^a vanished between " + format_double(y) +
                                            " and " + format_double(x));
  return den;
}

cvalue lift(const real_fn& f, double s, double alpha) {
  double v = f(s);
  if (!std::isfinite(v))
    raise(errc::domain_error, "f(" + format_double(s) + ") is not finite");
  return cpow(v, alpha);
}

struct side_estimate {
  cvalue limit;
  int probes = 0;
  double residual = 0.0;
};

// One-sided limit of (f^a(t) - f^a(s)) / (t^a - s^a): geometric step
// halving, converged once the normalized gap between successive quotients
// stays within tol for two consecutive probes.
side_estimate estimate_side(const real_fn& f, double ft, const time_scale& T, double ts,
                            double alpha, direction dir, const deriv_config& cfg) {
  double h0 = cfg.initial_step(ts);
  bool have_prev = false;
  cvalue prev_q;
  double prev_s = ts;
  int streak = 0;
  int probes = 0;

  for (int k = 0; k < cfg.max_halvings; ++k) {
    double h = std::ldexp(h0, -k);
    double s;
    try {
      s = T.sample_toward(ts, dir, h);
    } catch (const error& e) {
      if (e.code() == errc::no_point_on_side) continue;  // halve and retry
      throw;
    }
    if (have_prev && s == prev_s) continue;

    cvalue den = guarded_denominator(ts, s, alpha, cfg.denom_floor);
    double fs = f(s);
    if (!std::isfinite(fs))
      raise(errc::domain_error, "f(" + format_double(s) + ") is not finite");
    cvalue q = cpow_diff(ft, fs, alpha) / den;
    ++probes;

    if (have_prev) {
      double gap = std::abs(q - prev_q) / (1.0 + std::abs(q));
      streak = gap <= cfg.tol ? streak + 1 : 0;
      if (streak >= 2) return {q, probes, gap};
    }
    prev_q = q;
    prev_s = s;
    have_prev = true;
  }
  raise(errc::limit_not_converged,
        "quotient did not stabilize within " + std::to_string(cfg.max_halvings) +
            " probes approaching " + format_double(ts));
}

deriv_result scattered_impl(const real_fn& f, const time_scale& T, double ts, double alpha,
                            const deriv_config& cfg) {
  double sig = T.sigma(ts);
  cvalue den = guarded_denominator(sig, ts, alpha, cfg.denom_floor);
  double fsig = f(sig);
  double ft = f(ts);
  if (!std::isfinite(fsig) || !std::isfinite(ft))
    raise(errc::domain_error, "f is not finite at t or sigma(t)");

  deriv_result out;
  out.value = cpow_diff(fsig, ft, alpha) / den;
  out.classification = T.classify(ts);
  out.method = deriv_method::quotient_formula;
  return out;
}

deriv_result dense_impl(const real_fn& f, const time_scale& T, double ts, double alpha,
                        const deriv_config& cfg) {
  directions dirs = T.approach_directions(ts);
  if (dirs.empty())
    raise(errc::limit_not_converged,
          "no side of " + format_double(ts) + " accumulates points of " + T.str());

  double ft = f(ts);
  if (!std::isfinite(ft))
    raise(errc::domain_error, "f(" + format_double(ts) + ") is not finite");

  std::vector<std::pair<direction, side_estimate>> sides;
  if (dirs.from_left)
    sides.emplace_back(direction::from_left,
                       estimate_side(f, ft, T, ts, alpha, direction::from_left, cfg));
  if (dirs.from_right)
    sides.emplace_back(direction::from_right,
                       estimate_side(f, ft, T, ts, alpha, direction::from_right, cfg));

  cvalue value{0.0, 0.0};
  for (const auto& [dir, est] : sides) value += est.limit;
  value /= static_cast<double>(sides.size());

  if (sides.size() == 2) {
    double spread = std::abs(sides[0].second.limit - sides[1].second.limit);
    if (spread > cfg.agreement_tol * (1.0 + std::abs(value)))
      raise(errc::side_disagreement,
            "left/right limits differ by " + format_double(spread) + " at t=" + format_double(ts));
  }

  deriv_result out;
  out.value = value;
  out.classification = T.classify(ts);
  out.method = deriv_method::numeric_limit;
  for (const auto& [dir, est] : sides) {
    out.diagnostics.sides_probed.push_back(dir);
    out.diagnostics.probes_used = std::max(out.diagnostics.probes_used, est.probes);
    out.diagnostics.last_residual = std::max(out.diagnostics.last_residual, est.residual);
  }
  return out;
}

double require_in_kappa(const time_scale& T, double t) {
  double ts = T.snap(t);
  if (!T.in_kappa(ts))
    raise(errc::not_in_kappa,
          format_double(ts) + " is a left-scattered maximum of " + T.str());
  return ts;
}

// ---------------------------------------------------------------------------
// Higher-order machinery: iterated Hilger derivatives
// ---------------------------------------------------------------------------

// Polynomial extrapolation of (x_i, y_i) samples to x = 0 (Neville).
double extrapolate_to_zero(std::vector<double> xs, std::vector<double> ys) {
  std::size_t n = ys.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      ys[i] = (xs[i + m] * ys[i] - xs[i] * ys[i + 1]) / (xs[i + m] - xs[i]);
  return ys[0];
}

constexpr int kHilgerLevels = 6;

// Classical (alpha = 1) Hilger derivative of g at s. Dense points use
// difference quotients at a frozen geometric step ladder extrapolated to
// zero; freezing the ladder keeps the result smooth in s, which the outer
// fractional quotient needs. anchor_step pins the ladder scale.
double hilger_at(const real_fn& g, const time_scale& T, double s, double anchor_step) {
  double ts = T.snap(s);
  if (!T.in_kappa(ts))
    raise(errc::higher_order_unavailable,
          "intermediate point " + format_double(ts) + " leaves the kappa-domain");
  double sig = T.sigma(ts);
  if (sig > ts) return (g(sig) - g(ts)) / (sig - ts);

  directions dirs = T.approach_directions(ts);
  if (dirs.empty())
    raise(errc::higher_order_unavailable,
          "no side to probe the Hilger derivative at " + format_double(ts));

  std::vector<double> xs, ys;
  xs.reserve(kHilgerLevels);
  ys.reserve(kHilgerLevels);
  double gts = dirs.from_left && dirs.from_right ? 0.0 : g(ts);
  for (int j = 0; j < kHilgerLevels; ++j) {
    double h = std::ldexp(anchor_step, -j);
    if (dirs.from_left && dirs.from_right) {
      double sl = T.sample_toward(ts, direction::from_left, h);
      double sr = T.sample_toward(ts, direction::from_right, h);
      xs.push_back(sr - sl);
      ys.push_back((g(sr) - g(sl)) / (sr - sl));
    } else if (dirs.from_right) {
      double sr = T.sample_toward(ts, direction::from_right, h);
      xs.push_back(sr - ts);
      ys.push_back((g(sr) - gts) / (sr - ts));
    } else {
      double sl = T.sample_toward(ts, direction::from_left, h);
      xs.push_back(ts - sl);
      ys.push_back((gts - g(sl)) / (ts - sl));
    }
  }
  // Symmetric ladders cancel the odd error terms; extrapolate in x^2 then.
  bool symmetric = dirs.from_left && dirs.from_right;
  if (symmetric)
    for (double& x : xs) x *= x;
  return extrapolate_to_zero(std::move(xs), std::move(ys));
}

real_fn iterated_hilger(real_fn f, const time_scale& T, int levels, double anchor_step) {
  real_fn g = std::move(f);
  for (int i = 0; i < levels; ++i)
    g = [g, &T, anchor_step](double s) { return hilger_at(g, T, s, anchor_step); };
  return g;
}

}  // namespace

cvalue alpha_lift(const real_fn& f, double s, double alpha) { return lift(f, s, alpha); }

cvalue alpha_lift(const expr& f, double s, double alpha) { return cpow(f.eval(s), alpha); }

deriv_result deriv_scattered(const real_fn& f, const time_scale& T, double t, double alpha,
                             const deriv_config& cfg) {
  cfg.validate();
  require_order_unit(alpha);
  double ts = require_in_kappa(T, t);
  if (!(T.sigma(ts) > ts))
    raise(errc::invalid_argument, format_double(ts) + " is right-dense; use deriv_dense");
  return scattered_impl(f, T, ts, alpha, cfg);
}

deriv_result deriv_dense(const real_fn& f, const time_scale& T, double t, double alpha,
                         const deriv_config& cfg) {
  cfg.validate();
  require_order_unit(alpha);
  double ts = require_in_kappa(T, t);
  if (T.sigma(ts) > ts)
    raise(errc::invalid_argument, format_double(ts) + " is right-scattered; use deriv_scattered");
  return dense_impl(f, T, ts, alpha, cfg);
}

deriv_result deriv(const real_fn& f, const time_scale& T, double t, double alpha,
                   const deriv_config& cfg) {
  cfg.validate();
  require_order_unit(alpha);
  double ts = require_in_kappa(T, t);
  if (T.sigma(ts) > ts) return scattered_impl(f, T, ts, alpha, cfg);
  return dense_impl(f, T, ts, alpha, cfg);
}

deriv_result deriv_higher(const real_fn& f, const time_scale& T, double t, double alpha,
                          const deriv_config& cfg) {
  cfg.validate();
  if (!(alpha > 0.0)) raise(errc::invalid_argument, "order alpha must be positive");
  if (alpha <= 1.0) return deriv(f, T, t, alpha, cfg);

  int levels = static_cast<int>(std::ceil(alpha)) - 1;
  double beta = alpha - levels;
  double ts = require_in_kappa(T, t);

  // Tolerances below the numeric precision of the intermediate Hilger
  // derivatives cannot converge; clamp the fractional stage accordingly.
  deriv_config stage = cfg;
  stage.tol = std::max(cfg.tol, 1e-6);
  stage.agreement_tol = std::max(cfg.agreement_tol, 10.0 * stage.tol);

  double anchor_step = 2e-2 * std::max(1.0, std::abs(ts));
  real_fn g = iterated_hilger(f, T, levels, anchor_step);

  deriv_result out;
  try {
    out = T.sigma(ts) > ts ? scattered_impl(g, T, ts, beta, stage)
                           : dense_impl(g, T, ts, beta, stage);
  } catch (const error& e) {
    // t itself was validated above, so scale-domain failures here come from
    // intermediate sigma-points.
    if (e.code() == errc::point_not_in_scale || e.code() == errc::not_in_kappa ||
        e.code() == errc::no_point_on_side)
      raise(errc::higher_order_unavailable, e.what());
    throw;
  }
  out.method = deriv_method::higher_order_composition;
  return out;
}

namespace {
real_fn as_fn(const expr& f) {
  return [f](double t) { return f.eval(t); };
}
}  // namespace

deriv_result deriv_scattered(const expr& f, const time_scale& T, double t, double alpha,
                             const deriv_config& cfg) {
  return deriv_scattered(as_fn(f), T, t, alpha, cfg);
}

deriv_result deriv_dense(const expr& f, const time_scale& T, double t, double alpha,
                         const deriv_config& cfg) {
  return deriv_dense(as_fn(f), T, t, alpha, cfg);
}

deriv_result deriv(const expr& f, const time_scale& T, double t, double alpha,
                   const deriv_config& cfg) {
  return deriv(as_fn(f), T, t, alpha, cfg);
}

deriv_result deriv_higher(const expr& f, const time_scale& T, double t, double alpha,
                          const deriv_config& cfg) {
  return deriv_higher(as_fn(f), T, t, alpha, cfg);
}

}  // namespace tsfrac
