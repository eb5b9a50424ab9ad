#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tsfrac/cpow.hpp"
#include "tsfrac/expr.hpp"
#include "tsfrac/timescale.hpp"

namespace tsfrac {

// Tolerances realizing the epsilon/delta machinery of the definition as
// numeric stopping rules.
struct deriv_config {
  double tol = 1e-8;               // limit convergence tolerance
  std::optional<double> h0;        // initial probe step; default 1e-2*max(1,|t|)
  int max_halvings = 40;           // probe cap per side
  double agreement_tol = 1e-6;     // cross-side agreement tolerance
  double denom_floor = 1e-300;     // guard below which a denominator is degenerate

  double initial_step(double t) const;
  void validate() const;  // throws invalid_argument
};

enum class deriv_method { quotient_formula, numeric_limit, higher_order_composition };

const char* to_string(deriv_method m) noexcept;

struct deriv_diagnostics {
  int probes_used = 0;         // deepest probe count over the probed sides
  double last_residual = 0.0;  // final normalized successive-quotient gap
  std::vector<direction> sides_probed;
};

struct deriv_result {
  cvalue value;
  point_class classification;
  deriv_method method = deriv_method::quotient_formula;
  deriv_diagnostics diagnostics;
};

using real_fn = std::function<double(double)>;

// f(s)^alpha on the principal branch.
cvalue alpha_lift(const real_fn& f, double s, double alpha);
cvalue alpha_lift(const expr& f, double s, double alpha);

// Quotient formula (f^a(sigma(t)) - f^a(t)) / (sigma(t)^a - t^a) at a
// right-scattered t in T^kappa.
deriv_result deriv_scattered(const real_fn& f, const time_scale& T, double t, double alpha,
                             const deriv_config& cfg = {});

// Numeric limit of (f^a(t) - f^a(s)) / (t^a - s^a) as s -> t within T, at a
// right-dense t. Probes every side on which T accumulates at t with
// geometrically halved steps; a side converges when the successive-quotient
// gap stays within tol twice in a row, and all sides must agree.
deriv_result deriv_dense(const real_fn& f, const time_scale& T, double t, double alpha,
                         const deriv_config& cfg = {});

// Fractional delta derivative of order alpha in (0,1]: dispatches on the
// classification of t.
deriv_result deriv(const real_fn& f, const time_scale& T, double t, double alpha,
                   const deriv_config& cfg = {});

// Any order alpha > 0: with N < alpha <= N+1, applies the order-(alpha-N)
// fractional operator to the N-fold Hilger derivative of f (computed
// numerically; on continuum parts by extrapolated central differences).
deriv_result deriv_higher(const real_fn& f, const time_scale& T, double t, double alpha,
                          const deriv_config& cfg = {});

deriv_result deriv_scattered(const expr& f, const time_scale& T, double t, double alpha,
                             const deriv_config& cfg = {});
deriv_result deriv_dense(const expr& f, const time_scale& T, double t, double alpha,
                         const deriv_config& cfg = {});
deriv_result deriv(const expr& f, const time_scale& T, double t, double alpha,
                   const deriv_config& cfg = {});
deriv_result deriv_higher(const expr& f, const time_scale& T, double t, double alpha,
                          const deriv_config& cfg = {});

}  // namespace tsfrac
