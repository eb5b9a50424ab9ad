#pragma once

#include <complex>

namespace tsfrac {

// Complex value carried by all derivative results.
using cvalue = std::complex<double>;

// x^alpha for real x of any sign, on the principal branch (Arg in (-pi, pi]).
//   x > 0            -> the ordinary real power, imaginary part exactly 0
//   x < 0            -> |x|^alpha * exp(i*pi*alpha), so cpow(-1, 0.5) == i
//   x == 0, alpha>0  -> 0
//   x == 0, alpha<=0 -> pow_undefined
// Integer alpha is exact: the unit factor exp(i*pi*n) is resolved to +/-1 by
// parity, keeping e.g. cpow(x, 1) == x bit-for-bit.
cvalue cpow(double x, double alpha);

// z^alpha = exp(alpha * Log z) with the principal Log (Arg in (-pi, pi]; a
// negative real axis input counts as Arg = +pi). Integer alpha is evaluated
// by repeated multiplication, so cpow_c(i, 2) == -1 exactly.
cvalue cpow_c(cvalue z, double alpha);

// cpow(x, alpha) - cpow(y, alpha), evaluated without cancellation when x and
// y are close and of the same sign (the difference-quotient workhorse).
cvalue cpow_diff(double x, double y, double alpha);

// z^n by binary exponentiation; n may be negative (z != 0 then).
cvalue ipow(cvalue z, long long n);

}  // namespace tsfrac
