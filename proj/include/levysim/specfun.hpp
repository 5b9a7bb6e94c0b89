#pragma once

#include <complex>

namespace levysim {

// Modified Bessel function of the second kind, order one.
// Power series for x <= 2, Thompson-Barnett continued fraction for x > 2.
// Relative error below 1e-12 on [1e-8, 700]; underflows to 0 past x ~ 740.
// Throws std::domain_error for x <= 0.
double bessel_k1(double x);

// Lower incomplete gamma function, unregularized:
//   gamma(s, x) = int_0^x t^(s-1) e^(-t) dt,  s > 0, x >= 0.
// Series for x < s + 1, continued fraction (via the upper function) otherwise.
double lower_incomplete_gamma(double s, double x);

// Principal-branch complex power z^y = exp(y Log z), arg in (-pi, pi].
// Throws std::domain_error at z = 0 with y <= 0.
std::complex<double> complex_power(std::complex<double> z, double y);

} // namespace levysim
