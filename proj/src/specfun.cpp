#include "levysim/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levysim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Power series around the origin:
//   K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k [psi(k+1)+psi(k+2)] t_k,
//   I1(x) = (x/2) sum_k t_k,   t_k = (x^2/4)^k / (k! (k+1)!).
double k1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;         // t_k
    double psi1 = -kEulerGamma; // psi(k+1)
    double psi2 = 1.0 - kEulerGamma; // psi(k+2)
    double sum_i = 0.0;
    double sum_c = 0.0;
    for (int k = 0; k < 60; ++k) {
        sum_i += term;
        sum_c += term * (psi1 + psi2);
        if (term * (std::abs(psi1) + psi2 + 1.0) < kEps * (std::abs(sum_c) + 1.0)) break;
        psi1 = psi2;
        psi2 += 1.0 / (k + 2);
        term *= q / ((k + 1.0) * (k + 2.0));
    }
    const double i1 = 0.5 * x * sum_i;
    return std::log(0.5 * x) * i1 + 1.0 / x - 0.25 * x * sum_c;
}

// Thompson-Barnett continued fraction (CF2) for K0, K1 at x > 2.
double k1_continued_fraction(double x) {
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double a = -a1;
    double c = a1;
    double q = c;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= kEps) break;
    }
    h = a1 * h;
    const double k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    return k0 * (x + 0.5 - h) / x;
}

// Series branch of the incomplete gamma pair, valid for x < s + 1.
double gamma_lower_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (term < kEps * sum) break;
    }
    return std::exp(s * std::log(x) - x) * sum;
}

// Continued fraction for the upper function (modified Lentz), x >= s + 1.
double gamma_upper_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) <= kEps) break;
    }
    return std::exp(s * std::log(x) - x) * f;
}

} // namespace

double bessel_k1(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k1: requires x > 0");
    return x <= 2.0 ? k1_series(x) : k1_continued_fraction(x);
}

double lower_incomplete_gamma(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("lower_incomplete_gamma: requires s > 0");
    if (x < 0.0) throw std::domain_error("lower_incomplete_gamma: requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return gamma_lower_series(s, x);
    return std::tgamma(s) - gamma_upper_cf(s, x);
}

std::complex<double> complex_power(std::complex<double> z, double y) {
    if (z == std::complex<double>(0.0, 0.0)) {
        if (y <= 0.0) throw std::domain_error("complex_power: 0 base with y <= 0");
        return {0.0, 0.0};
    }
    return std::exp(y * std::log(z));
}

} // namespace levysim
