#include "levysim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levysim/specfun.hpp"

namespace levysim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_nig(const NIGSpec& spec) {
    if (!(spec.alpha > std::abs(spec.beta)) || !(spec.delta > 0.0))
        throw std::invalid_argument("NIGSpec: requires alpha > |beta| and delta > 0");
}

void check_cgmy(const CGMYSpec& spec) {
    if (!(spec.c > 0.0) || !(spec.g > 0.0) || !(spec.m > 0.0) || !(spec.y < 2.0))
        throw std::invalid_argument("CGMYSpec: requires c, g, m > 0 and y < 2");
}

// sup of nu over [lo, hi] \ (-eps, eps) by boundary values plus a midpoint
// scan, with a small inflation margin.
double scan_sup(const std::function<double(double)>& nu, double lo, double hi, double eps) {
    double sup = 0.0;
    auto scan = [&](double a, double b) {
        if (!(a < b)) return;
        sup = std::max(sup, std::max(nu(a), nu(b)));
        const int n = 4096;
        for (int i = 0; i < n; ++i)
            sup = std::max(sup, nu(a + (b - a) * (i + 0.5) / n));
    };
    if (eps > 0.0) {
        scan(lo, -eps);
        scan(eps, hi);
    } else {
        scan(lo, hi);
    }
    return sup * (1.0 + 1e-9);
}

} // namespace

double eval_two_mode(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("eval_two_mode: x outside [0, 1]");
    return ((x >= 0.0 && x < 0.25) || (x >= 0.5 && x < 0.75)) ? 1.0 : 0.01;
}

double eval_nig_levy(const NIGSpec& spec, double x) {
    if (x == 0.0) throw std::domain_error("eval_nig_levy: density diverges at x = 0");
    const double ax = std::abs(x);
    return spec.alpha * spec.delta / (kPi * ax) * std::exp(spec.beta * x) *
           bessel_k1(spec.alpha * ax);
}

double eval_cgmy_levy(const CGMYSpec& spec, double x) {
    if (x == 0.0) throw std::domain_error("eval_cgmy_levy: density diverges at x = 0");
    const double ax = std::abs(x);
    const double rate = x > 0.0 ? spec.m : spec.g;
    return spec.c * std::exp(-rate * ax) / std::pow(ax, 1.0 + spec.y);
}

NIGSpec nig_params_from_ct(double sigma, double theta, double kappa) {
    if (!(sigma > 0.0) || !(kappa > 0.0))
        throw std::invalid_argument("nig_params_from_ct: requires sigma > 0 and kappa > 0");
    const double s2 = sigma * sigma;
    NIGSpec spec{std::sqrt(theta * theta + s2 / kappa) / s2, theta / s2,
                 sigma / std::sqrt(kappa)};
    check_nig(spec);
    return spec;
}

double small_jump_sigma_nig(double eps, const NIGSpec& spec) {
    if (!(eps > 0.0)) throw std::domain_error("small_jump_sigma_nig: requires eps > 0");
    check_nig(spec);
    return std::sqrt(2.0 * eps * spec.delta / kPi);
}

double small_jump_sigma_nig_exact(double eps, const NIGSpec& spec) {
    if (!(eps > 0.0)) throw std::domain_error("small_jump_sigma_nig_exact: requires eps > 0");
    check_nig(spec);
    // x^2 nu(x) -> delta/pi as x -> 0; extend by continuity at the origin.
    auto integrand = [&](double x) {
        return x == 0.0 ? spec.delta / kPi : x * x * eval_nig_levy(spec, x);
    };
    return std::sqrt(integrate(integrand, -eps, eps, 1e-14));
}

double small_jump_sigma_cgmy(double eps, const CGMYSpec& spec) {
    if (!(eps > 0.0)) throw std::domain_error("small_jump_sigma_cgmy: requires eps > 0");
    check_cgmy(spec);
    if (!(spec.y > 0.0 && spec.y < 2.0))
        throw std::domain_error("small_jump_sigma_cgmy: requires 0 < y < 2");
    const double s = 2.0 - spec.y;
    const double var = spec.c * (std::pow(spec.m, -s) * lower_incomplete_gamma(s, spec.m * eps) +
                                 std::pow(spec.g, -s) * lower_incomplete_gamma(s, spec.g * eps));
    return std::sqrt(var);
}

bool asmussen_rosinski_ok(const CGMYSpec& spec) {
    check_cgmy(spec);
    return spec.y > 0.0 && spec.y <= 1.0;
}

double truncated_intensity(const DensitySpec& spec, const QuadratureSpec& quad) {
    const double eps = spec.excluded_origin_radius;
    if (eps > 0.0) {
        QuadratureSpec left = quad;
        left.a = spec.lo;
        left.b = -eps;
        QuadratureSpec right = quad;
        right.a = eps;
        right.b = spec.hi;
        return integrate(spec.evaluate, left) + integrate(spec.evaluate, right);
    }
    QuadratureSpec full = quad;
    full.a = spec.lo;
    full.b = spec.hi;
    return integrate(spec.evaluate, full);
}

double truncated_intensity(const DensitySpec& spec, double abs_tol) {
    QuadratureSpec quad;
    quad.abs_tol = abs_tol;
    return truncated_intensity(spec, quad);
}

DensitySpec two_mode_density() {
    DensitySpec d;
    d.evaluate = [](double x) { return eval_two_mode(x); };
    d.lo = 0.0;
    d.hi = 1.0;
    d.sup_hint = 1.0;
    return d;
}

DensitySpec gaussian_jump_density(const GaussianJumpSpec& spec, double intensity,
                                  double omega_half) {
    if (!(spec.stddev > 0.0)) throw std::invalid_argument("GaussianJumpSpec: stddev > 0");
    const double mean = spec.mean;
    const double inv2v = 1.0 / (2.0 * spec.stddev * spec.stddev);
    const double norm = intensity / (spec.stddev * std::sqrt(2.0 * kPi));
    DensitySpec d;
    d.evaluate = [=](double x) { return norm * std::exp(-(x - mean) * (x - mean) * inv2v); };
    d.lo = -omega_half;
    d.hi = omega_half;
    const double peak_x = std::clamp(mean, d.lo, d.hi);
    d.sup_hint = d.evaluate(peak_x);
    return d;
}

DensitySpec unit_normal_density(double omega_half) {
    return gaussian_jump_density(GaussianJumpSpec{0.0, 1.0}, 1.0, omega_half);
}

DensitySpec nig_levy_density(const NIGSpec& spec, double eps, double omega_half) {
    check_nig(spec);
    if (!(eps > 0.0)) throw std::invalid_argument("nig_levy_density: requires eps > 0");
    DensitySpec d;
    d.evaluate = [spec](double x) { return eval_nig_levy(spec, x); };
    d.lo = -omega_half;
    d.hi = omega_half;
    d.excluded_origin_radius = eps;
    d.sup_hint = scan_sup(d.evaluate, d.lo, d.hi, eps);
    return d;
}

DensitySpec cgmy_levy_density(const CGMYSpec& spec, double eps, double omega_half) {
    check_cgmy(spec);
    if (!(eps > 0.0)) throw std::invalid_argument("cgmy_levy_density: requires eps > 0");
    DensitySpec d;
    d.evaluate = [spec](double x) { return eval_cgmy_levy(spec, x); };
    d.lo = -omega_half;
    d.hi = omega_half;
    d.excluded_origin_radius = eps;
    d.sup_hint = scan_sup(d.evaluate, d.lo, d.hi, eps);
    return d;
}

} // namespace levysim
