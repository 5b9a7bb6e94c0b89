#pragma once

#include <functional>
#include <optional>

#include "levysim/quadrature.hpp"

namespace levysim {

// An unnormalized Levy density nu on a bounded simulation domain
// Omega = [lo, hi], with the origin interval (-eps, eps) excluded when
// excluded_origin_radius = eps > 0 (infinite-activity truncations).
struct DensitySpec {
    std::function<double(double)> evaluate; // nu(x), unnormalized
    double lo = 0.0;
    double hi = 1.0;
    std::optional<double> sup_hint;         // estimate of sup nu over the domain
    double excluded_origin_radius = 0.0;    // eps
};

struct GaussianJumpSpec {
    double mean = 0.0;   // jump mean
    double stddev = 1.0; // jump standard deviation, > 0
};

// Normal inverse Gaussian Levy density parameters, alpha > |beta|, delta > 0.
struct NIGSpec {
    double alpha;
    double beta;
    double delta;
};

// CGMY (tempered stable) parameters: c, g, m > 0 and y < 2.
struct CGMYSpec {
    double c;
    double g;
    double m;
    double y;
};

// Fixed two-mode density on [0, 1]: 1 on [0,0.25) and [0.5,0.75), 0.01 otherwise.
double eval_two_mode(double x);

// nu(x) = (alpha delta / (pi |x|)) e^(beta x) K1(alpha |x|), x != 0.
double eval_nig_levy(const NIGSpec& spec, double x);

// nu(x) = c e^(-m x) / x^(1+y) for x > 0, c e^(-g |x|) / |x|^(1+y) for x < 0.
double eval_cgmy_levy(const CGMYSpec& spec, double x);

// Maps the Cont/Tankov (sigma, theta, kappa) NIG parametrization onto
// (alpha, beta, delta).
NIGSpec nig_params_from_ct(double sigma, double theta, double kappa);

// Small-jump Brownian volatility sqrt(2 eps delta / pi) (asymptotic form).
double small_jump_sigma_nig(double eps, const NIGSpec& spec);

// Exact quadrature variant of the NIG small-jump volatility, for comparison.
double small_jump_sigma_nig_exact(double eps, const NIGSpec& spec);

// Closed-form CGMY small-jump volatility via the incomplete gamma function:
//   sigma(eps)^2 = c [ m^(y-2) g_low(2-y, m eps) + g^(y-2) g_low(2-y, g eps) ].
// Requires 0 < y < 2.
double small_jump_sigma_cgmy(double eps, const CGMYSpec& spec);

// True iff the jump-diffusion small-jump approximation is valid: 0 < y <= 1.
bool asmussen_rosinski_ok(const CGMYSpec& spec);

// Reference intensity: integral of nu over Omega minus the excluded interval.
double truncated_intensity(const DensitySpec& spec, const QuadratureSpec& quad);
double truncated_intensity(const DensitySpec& spec, double abs_tol = 1e-10);

// Density factories. Domains default to the cutoffs used throughout:
// [-8, 8] for the Gaussian jump density, [-25, 25] for NIG and CGMY.
DensitySpec two_mode_density();
DensitySpec gaussian_jump_density(const GaussianJumpSpec& spec, double intensity,
                                  double omega_half = 8.0);
DensitySpec unit_normal_density(double omega_half = 5.0);
DensitySpec nig_levy_density(const NIGSpec& spec, double eps, double omega_half = 25.0);
DensitySpec cgmy_levy_density(const CGMYSpec& spec, double eps, double omega_half = 25.0);

} // namespace levysim
