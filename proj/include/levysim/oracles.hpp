#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "levysim/measures.hpp"
#include "levysim/rng.hpp"

namespace levysim {

// Exact PDF at time t of the Merton process sigma W_t + sum N(0,1) jumps
// with unit Brownian volatility and jump rate lambda:
//   p_t(x) = e^(-lambda t) sum_k (lambda t)^k e^(-x^2 / (2(t+k))) / (k! sqrt(2 pi (t+k)))
// The series is truncated once a term falls below 1e-16 of the running sum
// past k = lambda t + 10 sqrt(lambda t).
double merton_pdf(double x, double t, double lambda);

// Closed-form NIG density at time t (delta -> delta t time scaling).
double nig_pdf(double x, double t, const NIGSpec& spec);

// One draw of the NIG process value at time t through inverse-Gaussian
// subordination (Michael-Schucany-Haas for the subordinator increment).
double nig_direct_sample(const NIGSpec& spec, double t, RandomStream& rng);

// Inverse-Gaussian variate with the given mean and shape.
double inverse_gaussian_sample(double mean, double shape, RandomStream& rng);

// CGMY characteristic function at time t, principal-branch complex powers:
//   exp(t c Gamma(-y) [ (m - iu)^y - m^y + (g + iu)^y - g^y ]).
// Requires 0 < y < 2, y != 1.
std::complex<double> cgmy_cf(double u, double t, const CGMYSpec& spec);

struct CfInversionSpec {
    double u_max = 200.0;
    int n_points = 1 << 15;
    std::vector<double> x_grid;
};

// Density by direct trapezoidal inversion of a characteristic function:
//   p(x) = (1 / 2 pi) int_{-u_max}^{u_max} e^(-iux) cf(u) du.
// Returns (x, density) pairs on the spec's x grid; throws if the imaginary
// residue of any point exceeds 1e-10.
std::vector<std::pair<double, double>> cf_invert_pdf(
    const std::function<std::complex<double>(double)>& cf, const CfInversionSpec& spec);

// Single-point flavour of the same inversion.
double cf_invert_pdf_at(const std::function<std::complex<double>(double)>& cf, double x,
                        double u_max = 200.0, int n_points = 1 << 15);

// Bin-averaged cf-inverted density over a histogram layout (4-point
// Gauss-Legendre per bin over a single shared frequency grid).
std::vector<double> cf_inverted_bin_averages(
    const std::function<std::complex<double>(double)>& cf, double lo, double hi, int n_bins,
    double u_max = 200.0, int n_points = 1 << 15);

} // namespace levysim
