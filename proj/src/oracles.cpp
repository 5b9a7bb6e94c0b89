#include "levysim/oracles.hpp"

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

} // namespace

double merton_pdf(double x, double t, double lambda) {
    if (!(t > 0.0)) throw std::domain_error("merton_pdf: requires t > 0");
    if (lambda < 0.0) throw std::domain_error("merton_pdf: requires lambda >= 0");
    const double rate = lambda * t;
    const double k_min = rate + 10.0 * std::sqrt(rate);
    double weight = std::exp(-rate); // e^{-lt} (lt)^k / k!
    double sum = 0.0;
    for (int k = 0;; ++k) {
        const double tk = t + static_cast<double>(k);
        const double term = weight * std::exp(-x * x / (2.0 * tk)) / std::sqrt(2.0 * kPi * tk);
        sum += term;
        if (static_cast<double>(k) > k_min && term < 1e-16 * sum) break;
        weight *= rate / (k + 1.0);
        if (weight == 0.0 && static_cast<double>(k) > k_min) break;
    }
    return sum;
}

double nig_pdf(double x, double t, const NIGSpec& spec) {
    if (!(t > 0.0)) throw std::domain_error("nig_pdf: requires t > 0");
    check_nig(spec);
    const double dt = spec.delta * t;
    const double gamma = std::sqrt(spec.alpha * spec.alpha - spec.beta * spec.beta);
    const double r = std::sqrt(dt * dt + x * x);
    return spec.alpha * dt / kPi * std::exp(dt * gamma + spec.beta * x) *
           bessel_k1(spec.alpha * r) / r;
}

double inverse_gaussian_sample(double mean, double shape, RandomStream& rng) {
    if (!(mean > 0.0) || !(shape > 0.0))
        throw std::invalid_argument("inverse_gaussian_sample: mean, shape > 0");
    const double z = rng.normal();
    const double v = z * z;
    const double x = mean + mean * mean * v / (2.0 * shape) -
                     mean / (2.0 * shape) *
                         std::sqrt(4.0 * mean * shape * v + mean * mean * v * v);
    return rng.uniform01() <= mean / (mean + x) ? x : mean * mean / x;
}

double nig_direct_sample(const NIGSpec& spec, double t, RandomStream& rng) {
    if (!(t > 0.0)) throw std::domain_error("nig_direct_sample: requires t > 0");
    check_nig(spec);
    const double gamma = std::sqrt(spec.alpha * spec.alpha - spec.beta * spec.beta);
    const double dt = spec.delta * t;
    // Subordinator increment: IG with mean delta t / gamma, shape (delta t)^2.
    const double ig = inverse_gaussian_sample(dt / gamma, dt * dt, rng);
    return spec.beta * ig + std::sqrt(ig) * rng.normal();
}

std::complex<double> cgmy_cf(double u, double t, const CGMYSpec& spec) {
    if (!(spec.y > 0.0 && spec.y < 2.0) || spec.y == 1.0)
        throw std::domain_error("cgmy_cf: requires 0 < y < 2, y != 1");
    if (!(t > 0.0)) throw std::domain_error("cgmy_cf: requires t > 0");
    // Gamma(-y) by the reflection formula, finite for y in (0,1) u (1,2).
    const double gamma_neg_y = -kPi / (std::sin(kPi * spec.y) * std::tgamma(1.0 + spec.y));
    const std::complex<double> iu(0.0, u);
    const std::complex<double> bracket =
        complex_power(spec.m - iu, spec.y) - std::pow(spec.m, spec.y) +
        complex_power(spec.g + iu, spec.y) - std::pow(spec.g, spec.y);
    return std::exp(t * spec.c * gamma_neg_y * bracket);
}

std::vector<std::pair<double, double>> cf_invert_pdf(
    const std::function<std::complex<double>(double)>& cf, const CfInversionSpec& spec) {
    if (!(spec.u_max > 0.0)) throw std::invalid_argument("cf_invert_pdf: u_max > 0");
    if (spec.n_points < 2) throw std::invalid_argument("cf_invert_pdf: n_points >= 2");

    const int n = spec.n_points;
    const double du = 2.0 * spec.u_max / static_cast<double>(n - 1);
    std::vector<double> u(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> values(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        u[static_cast<std::size_t>(j)] = -spec.u_max + du * j;
        values[static_cast<std::size_t>(j)] = cf(u[static_cast<std::size_t>(j)]);
    }

    std::vector<std::pair<double, double>> out;
    out.reserve(spec.x_grid.size());
    for (const double x : spec.x_grid) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            const double trap = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            const double phase = -u[static_cast<std::size_t>(j)] * x;
            acc += trap * values[static_cast<std::size_t>(j)] *
                   std::complex<double>(std::cos(phase), std::sin(phase));
        }
        acc *= du / (2.0 * kPi);
        if (std::abs(acc.imag()) > 1e-10)
            throw std::runtime_error("cf_invert_pdf: imaginary residue above 1e-10");
        out.emplace_back(x, acc.real());
    }
    return out;
}

double cf_invert_pdf_at(const std::function<std::complex<double>(double)>& cf, double x,
                        double u_max, int n_points) {
    CfInversionSpec spec;
    spec.u_max = u_max;
    spec.n_points = n_points;
    spec.x_grid = {x};
    return cf_invert_pdf(cf, spec).front().second;
}

std::vector<double> cf_inverted_bin_averages(
    const std::function<std::complex<double>(double)>& cf, double lo, double hi, int n_bins,
    double u_max, int n_points) {
    static constexpr double kGlNode[2] = {0.3399810435848563, 0.8611363115940526};
    static constexpr double kGlWeight[2] = {0.6521451548625461, 0.3478548451374538};

    CfInversionSpec spec;
    spec.u_max = u_max;
    spec.n_points = n_points;
    const double w = (hi - lo) / n_bins;
    for (int b = 0; b < n_bins; ++b) {
        const double mid = lo + (b + 0.5) * w;
        for (int g = 0; g < 2; ++g) {
            spec.x_grid.push_back(mid - 0.5 * w * kGlNode[g]);
            spec.x_grid.push_back(mid + 0.5 * w * kGlNode[g]);
        }
    }
    const auto values = cf_invert_pdf(cf, spec);

    std::vector<double> avg(static_cast<std::size_t>(n_bins), 0.0);
    std::size_t j = 0;
    for (int b = 0; b < n_bins; ++b) {
        double acc = 0.0;
        for (int g = 0; g < 2; ++g) {
            acc += kGlWeight[g] * values[j++].second;
            acc += kGlWeight[g] * values[j++].second;
        }
        avg[static_cast<std::size_t>(b)] = 0.5 * acc; // GL weights sum to 2
    }
    return avg;
}

} // namespace levysim
