#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "levysim/quadrature.hpp"
#include "levysim/rng.hpp"

using namespace levysim;

namespace {

// Maclaurin-series oracle for erf, good to ~1e-11 at |z| <= 4.
double erf_series(double z) {
    double term = z;
    double sum = z;
    for (int n = 1; n < 200; ++n) {
        term *= -z * z / n;
        sum += term / (2 * n + 1);
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum * 2.0 / std::sqrt(3.14159265358979323846);
}

} // namespace

TEST_CASE("integrate: polynomial exactness") {
    CHECK(std::abs(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12) - 1.0 / 3.0) <
          1e-12);
}

TEST_CASE("integrate: standard normal mass on [-5,5] vs the erf series oracle") {
    const double got = integrate(
        [](double x) {
            return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
        },
        -5.0, 5.0, 1e-10);
    const double want = erf_series(5.0 / std::sqrt(2.0));
    CHECK(std::abs(got - want) < 1e-7);
    CHECK(got == doctest::Approx(0.99999942669685624).epsilon(1e-9));
}

TEST_CASE("integrate: linearity on random polynomial pairs") {
    RandomStream rng(3, "quad-linearity");
    for (int i = 0; i < 50; ++i) {
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        const double c = rng.uniform(-2.0, 2.0);
        const double d = rng.uniform(-2.0, 2.0);
        const double alpha = rng.uniform(-3.0, 3.0);
        const double beta = rng.uniform(-3.0, 3.0);
        auto f = [=](double x) { return a * x * x + b; };
        auto g = [=](double x) { return c * x * x * x + d * x; };
        auto mix = [=](double x) { return alpha * f(x) + beta * g(x); };
        const double tol = 1e-10;
        const double lhs = integrate(mix, -1.0, 2.0, tol);
        const double rhs = alpha * integrate(f, -1.0, 2.0, tol) +
                           beta * integrate(g, -1.0, 2.0, tol);
        CHECK(std::abs(lhs - rhs) <= 2.0 * tol * (1.0 + std::abs(alpha) + std::abs(beta)));
    }
}

TEST_CASE("integrate: discontinuous integrand still converges") {
    // Step at an interior non-dyadic point.
    const double got =
        integrate([](double x) { return x < 0.3 ? 1.0 : 0.25; }, 0.0, 1.0, 1e-9);
    CHECK(std::abs(got - (0.3 + 0.7 * 0.25)) < 1e-8);
}

TEST_CASE("integrate: error paths") {
    QuadratureSpec bad_interval{1.0, 0.0, 1e-8, 1000};
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, bad_interval),
                    std::invalid_argument);

    QuadratureSpec bad_tol{0.0, 1.0, 0.0, 1000};
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, bad_tol), std::invalid_argument);

    QuadratureSpec starved{0.0, 1.0, 1e-14, 3};
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(50.0 * x); }, starved),
                    std::runtime_error);

    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-8),
                    std::runtime_error);
}
