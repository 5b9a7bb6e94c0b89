#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "levysim/measures.hpp"
#include "levysim/quadrature.hpp"
#include "levysim/rng.hpp"
#include "levysim/specfun.hpp"

using namespace levysim;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("two-mode density branches") {
    CHECK(eval_two_mode(0.1) == 1.0);
    CHECK(eval_two_mode(0.3) == 0.01);
    CHECK(eval_two_mode(0.5) == 1.0);  // left-closed [0.5, 0.75)
    CHECK(eval_two_mode(0.25) == 0.01);
    CHECK(eval_two_mode(0.75) == 0.01);
    CHECK(eval_two_mode(0.0) == 1.0);
    CHECK(eval_two_mode(1.0) == 0.01);
    CHECK_THROWS_AS(eval_two_mode(-0.1), std::domain_error);
    CHECK_THROWS_AS(eval_two_mode(1.1), std::domain_error);
}

TEST_CASE("NIG Levy density") {
    const NIGSpec spec{std::sqrt(2.0), 0.0, std::sqrt(2.0)};

    SUBCASE("symmetric for beta = 0") {
        CHECK(eval_nig_levy(spec, 0.3) == eval_nig_levy(spec, -0.3));
    }
    SUBCASE("small-x law x^2 nu(x) -> delta/pi") {
        const double x = 1e-5;
        const double limit = spec.delta / kPi;
        CHECK(std::abs(x * x * eval_nig_levy(spec, x) - limit) < 0.01 * limit);
    }
    SUBCASE("value at x=1 equals (2/pi) K1(sqrt 2), by the bessel_k1 oracle") {
        const double want = 2.0 / kPi * bessel_k1(std::sqrt(2.0));
        CHECK(eval_nig_levy(spec, 1.0) == doctest::Approx(want).epsilon(1e-14));
        CHECK(eval_nig_levy(spec, 1.0) == doctest::Approx(0.20002441199426330).epsilon(1e-13));
    }
    SUBCASE("domain error at the origin") {
        CHECK_THROWS_AS(eval_nig_levy(spec, 0.0), std::domain_error);
    }
}

TEST_CASE("CGMY Levy density") {
    SUBCASE("unit parameters at x=1") {
        const CGMYSpec spec{1.0, 1.0, 1.0, 0.5};
        CHECK(eval_cgmy_levy(spec, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    }
    SUBCASE("symmetry when g = m") {
        const CGMYSpec spec{2.0, 1.5, 1.5, 0.7};
        CHECK(eval_cgmy_levy(spec, 0.7) == eval_cgmy_levy(spec, -0.7));
    }
    SUBCASE("direct arithmetic at x=0.25") {
        const CGMYSpec spec{1.0, 1.0, 2.0, 0.5};
        const double want = std::exp(-0.5) / std::pow(0.25, 1.5);
        CHECK(eval_cgmy_levy(spec, 0.25) == doctest::Approx(want).epsilon(1e-14));
        CHECK(eval_cgmy_levy(spec, 0.25) == doctest::Approx(4.8522).epsilon(1e-4));
    }
    SUBCASE("domain error at the origin") {
        CHECK_THROWS_AS(eval_cgmy_levy(CGMYSpec{1, 1, 1, 0.5}, 0.0), std::domain_error);
    }
}

TEST_CASE("Cont/Tankov parameter mapping") {
    const NIGSpec spec = nig_params_from_ct(1.0, 0.0, 0.5);
    CHECK(spec.alpha == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(spec.beta == 0.0);
    CHECK(spec.delta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    // the mapping must reproduce the documented sigma(eps) value
    CHECK(small_jump_sigma_nig(0.005, spec) == doctest::Approx(0.067).epsilon(0.01));

    SUBCASE("theta = 0 gives beta = 0") {
        CHECK(nig_params_from_ct(2.5, 0.0, 1.7).beta == 0.0);
    }
    SUBCASE("alpha > |beta| always") {
        RandomStream rng(5, "ct-map");
        for (int i = 0; i < 100; ++i) {
            const NIGSpec s = nig_params_from_ct(rng.uniform(0.1, 3.0),
                                                 rng.uniform(-2.0, 2.0),
                                                 rng.uniform(0.1, 3.0));
            CHECK(s.alpha > std::abs(s.beta));
        }
    }
}

TEST_CASE("NIG small-jump volatility") {
    const NIGSpec spec{std::sqrt(2.0), 0.0, std::sqrt(2.0)};
    CHECK(std::abs(small_jump_sigma_nig(0.005, spec) - 0.0671) < 0.0005);
    CHECK(std::abs(small_jump_sigma_nig(0.02, spec) - 0.1342) < 0.0005);
    // scales as sqrt(eps)
    CHECK(small_jump_sigma_nig(0.02, spec) ==
          doctest::Approx(2.0 * small_jump_sigma_nig(0.005, spec)).epsilon(1e-12));
    // frozen: sqrt(2 * 0.005 * sqrt(2) / pi)
    CHECK(small_jump_sigma_nig(0.005, spec) ==
          doctest::Approx(0.067093826696541392).epsilon(1e-13));
    // the asymptotic form tracks the exact quadrature closely at small eps
    CHECK(small_jump_sigma_nig_exact(0.005, spec) ==
          doctest::Approx(small_jump_sigma_nig(0.005, spec)).epsilon(0.002));
}

TEST_CASE("CGMY small-jump volatility") {
    const CGMYSpec paper{1.0, 1.0, 1.0, 0.5};
    CHECK(std::abs(small_jump_sigma_cgmy(0.005, paper) - 0.0217) < 0.0005);
    CHECK(small_jump_sigma_cgmy(0.005, paper) ==
          doctest::Approx(0.021679318009100809).epsilon(1e-12));

    SUBCASE("equals the quadrature of x^2 nu over [-eps, eps]") {
        const CGMYSpec spec{1.0, 2.0, 3.0, 0.8};
        const double eps = 0.01;
        auto integrand = [&](double x) {
            return x == 0.0 ? 0.0 : x * x * eval_cgmy_levy(spec, x);
        };
        const double by_quadrature = std::sqrt(integrate(integrand, -eps, eps, 1e-16));
        CHECK(std::abs(small_jump_sigma_cgmy(eps, spec) - by_quadrature) <
              1e-10 * by_quadrature);
    }

    SUBCASE("quadrature equality across randomized valid parameters") {
        RandomStream rng(9, "cgmy-sigma");
        for (int i = 0; i < 25; ++i) {
            const CGMYSpec spec{rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0),
                                rng.uniform(0.2, 3.0), rng.uniform(0.05, 1.0)};
            const double eps = rng.uniform(0.001, 0.05);
            auto integrand = [&](double x) {
                return x == 0.0 ? 0.0 : x * x * eval_cgmy_levy(spec, x);
            };
            const double want = std::sqrt(integrate(integrand, -eps, eps, 1e-16));
            CAPTURE(spec.c);
            CAPTURE(spec.y);
            CHECK(std::abs(small_jump_sigma_cgmy(eps, spec) - want) < 1e-9 * want);
        }
    }

    SUBCASE("scaling law sigma(eps) ~ eps^(1 - y/2)") {
        const double eps = 1e-4;
        const double ratio = small_jump_sigma_cgmy(eps, paper) /
                             small_jump_sigma_cgmy(eps / 4.0, paper);
        const double want = std::pow(4.0, 1.0 - paper.y / 2.0);
        CHECK(std::abs(ratio - want) < 0.01 * want);
    }

    SUBCASE("rejects y outside (0, 2)") {
        CHECK_THROWS_AS(small_jump_sigma_cgmy(0.005, CGMYSpec{1, 1, 1, -0.5}),
                        std::domain_error);
    }
}

TEST_CASE("Asmussen-Rosinski validity window") {
    CHECK(asmussen_rosinski_ok(CGMYSpec{1, 1, 1, 0.5}));
    CHECK(asmussen_rosinski_ok(CGMYSpec{1, 1, 1, 1.0}));
    CHECK_FALSE(asmussen_rosinski_ok(CGMYSpec{1, 1, 1, 1.5}));
    CHECK_FALSE(asmussen_rosinski_ok(CGMYSpec{1, 1, 1, -0.5}));
}

TEST_CASE("truncated intensity") {
    SUBCASE("Gaussian jump density with intensity 10") {
        const DensitySpec density =
            gaussian_jump_density(GaussianJumpSpec{0.0, 1.0}, 10.0, 8.0);
        CHECK(std::abs(truncated_intensity(density, 1e-9) - 10.0) < 1e-6);
    }
    SUBCASE("two-mode mass is 0.505 by hand") {
        const DensitySpec density = two_mode_density();
        CHECK(std::abs(truncated_intensity(density, 1e-13) - 0.505) < 1e-12);
    }
    SUBCASE("CGMY with excluded origin splits the domain") {
        const DensitySpec density = cgmy_levy_density(CGMYSpec{1, 1, 1, 0.5}, 0.005, 25.0);
        // frozen from an independent high-precision evaluation of the same integral
        CHECK(truncated_intensity(density, 1e-8) == doctest::Approx(49.761334337).epsilon(1e-8));
    }
}

TEST_CASE("densities evaluate nonnegative and finite over the domain") {
    RandomStream rng(13, "density-range");
    const DensitySpec specs[] = {
        two_mode_density(),
        gaussian_jump_density(GaussianJumpSpec{0.0, 1.0}, 10.0, 8.0),
        nig_levy_density(NIGSpec{std::sqrt(2.0), 0.3, std::sqrt(2.0)}, 0.005, 25.0),
        cgmy_levy_density(CGMYSpec{1.0, 2.0, 1.0, 0.5}, 0.005, 25.0),
    };
    for (const DensitySpec& d : specs) {
        for (int i = 0; i < 300; ++i) {
            double x = rng.uniform(d.lo, d.hi);
            if (d.excluded_origin_radius > 0.0 && std::abs(x) < d.excluded_origin_radius)
                x = std::copysign(d.excluded_origin_radius, x == 0.0 ? 1.0 : x);
            const double v = d.evaluate(x);
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
        if (d.sup_hint) CHECK(*d.sup_hint > 0.0);
    }
}
