#include <doctest.h>

#include <cmath>
#include <vector>

#include "levysim/rng.hpp"

using namespace levysim;

TEST_CASE("identical seed and name give identical streams") {
    RandomStream a(42, "jumps");
    RandomStream b(42, "jumps");
    for (int i = 0; i < 1000; ++i) CHECK(a.uniform01() == b.uniform01());
    CHECK(a.normal() == b.normal());
    CHECK(a.poisson(7.5) == b.poisson(7.5));
}

TEST_CASE("different stream names decorrelate") {
    RandomStream a(42, "jumps");
    RandomStream b(42, "brownian");
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.uniform01() == b.uniform01()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("uniform(a, b) stays in range with the right mean") {
    RandomStream rng(1, "u");
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(2.0, 5.0);
        REQUIRE(x >= 2.0);
        REQUIRE(x < 5.0);
        sum += x;
    }
    CHECK(std::abs(sum / n - 3.5) < 0.01);
}

TEST_CASE("normal moments") {
    RandomStream rng(2, "n");
    const int n = 500000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
        sum4 += z * z * z * z;
    }
    CHECK(std::abs(sum / n) < 0.005);
    CHECK(std::abs(sum2 / n - 1.0) < 0.01);
    CHECK(std::abs(sum4 / n - 3.0) < 0.05);
}

TEST_CASE("poisson moments, small and chunked-large means") {
    RandomStream rng(3, "p");
    for (const double mean : {0.3, 10.0, 180.0}) {
        const int n = mean > 100 ? 20000 : 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            sum += k;
            sum2 += k * k;
        }
        const double m = sum / n;
        const double var = sum2 / n - m * m;
        CAPTURE(mean);
        CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n));
        CHECK(std::abs(var - mean) < 0.05 * mean + 0.1);
    }
}

TEST_CASE("exponential mean") {
    RandomStream rng(4, "e");
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.exponential(2.5);
    CHECK(std::abs(sum / n - 2.5) < 0.02);
}

TEST_CASE("uniform call counter") {
    RandomStream rng(5, "c");
    CHECK(rng.uniform_calls() == 0);
    rng.uniform01();
    CHECK(rng.uniform_calls() == 1);
    rng.normal(); // two uniforms
    CHECK(rng.uniform_calls() == 3);
}
