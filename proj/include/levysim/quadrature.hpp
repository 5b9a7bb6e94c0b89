#pragma once

#include <functional>

namespace levysim {

struct QuadratureSpec {
    double a = 0.0;
    double b = 1.0;
    double abs_tol = 1e-10;
    int max_refinements = 20000;
};

// Adaptive Simpson integration of f over [a, b]. Intervals are bisected
// worst-error-first until the summed error estimate drops below abs_tol.
// Throws std::invalid_argument on a bad spec and std::runtime_error when the
// refinement budget is exhausted before the tolerance is met.
double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec);

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10) {
    return integrate(f, QuadratureSpec{a, b, abs_tol});
}

} // namespace levysim
